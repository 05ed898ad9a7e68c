#pragma once

#include "lpgraph/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lpgraph {

using SparseMatrixd = Eigen::SparseMatrix<double>;

/// Gershgorin upper bound for the largest eigenvalue of a symmetric matrix.
inline double gershgorin_upper(const SparseMatrixd& s) {
    Vectord radius = Vectord::Zero(s.rows());
    Vectord diag = Vectord::Zero(s.rows());
    for (int k = 0; k < s.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(s, k); it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] = it.value();
            else
                radius[it.row()] += std::abs(it.value());
        }
    return (diag + radius).maxCoeff();
}

/// e^{-tS} v for symmetric positive semidefinite S via the Chebyshev expansion
/// of the exponential on [0, lambda_max]. Coefficients are Bessel values
/// e^{-a} I_k(a); the series is truncated once they fall below tol.
inline Vectord chebyshev_heat_apply(const SparseMatrixd& s, double lambda_max, double t,
                                    const Vectord& v, double tol = 1e-13) {
    if (t < 0.0) throw std::invalid_argument("chebyshev_heat_apply: t < 0");
    if (t == 0.0 || lambda_max <= 0.0) return v;
    const double a = 0.5 * t * lambda_max;
    if (a > 300.0)
        throw std::invalid_argument("chebyshev_heat_apply: t * lambda_max too large");
    const double scale = std::exp(-a);

    // S mapped to [-1, 1]: x = (2/lambda_max) S - I
    auto apply_mapped = [&](const Vectord& u) -> Vectord {
        return (2.0 / lambda_max) * (s * u) - u;
    };

    Vectord tk_prev = v;
    Vectord tk = apply_mapped(v);
    Vectord acc = scale * std::cyl_bessel_i(0, a) * tk_prev;
    int stale = 0;
    for (int k = 1; k < 2000; ++k) {
        const double coef = 2.0 * scale * std::cyl_bessel_i(k, a) * (k % 2 ? -1.0 : 1.0);
        acc += coef * tk;
        if (std::abs(coef) < tol)
            ++stale;
        else
            stale = 0;
        if (stale >= 3) break;
        Vectord tk_next = 2.0 * apply_mapped(tk) - tk_prev;
        tk_prev.swap(tk);
        tk.swap(tk_next);
    }
    return acc;
}

struct LanczosResult {
    double value = 0.0;
    Vectord vector;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

namespace detail {

inline Vectord lanczos_start(Index n) {
    Vectord q(n);
    for (Index i = 0; i < n; ++i)
        q[i] = 1.0 + 1e-3 * static_cast<double>((static_cast<std::uint64_t>(i) *
                                                 2654435761ULL) % 1024) / 1024.0;
    q.normalize();
    return q;
}

/// Lanczos with full reorthogonalization on an abstract symmetric operator.
/// Ritz convergence is estimated by beta |s_m|; the residual reported to the
/// caller is re-measured against `residual_op`.
inline LanczosResult lanczos_operator(
    const std::function<Vectord(const Vectord&)>& apply, Index n, bool largest,
    const std::function<double(double)>& to_eigenvalue,
    const std::function<Vectord(const Vectord&)>& residual_op, int max_iter, double tol) {
    max_iter = static_cast<int>(std::min<Index>(max_iter, n));
    std::vector<Vectord> basis;
    std::vector<double> alpha, beta;
    Vectord q = lanczos_start(n);

    LanczosResult res;
    for (int j = 0; j < max_iter; ++j) {
        basis.push_back(q);
        Vectord w = apply(q);
        alpha.push_back(q.dot(w));
        w -= alpha[j] * q;
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (int pass = 0; pass < 2; ++pass)
            for (const Vectord& b : basis) w -= b.dot(w) * b;
        beta.push_back(w.norm());
        const int m = j + 1;

        const bool last = beta[j] < 1e-14 || j == max_iter - 1;
        if (last || j >= 4) {
            Matrixd tri = Matrixd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                tri(i, i) = alpha[i];
                if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Matrixd> es(tri);
            const int pick = largest ? m - 1 : 0;
            const double theta = es.eigenvalues()[pick];
            const Vectord y = es.eigenvectors().col(pick);
            if (beta[j] * std::abs(y[m - 1]) < tol || last) {
                Vectord x = Vectord::Zero(n);
                for (int i = 0; i < m; ++i) x += y[i] * basis[i];
                x.normalize();
                res.value = to_eigenvalue(theta);
                res.vector = x;
                res.iterations = m;
                res.residual = (residual_op(x) - res.value * x).norm();
                res.converged = res.residual < std::max(100.0 * tol, 1e-9);
                if (res.converged || last) return res;
            }
        }
        if (beta[j] < 1e-14) break;
        q = w / beta[j];
    }
    return res;
}

}  // namespace detail

/// Extreme eigenpair of a sparse symmetric matrix by direct Lanczos.
inline LanczosResult lanczos_extreme(const SparseMatrixd& s, bool smallest,
                                     int max_iter = 300, double tol = 1e-11) {
    auto apply = [&](const Vectord& v) -> Vectord { return s * v; };
    return detail::lanczos_operator(apply, s.rows(), !smallest,
                                    [](double th) { return th; }, apply, max_iter, tol);
}

/// Bottom eigenpair via shift-invert Lanczos: the largest eigenvalue of
/// (S - sigma I)^{-1} with sigma below the spectrum. Converges in a few tens
/// of iterations, which keeps the basis small on very large windows.
inline LanczosResult lanczos_smallest_shift_invert(const SparseMatrixd& s, double sigma,
                                                   int max_iter = 80, double tol = 1e-12) {
    SparseMatrixd shifted = s;
    for (Index i = 0; i < s.rows(); ++i) shifted.coeffRef(i, i) -= sigma;
    Eigen::SimplicialLDLT<SparseMatrixd> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("shift-invert Lanczos: factorization failed");
    auto apply = [&](const Vectord& v) -> Vectord { return solver.solve(v); };
    auto direct = [&](const Vectord& v) -> Vectord { return s * v; };
    return detail::lanczos_operator(apply, s.rows(), true,
                                    [sigma](double mu) { return sigma + 1.0 / mu; }, direct,
                                    max_iter, tol);
}

}  // namespace lpgraph
