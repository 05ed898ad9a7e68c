#pragma once

#include "lpgraph/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lpgraph {

/// Full spectrum of the symmetrized truncation (dense windows only).
inline Vectord eigenvalues(const LaplacianMatrix& L) {
    require_dense(L, "eigenvalues");
    return L.eigenvalues;
}

/// Bottom eigenvalue; dense windows read the cached decomposition, larger
/// ones run shift-invert Lanczos with the shift placed just below 0.
inline double bottom_eigenvalue(const LaplacianMatrix& L) {
    if (L.dense) return L.eigenvalues[0];
    if (L.size <= 64) {
        Eigen::SelfAdjointEigenSolver<Matrixd> es(Matrixd(L.sym_sparse));
        return es.eigenvalues()[0];
    }
    const double sigma = -0.01 * std::max(1.0, 0.5 * gershgorin_upper(L.sym_sparse));
    const LanczosResult r = lanczos_smallest_shift_invert(L.sym_sparse, sigma);
    if (!r.converged) throw std::runtime_error("bottom_eigenvalue: Lanczos did not converge");
    return r.value;
}

inline double top_eigenvalue(const LaplacianMatrix& L) {
    if (L.dense) return L.eigenvalues[L.size - 1];
    if (L.size <= 64) {
        Eigen::SelfAdjointEigenSolver<Matrixd> es(Matrixd(L.sym_sparse));
        return es.eigenvalues()[L.size - 1];
    }
    const LanczosResult r = lanczos_extreme(L.sym_sparse, false);
    if (!r.converged) throw std::runtime_error("top_eigenvalue: Lanczos did not converge");
    return r.value;
}

/// Geometric grid {2^k : k = -3..5} used by the spectral-bound probes.
inline std::vector<double> default_t_grid() {
    std::vector<double> g;
    for (int k = -3; k <= 5; ++k) g.push_back(std::ldexp(1.0, k));
    return g;
}

/// Grid trimmed to 2^3: on small Dirichlet windows the larger t are biased by
/// boundary leakage toward the window's own bottom eigenvalue.
inline std::vector<double> stable_t_grid() {
    std::vector<double> g;
    for (int k = -3; k <= 3; ++k) g.push_back(std::ldexp(1.0, k));
    return g;
}

/// Dirichlet exhaustion of the bottom eigenvalue over growing windows.
struct ExhaustionSeries {
    std::vector<int> radii;
    std::vector<double> lambda0;
    double extrapolated = 0.0;  // 1/R^2 model on the last two radii
};

inline ExhaustionSeries bottom_exhaustion(const GraphFamily& family,
                                          const std::vector<int>& radii,
                                          MeasureChoice measure = MeasureChoice::Given) {
    ExhaustionSeries s;
    for (int r : radii) {
        const Truncation tr = truncate(family, r, 0, measure);
        const LaplacianMatrix L = assemble(tr, AssembleMode::SparseOnly);
        s.radii.push_back(r);
        s.lambda0.push_back(bottom_eigenvalue(L));
    }
    const std::size_t k = s.radii.size();
    if (k >= 2) {
        const double r1 = s.radii[k - 2], r2 = s.radii[k - 1];
        const double l1 = s.lambda0[k - 2], l2 = s.lambda0[k - 1];
        s.extrapolated = (l2 * r2 * r2 - l1 * r1 * r1) / (r2 * r2 - r1 * r1);
    } else if (k == 1) {
        s.extrapolated = s.lambda0[0];
    }
    return s;
}

/// -(1/t) log ||e^{-tL}||_{p,p}, maximized over the grid. Exact norms for
/// p in {1, 2, inf}; other p are served by interpolation_bound.
inline double p_growth_bound_of(const LaplacianMatrix& L, double p,
                                const std::vector<double>& t_grid) {
    if (!(p == 1.0 || p == 2.0 || std::isinf(p)))
        throw std::invalid_argument("p_growth_bound: p in {1,2,inf}; use interpolation_bound");
    double best = -std::numeric_limits<double>::infinity();
    if (p == 2.0 && !L.dense)
        return bottom_eigenvalue(L);  // ||e^{-tL}||_{2,2} = e^{-t lambda0} for every t
    const double lmax = L.dense ? L.eigenvalues[L.size - 1] + 1e-9
                                : gershgorin_upper(L.sym_sparse);
    for (double t : t_grid) {
        double norm;
        if (L.dense) {
            norm = kernel_norm(heat_kernel(L, t), p, p);
        } else {
            // column masses sum_x p_t(x,y) m(x) in one Chebyshev apply
            const Vectord rootm = L.m.cwiseSqrt();
            const Vectord u = chebyshev_heat_apply(L.sym_sparse, lmax, t, rootm);
            norm = (u.cwiseQuotient(rootm)).maxCoeff();
        }
        best = std::max(best, -std::log(norm) / t);
    }
    return best;
}

inline double p_growth_bound(const GraphFamily& family, int radius, double p,
                             const std::vector<double>& t_grid,
                             MeasureChoice measure = MeasureChoice::Given) {
    return p_growth_bound_of(assemble(truncate(family, radius, 0, measure)), p, t_grid);
}

/// Riesz-Thorin style lower bound for the spectral bound at p from the
/// endpoint values: (2/p - 1) l1 + (2 - 2/p) l2 on [1,2], mirrored by duality.
inline double interpolation_bound(double lambda1, double lambda2, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("interpolation_bound: p >= 1");
    double q = p;
    if (std::isinf(p))
        q = 1.0;
    else if (p > 2.0)
        q = p / (p - 1.0);
    const double theta = 2.0 - 2.0 / q;  // q in [1,2]
    return (1.0 - theta) * lambda1 + theta * lambda2;
}

/// All eigenvalues inside [0, 2] up to tolerance (normalized case).
inline bool disk_check(const Vectord& eigs, double tol = 1e-9) {
    return eigs.minCoeff() >= -tol && eigs.maxCoeff() <= 2.0 + tol;
}

struct SymmetryCheck {
    bool pass = false;
    double max_defect = 0.0;
    std::vector<std::pair<double, double>> pairing;  // (lambda, partner with sum 2)
};

/// Multiset equality spectrum == 2 - spectrum within tolerance, with the
/// explicit pairing lambda_i <-> lambda_{n-1-i}.
inline SymmetryCheck bipartite_symmetry_check(const Vectord& eigs, double tol = 1e-9) {
    SymmetryCheck out;
    const Index n = eigs.size();
    for (Index i = 0; i < n; ++i) {
        const double partner = eigs[n - 1 - i];
        out.pairing.emplace_back(eigs[i], partner);
        out.max_defect = std::max(out.max_defect, std::abs(eigs[i] - (2.0 - partner)));
    }
    out.pass = out.max_defect <= tol;
    return out;
}

/// Sign flip on the second bipartition class; preserves every l^p norm and
/// conjugates the normalized spectrum via lambda <-> 2 - lambda.
template <class Scalar>
DenseVector<Scalar> flip_involution(const DenseVector<Scalar>& f, const Bipartition& bp) {
    DenseVector<Scalar> out = f;
    for (std::size_t x = 0; x < bp.side.size(); ++x)
        if (bp.side[x] == 1) out[static_cast<Index>(x)] = -out[static_cast<Index>(x)];
    return out;
}

template <class Scalar>
double lp_norm(const DenseVector<Scalar>& f, const Vectord& m, double p) {
    if (std::isinf(p)) {
        double best = 0.0;
        for (Index i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f[i]));
        return best;
    }
    double acc = 0.0;
    for (Index i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p) * m[i];
    return std::pow(acc, 1.0 / p);
}

/// Bottom Dirichlet eigenvalue of the annulus {K <= hop <= R}; probes the
/// essential spectrum (values near 1 on normalized rapidly branching trees).
inline double exterior_bottom(const GraphFamily& family, int k_radius, int radius,
                              MeasureChoice measure = MeasureChoice::Given) {
    const FamilyWindow w = with_measure(family.materialize(radius), measure);
    const auto hops = window_hops(w.graph, w.root);
    std::vector<VertexId> keep;
    for (VertexId x = 0; x < w.graph.vertex_count(); ++x)
        if (hops[x] >= k_radius && hops[x] <= radius) keep.push_back(x);
    if (keep.empty()) throw std::invalid_argument("exterior_bottom: empty annulus");
    Truncation tr = induced_truncation(w, keep, family.kind());
    tr.radius = radius;
    return bottom_eigenvalue(assemble(tr));
}

}  // namespace lpgraph
