#pragma once

#include "lpgraph/generators.hpp"
#include "lpgraph/metric.hpp"
#include "lpgraph/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace lpgraph {

/// Windows this large still get a dense eigendecomposition; larger ones are
/// handled by sparse iterative paths.
inline constexpr Index kDenseLimit = 3000;

/// Dirichlet restriction of the Laplacian to a finite window: edges leaving
/// the window become an added killing potential, so the truncated heat kernel
/// is pointwise dominated by the full one.
struct Truncation {
    WeightedGraph window;
    Vectord boundary_killing;
    VertexId root = -1;  // -1 when the window does not contain the family root
    int radius = 0;
    int buffer = 0;
    std::string family_kind;
    std::vector<std::int64_t> labels;
};

/// Hop distances from a vertex within the window graph (-1 unreachable).
inline std::vector<int> window_hops(const WeightedGraph& g, VertexId from) {
    std::vector<int> hops(static_cast<std::size_t>(g.vertex_count()), -1);
    std::vector<VertexId> queue{from};
    hops[from] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId x = queue[head];
        for (const auto& nb : g.neighbors(x))
            if (hops[nb.vertex] == -1) {
                hops[nb.vertex] = hops[x] + 1;
                queue.push_back(nb.vertex);
            }
    }
    return hops;
}

/// Induced truncation on a vertex subset of a materialized window; killing is
/// derived from the family's exact full-degree data.
inline Truncation induced_truncation(const FamilyWindow& w, const std::vector<VertexId>& keep,
                                     std::string family_kind) {
    const Index nk = static_cast<Index>(keep.size());
    std::vector<Index> to_new(static_cast<std::size_t>(w.graph.vertex_count()), -1);
    for (Index i = 0; i < nk; ++i) to_new[keep[i]] = i;

    std::vector<Edge> edges;
    for (const Edge& e : w.graph.edges()) {
        const Index u = to_new[e.u], v = to_new[e.v];
        if (u >= 0 && v >= 0)
            edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), e.b});
    }
    Vectord m(nk), c(nk), full_n(nk);
    Truncation tr;
    tr.labels.resize(static_cast<std::size_t>(nk));
    for (Index i = 0; i < nk; ++i) {
        m[i] = w.graph.m()[keep[i]];
        c[i] = w.graph.c()[keep[i]];
        full_n[i] = w.full_weighted_degree[keep[i]];
        tr.labels[i] = w.labels[keep[i]];
    }
    tr.window = WeightedGraph(nk, std::move(edges), std::move(m), std::move(c));
    tr.boundary_killing = full_n - normalizing_measure(tr.window);
    for (Index i = 0; i < nk; ++i)
        if (tr.boundary_killing[i] < 0.0 && tr.boundary_killing[i] > -1e-12)
            tr.boundary_killing[i] = 0.0;
    tr.root = w.root >= 0 && to_new[w.root] >= 0 ? static_cast<VertexId>(to_new[w.root]) : -1;
    tr.family_kind = std::move(family_kind);
    return tr;
}

/// W = B_R(root) in the family's natural metric. The family must support
/// radius R + buffer; the buffer is recorded for downstream distance checks.
inline Truncation truncate(const GraphFamily& family, int radius, int buffer = 0,
                           MeasureChoice measure = MeasureChoice::Given) {
    const FamilyWindow w = with_measure(family.materialize(radius + buffer), measure);
    const auto hops = window_hops(w.graph, w.root);
    std::vector<VertexId> keep;
    for (VertexId x = 0; x < w.graph.vertex_count(); ++x)
        if (hops[x] >= 0 && hops[x] <= radius) keep.push_back(x);
    Truncation tr = induced_truncation(w, keep, family.kind());
    tr.radius = radius;
    tr.buffer = buffer;
    return tr;
}

/// Whole finite graph as a boundaryless truncation (test fixture form).
inline Truncation full_graph_truncation(WeightedGraph g) {
    Truncation tr;
    tr.boundary_killing = Vectord::Zero(g.vertex_count());
    tr.labels.resize(static_cast<std::size_t>(g.vertex_count()));
    for (Index i = 0; i < g.vertex_count(); ++i) tr.labels[i] = i;
    tr.window = std::move(g);
    tr.root = 0;
    tr.family_kind = "graph";
    return tr;
}

/// m = n variant of a finite graph (normalized Laplacian fixture).
inline WeightedGraph normalized(const WeightedGraph& g) {
    return g.with_measure(normalizing_measure(g));
}

/// Dirichlet window Laplacian A f(x) = (1/m) [sum_W b (f(x)-f(y)) + (c+killing) f]
/// together with its m-symmetrization S = M^{1/2} A M^{-1/2}. Dense windows
/// carry the full eigendecomposition of S; large windows only the sparse form.
struct LaplacianMatrix {
    Index size = 0;
    Vectord m;
    Vectord diag;           // (n_W + c + killing)/m
    SparseMatrixd sym_sparse;
    Matrixd action;         // dense only
    Matrixd sym;            // dense only
    Vectord eigenvalues;    // of S, ascending; dense only
    Matrixd eigenvectors;   // dense only
    bool dense = false;
};

enum class AssembleMode { Auto, SparseOnly };

inline LaplacianMatrix assemble(const Truncation& tr, AssembleMode mode = AssembleMode::Auto) {
    const WeightedGraph& g = tr.window;
    const Index n = g.vertex_count();
    LaplacianMatrix L;
    L.size = n;
    L.m = g.m();
    const Vectord nw = normalizing_measure(g);
    L.diag = (nw + g.c() + tr.boundary_killing).cwiseQuotient(g.m());

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(g.edges().size() * 2 + n);
    for (Index i = 0; i < n; ++i) trip.emplace_back(i, i, L.diag[i]);
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        const double off = -e.b / std::sqrt(g.m()[e.u] * g.m()[e.v]);
        trip.emplace_back(e.u, e.v, off);
        trip.emplace_back(e.v, e.u, off);
    }
    L.sym_sparse.resize(n, n);
    L.sym_sparse.setFromTriplets(trip.begin(), trip.end());

    if (n <= kDenseLimit && mode == AssembleMode::Auto) {
        L.action = Matrixd::Zero(n, n);
        L.sym = Matrixd::Zero(n, n);
        for (Index i = 0; i < n; ++i) L.action(i, i) = L.sym(i, i) = L.diag[i];
        for (const Edge& e : g.edges()) {
            if (e.u == e.v) continue;
            L.action(e.u, e.v) -= e.b / g.m()[e.u];
            L.action(e.v, e.u) -= e.b / g.m()[e.v];
            const double off = -e.b / std::sqrt(g.m()[e.u] * g.m()[e.v]);
            L.sym(e.u, e.v) += off;
            L.sym(e.v, e.u) += off;
        }
        Eigen::SelfAdjointEigenSolver<Matrixd> es(L.sym);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("assemble: eigendecomposition failed");
        L.eigenvalues = es.eigenvalues();
        L.eigenvectors = es.eigenvectors();
        L.dense = true;
    }
    return L;
}

inline void require_dense(const LaplacianMatrix& L, const char* what) {
    if (!L.dense) throw std::invalid_argument(std::string(what) + ": window too large for dense kernels");
}

template <class T>
T conj_value(const T& v) {
    if constexpr (std::is_same_v<T, Complex>)
        return std::conj(v);
    else
        return v;
}

/// Q(f,g) = 1/2 sum b(x,y)(f(x)-f(y)) conj(g(x)-g(y)) + sum (c+killing) f conj(g).
template <class Scalar>
Scalar dirichlet_energy(const Truncation& tr, const DenseVector<Scalar>& f,
                        const DenseVector<Scalar>& g) {
    Scalar q{};
    for (const Edge& e : tr.window.edges()) {
        if (e.u == e.v) continue;
        q += e.b * (f[e.u] - f[e.v]) * conj_value<Scalar>(g[e.u] - g[e.v]);
    }
    const Vectord pot = tr.window.c() + tr.boundary_killing;
    for (Index x = 0; x < tr.window.vertex_count(); ++x)
        q += pot[x] * f[x] * conj_value<Scalar>(g[x]);
    return q;
}

enum class KernelTag { Heat, Resolvent, SquaredResolvent, Transition };

/// Kernel k(x,y) of an operator with respect to m: (Tf)(x) = sum_y k(x,y) f(y) m(y).
template <class Scalar>
struct KernelMatrix {
    DenseMatrix<Scalar> k;
    Vectord m;
    KernelTag tag = KernelTag::Heat;
};

namespace detail {

/// M^{-1/2} U diag(phi(lambda)) U^T M^{-1/2}, symmetrized exactly.
template <class Scalar, class Fn>
DenseMatrix<Scalar> spectral_kernel(const LaplacianMatrix& L, Fn&& phi) {
    DenseVector<Scalar> f(L.size);
    for (Index i = 0; i < L.size; ++i) f[i] = phi(L.eigenvalues[i]);
    DenseMatrix<Scalar> core =
        L.eigenvectors.template cast<Scalar>() * f.asDiagonal() *
        L.eigenvectors.transpose().template cast<Scalar>();
    core = ((core + core.transpose()) * Scalar(0.5)).eval();
    const Vectord is = L.m.cwiseSqrt().cwiseInverse();
    return is.template cast<Scalar>().asDiagonal() * core *
           is.template cast<Scalar>().asDiagonal();
}

}  // namespace detail

/// Heat kernel p_t = kernel of e^{-tL}; symmetric, nonnegative, sub-stochastic,
/// with p_0(x,y) = delta_xy / m(x).
inline KernelMatrix<double> heat_kernel(const LaplacianMatrix& L, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_kernel: t < 0");
    require_dense(L, "heat_kernel");
    KernelMatrix<double> K;
    K.k = detail::spectral_kernel<double>(L, [t](double l) { return std::exp(-t * l); });
    K.m = L.m;
    K.tag = KernelTag::Heat;
    return K;
}

/// One column p_t(., y) for windows beyond the dense limit, via Chebyshev
/// approximation of e^{-tS} applied to a basis vector.
inline Vectord heat_kernel_column(const LaplacianMatrix& L, double t, VertexId y,
                                  double lambda_max) {
    Vectord e = Vectord::Zero(L.size);
    e[y] = 1.0 / std::sqrt(L.m[y]);
    Vectord col = chebyshev_heat_apply(L.sym_sparse, lambda_max, t, e);
    return col.cwiseQuotient(L.m.cwiseSqrt());
}

inline void require_off_spectrum(const LaplacianMatrix& L, Complex z) {
    for (Index i = 0; i < L.eigenvalues.size(); ++i)
        if (std::abs(z - Complex(L.eigenvalues[i], 0.0)) < 1e-8)
            throw std::invalid_argument("resolvent: parameter within 1e-8 of the spectrum");
}

/// Resolvent kernel g_alpha of (L - alpha)^{-1}; entrywise nonnegative for
/// alpha < 0 (Laplace transform of the heat kernel).
inline KernelMatrix<double> resolvent_kernel(const LaplacianMatrix& L, double alpha) {
    require_dense(L, "resolvent_kernel");
    require_off_spectrum(L, Complex(alpha, 0.0));
    KernelMatrix<double> K;
    K.k = detail::spectral_kernel<double>(L, [alpha](double l) { return 1.0 / (l - alpha); });
    K.m = L.m;
    K.tag = KernelTag::Resolvent;
    return K;
}

/// Kernel of (L - z)^{-2} for complex z off the spectrum.
inline KernelMatrix<Complex> squared_resolvent_kernel(const LaplacianMatrix& L, Complex z) {
    require_dense(L, "squared_resolvent_kernel");
    require_off_spectrum(L, z);
    KernelMatrix<Complex> K;
    K.k = detail::spectral_kernel<Complex>(L, [z](double l) {
        const Complex d = Complex(l, 0.0) - z;
        return 1.0 / (d * d);
    });
    K.m = L.m;
    K.tag = KernelTag::SquaredResolvent;
    return K;
}

/// Least-squares fit of log|k(x,y)| against d(x,y) over off-diagonal pairs.
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    Index pairs = 0;
};

template <class Scalar>
DecayFit kernel_decay_fit(const KernelMatrix<Scalar>& K, const Matrixd& dist) {
    DecayFit fit;
    // entries below the roundoff floor carry no decay information
    const double floor = 1e-13 * K.k.cwiseAbs().maxCoeff();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (Index x = 0; x < K.k.rows(); ++x)
        for (Index y = 0; y < K.k.cols(); ++y) {
            if (x == y || dist(x, y) == kUnreachable) continue;
            const double a = std::abs(K.k(x, y));
            if (a <= floor) continue;
            const double lx = dist(x, y), ly = std::log(a);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
            ++fit.pairs;
        }
    if (fit.pairs < 2) return fit;
    const double n = static_cast<double>(fit.pairs);
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    if (vxx <= 0.0) return fit;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.r_squared = vyy > 0.0 ? vxy * vxy / (vxx * vyy) : 1.0;
    return fit;
}

/// m-weighted kernel composition: (K1 o K2)(x,z) = sum_y k1(x,y) k2(y,z) m(y).
template <class Scalar>
KernelMatrix<Scalar> compose(const KernelMatrix<Scalar>& a, const KernelMatrix<Scalar>& b) {
    KernelMatrix<Scalar> out;
    out.k = a.k * a.m.template cast<Scalar>().asDiagonal() * b.k;
    out.m = a.m;
    out.tag = a.tag;
    return out;
}

inline bool valid_norm_index(double p) { return p >= 1.0; }

/// Operator norm of the kernel on l^p -> l^q. Exact for (1,1), (inf,inf),
/// (1,inf) and, on symmetric kernels, (2,2); other pairs return the integral
/// upper bound (sum_y ||k(.,y)||_q^{p*} m(y))^{1/p*}.
template <class Scalar>
double kernel_norm(const KernelMatrix<Scalar>& K, double p, double q) {
    if (!valid_norm_index(p) || !valid_norm_index(q))
        throw std::invalid_argument("kernel_norm: p, q must lie in [1, inf]");
    const Index n = K.k.rows();
    const bool p_inf = std::isinf(p), q_inf = std::isinf(q);

    if constexpr (std::is_same_v<Scalar, double>) {
        // exact route for real symmetric kernels: spectral radius of M^{1/2} K M^{1/2}
        if (p == 2.0 && q == 2.0) {
            const double asym = (K.k - K.k.transpose()).cwiseAbs().maxCoeff() /
                                std::max(1.0, K.k.cwiseAbs().maxCoeff());
            if (asym < 1e-12) {
                const Vectord rs = K.m.cwiseSqrt();
                Matrixd t = rs.asDiagonal() * K.k * rs.asDiagonal();
                Eigen::SelfAdjointEigenSolver<Matrixd> es(t);
                return es.eigenvalues().cwiseAbs().maxCoeff();
            }
        }
    }
    if (p_inf && q_inf) {
        double best = 0.0;
        for (Index x = 0; x < n; ++x) {
            double row = 0.0;
            for (Index y = 0; y < n; ++y) row += std::abs(K.k(x, y)) * K.m[y];
            best = std::max(best, row);
        }
        return best;
    }
    if (q_inf) {
        // sup_x ||k(x,.)||_{p*}; equality at p = 1
        const double ps = p == 1.0 ? kInfNorm : p / (p - 1.0);
        double best = 0.0;
        for (Index x = 0; x < n; ++x) {
            double acc = 0.0;
            for (Index y = 0; y < n; ++y) {
                const double a = std::abs(K.k(x, y));
                if (std::isinf(ps))
                    acc = std::max(acc, a);
                else
                    acc += std::pow(a, ps) * K.m[y];
            }
            best = std::max(best, std::isinf(ps) ? acc : std::pow(acc, 1.0 / ps));
        }
        return best;
    }
    // column q-norms, then the p*-mean over columns (exact for p = 1)
    Vectord colnorm(n);
    for (Index y = 0; y < n; ++y) {
        double acc = 0.0;
        for (Index x = 0; x < n; ++x) acc += std::pow(std::abs(K.k(x, y)), q) * K.m[x];
        colnorm[y] = std::pow(acc, 1.0 / q);
    }
    if (p == 1.0) return colnorm.maxCoeff();
    const double ps = p_inf ? 1.0 : p / (p - 1.0);
    double acc = 0.0;
    for (Index y = 0; y < n; ++y) acc += std::pow(colnorm[y], ps) * K.m[y];
    return std::pow(acc, 1.0 / ps);
}

/// Transition kernel P f(x) = (1/n(x)) sum_y b(x,y) f(y) of a normalized
/// truncation (m = n, c = 0); L = I - P there.
inline KernelMatrix<double> transition_matrix(const Truncation& tr) {
    const WeightedGraph& g = tr.window;
    const Vectord n_full = normalizing_measure(g) + tr.boundary_killing;
    if ((g.m() - n_full).cwiseAbs().maxCoeff() > 1e-12 * g.m().maxCoeff() ||
        g.c().cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("transition_matrix: requires m = n and c = 0");
    KernelMatrix<double> K;
    K.k = Matrixd::Zero(g.vertex_count(), g.vertex_count());
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        const double val = e.b / (n_full[e.u] * n_full[e.v]);
        K.k(e.u, e.v) = K.k(e.v, e.u) = val;
    }
    K.m = g.m();
    K.tag = KernelTag::Transition;
    return K;
}

}  // namespace lpgraph
