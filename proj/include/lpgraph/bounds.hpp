#pragma once

#include "lpgraph/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lpgraph {

struct BoundViolation {
    std::int64_t x = 0, y = 0;  // family labels
    double t = 0.0;             // t for heat bounds, unused for resolvents
    double lhs = 0.0, rhs = 0.0;
};

struct BoundCheckReport {
    std::vector<BoundViolation> violations;
    Index pairs_checked = 0;
    double max_ratio = 0.0;  // worst lhs/rhs seen
};

/// Kernel entries are accurate to roughly this absolute level; bound checks
/// allow it as slack so rounding noise cannot manufacture violations.
inline constexpr double kKernelSlack = 1e-12;

namespace detail {

/// Shared setup for the kernel bound checks: the kernel truncation, the inner
/// test set B_R and intrinsic distances computed on the buffered window.
struct BoundContext {
    Truncation trunc;
    LaplacianMatrix laplacian;
    std::vector<VertexId> inner;  // indices into trunc.window
    Matrixd dist;                 // |inner| x |inner|
};

inline BoundContext make_bound_context(const GraphFamily& family, int radius, int buffer,
                                       MeasureChoice measure) {
    const FamilyWindow big = with_measure(family.materialize(radius + buffer), measure);
    const auto hops = window_hops(big.graph, big.root);
    std::vector<VertexId> inner_big;
    for (VertexId x = 0; x < big.graph.vertex_count(); ++x)
        if (hops[x] >= 0 && hops[x] <= radius) inner_big.push_back(x);

    // distances on the buffered window; only inner pairs are kept
    const EdgeWeighting w = default_intrinsic_weights_full(big);
    const Index ni = static_cast<Index>(inner_big.size());
    Matrixd dist(ni, ni);
    for (Index i = 0; i < ni; ++i) {
        const Vectord row = single_source_distances(big.graph, w, inner_big[i]);
        for (Index j = 0; j < ni; ++j) dist(i, j) = row[inner_big[j]];
    }

    BoundContext ctx;
    std::vector<VertexId> keep;
    if (big.graph.vertex_count() <= kDenseLimit) {
        keep.resize(static_cast<std::size_t>(big.graph.vertex_count()));
        for (Index i = 0; i < big.graph.vertex_count(); ++i) keep[i] = static_cast<VertexId>(i);
        ctx.inner = inner_big;
    } else {
        // kernel on B_R only; still dominated by the full kernel
        keep = inner_big;
        ctx.inner.resize(inner_big.size());
        for (Index i = 0; i < ni; ++i) ctx.inner[i] = static_cast<VertexId>(i);
    }
    ctx.trunc = induced_truncation(big, keep, family.kind());
    ctx.trunc.radius = radius;
    ctx.trunc.buffer = buffer;
    ctx.laplacian = assemble(ctx.trunc);
    ctx.dist = std::move(dist);
    return ctx;
}

template <class Rhs>
void check_kernel_pairs(const BoundContext& ctx, const Matrixd& kernel, double t,
                        Rhs&& rhs_fn, BoundCheckReport& rep) {
    const Index ni = static_cast<Index>(ctx.inner.size());
    for (Index i = 0; i < ni; ++i)
        for (Index j = i; j < ni; ++j) {
            const VertexId x = ctx.inner[i], y = ctx.inner[j];
            const double lhs = kernel(x, y);
            const double rhs = rhs_fn(ctx.dist(i, j), ctx.trunc.window.m()[x],
                                      ctx.trunc.window.m()[y]);
            ++rep.pairs_checked;
            if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
            if (lhs > rhs + kKernelSlack)
                rep.violations.push_back(
                    {ctx.trunc.labels[x], ctx.trunc.labels[y], t, lhs, rhs});
        }
}

}  // namespace detail

/// Checks p_t(x,y) <= (m(x)m(y))^{-1/2} e^{-d log(d/2et)} on all pairs of the
/// inner window B_R for every grid t, with distances taken from the buffered
/// window. An empty violation list is the expected outcome.
inline BoundCheckReport heat_bound_check(const GraphFamily& family, int radius, int buffer,
                                         const std::vector<double>& t_grid,
                                         MeasureChoice measure = MeasureChoice::Given) {
    const auto ctx = detail::make_bound_context(family, radius, buffer, measure);
    BoundCheckReport rep;
    for (double t : t_grid) {
        if (t < 0.0) throw std::invalid_argument("heat_bound_check: negative t");
        auto rhs = [t](double d, double mx, double my) {
            const double scale = 1.0 / std::sqrt(mx * my);
            if (d == 0.0) return scale;
            if (t == 0.0) return 0.0;
            return scale * std::exp(-d * std::log(d / (2.0 * std::numbers::e * t)));
        };
        if (ctx.laplacian.dense) {
            const KernelMatrix<double> K = heat_kernel(ctx.laplacian, t);
            detail::check_kernel_pairs(ctx, K.k, t, rhs, rep);
        } else {
            const double lmax = gershgorin_upper(ctx.laplacian.sym_sparse);
            Matrixd cols(ctx.laplacian.size, static_cast<Index>(ctx.inner.size()));
            for (Index j = 0; j < static_cast<Index>(ctx.inner.size()); ++j)
                cols.col(j) = heat_kernel_column(ctx.laplacian, t, ctx.inner[j], lmax);
            // check via restricted columns
            const Index ni = static_cast<Index>(ctx.inner.size());
            for (Index i = 0; i < ni; ++i)
                for (Index j = i; j < ni; ++j) {
                    const VertexId x = ctx.inner[i], y = ctx.inner[j];
                    const double lhs = cols(x, j);
                    const double bound = rhs(ctx.dist(i, j), ctx.trunc.window.m()[x],
                                             ctx.trunc.window.m()[y]);
                    ++rep.pairs_checked;
                    if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / bound);
                    if (lhs > bound + kKernelSlack)
                        rep.violations.push_back(
                            {ctx.trunc.labels[x], ctx.trunc.labels[y], t, lhs, bound});
                }
        }
    }
    return rep;
}

/// Variant bound p_t <= (m(x)m(y))^{-1/2} e^{-beta d + 2 e^beta t}.
inline BoundCheckReport heat_bound_beta_check(const GraphFamily& family, int radius, int buffer,
                                              double beta, const std::vector<double>& t_grid,
                                              MeasureChoice measure = MeasureChoice::Given) {
    if (beta <= 0.0) throw std::invalid_argument("heat_bound_beta_check: beta > 0 required");
    const auto ctx = detail::make_bound_context(family, radius, buffer, measure);
    const double growth = 2.0 * std::exp(beta);
    BoundCheckReport rep;
    for (double t : t_grid) {
        auto rhs = [&](double d, double mx, double my) {
            return std::exp(-beta * d + growth * t) / std::sqrt(mx * my);
        };
        const KernelMatrix<double> K = heat_kernel(ctx.laplacian, t);
        detail::check_kernel_pairs(ctx, K.k, t, rhs, rep);
    }
    return rep;
}

/// Resolvent decay: with alpha = -4 e^eps, checks
/// |g_alpha(x,y)| <= (m(x)m(y))^{-1/2} e^{-eps d} / (2 e^eps). Valid on
/// truncations since the window resolvent is dominated entrywise.
inline BoundCheckReport resolvent_bound_check(const GraphFamily& family, int radius, int buffer,
                                              double eps,
                                              MeasureChoice measure = MeasureChoice::Given) {
    if (eps <= 0.0) throw std::invalid_argument("resolvent_bound_check: eps > 0 required");
    const auto ctx = detail::make_bound_context(family, radius, buffer, measure);
    const double alpha = -4.0 * std::exp(eps);
    const double constant = 1.0 / (2.0 * std::exp(eps));
    auto rhs = [&](double d, double mx, double my) {
        return constant * std::exp(-eps * d) / std::sqrt(mx * my);
    };
    BoundCheckReport rep;
    if (ctx.laplacian.dense) {
        const KernelMatrix<double> K = resolvent_kernel(ctx.laplacian, alpha);
        detail::check_kernel_pairs(ctx, K.k.cwiseAbs(), 0.0, rhs, rep);
    } else {
        SparseMatrixd shifted = ctx.laplacian.sym_sparse;
        for (Index i = 0; i < ctx.laplacian.size; ++i) shifted.coeffRef(i, i) -= alpha;
        Eigen::SimplicialLDLT<SparseMatrixd> solver(shifted);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("resolvent_bound_check: factorization failed");
        const Index ni = static_cast<Index>(ctx.inner.size());
        const Vectord rootm = ctx.laplacian.m.cwiseSqrt();
        for (Index j = 0; j < ni; ++j) {
            Vectord e = Vectord::Zero(ctx.laplacian.size);
            e[ctx.inner[j]] = 1.0 / rootm[ctx.inner[j]];
            const Vectord col = solver.solve(e).cwiseQuotient(rootm);
            for (Index i = 0; i <= j; ++i) {
                const VertexId x = ctx.inner[i], y = ctx.inner[j];
                const double lhs = std::abs(col[x]);
                const double bound = rhs(ctx.dist(i, j), ctx.trunc.window.m()[x],
                                         ctx.trunc.window.m()[y]);
                ++rep.pairs_checked;
                if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / bound);
                if (lhs > bound + kKernelSlack)
                    rep.violations.push_back(
                        {ctx.trunc.labels[x], ctx.trunc.labels[y], 0.0, lhs, bound});
            }
        }
    }
    return rep;
}

/// Monte Carlo heat kernel estimate via the killed continuous-time walk:
/// jump rate n(x)/m(x), jump law b(x,.)/n(x), weight e^{-int (c/m) ds}, and
/// walkers leaving the window count as killed. The c = 0 estimate reuses the
/// same paths, so the c-domination p_t <= p_t^(0) holds samplewise.
struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double estimate_free = 0.0;  // same paths, c = 0 weight
    double stderr_free = 0.0;
    std::int64_t samples = 0;
};

inline McEstimate feynman_kac_mc(const Truncation& tr, double t, VertexId x, VertexId y,
                                 std::int64_t samples, std::uint64_t seed) {
    if (t < 0.0) throw std::invalid_argument("feynman_kac_mc: t < 0");
    const WeightedGraph& g = tr.window;
    const Vectord n_full = normalizing_measure(g) + tr.boundary_killing;
    const Vectord rate = n_full.cwiseQuotient(g.m());
    const Vectord kill_rate = g.c().cwiseQuotient(g.m());
    const double inv_my = 1.0 / g.m()[y];

    double sum = 0.0, sum_sq = 0.0, sum0 = 0.0, sum0_sq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1));
        std::mt19937_64 eng(splitmix64(state));
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        VertexId at = x;
        double remaining = t;
        double log_weight = 0.0;
        bool alive = true;
        while (alive) {
            const double hold = rate[at] > 0.0
                                    ? -std::log1p(-unif(eng)) / rate[at]
                                    : std::numeric_limits<double>::infinity();
            if (hold >= remaining) {
                log_weight -= kill_rate[at] * remaining;
                break;
            }
            log_weight -= kill_rate[at] * hold;
            remaining -= hold;
            // choose the jump target; mass leaving the window kills the walker
            double pick = unif(eng) * n_full[at];
            alive = false;
            for (const auto& nb : g.neighbors(at)) {
                pick -= nb.b;
                if (pick <= 0.0) {
                    at = nb.vertex;
                    alive = true;
                    break;
                }
            }
        }
        const double hit = (alive && at == y) ? inv_my : 0.0;
        const double z = hit * std::exp(log_weight);
        sum += z;
        sum_sq += z * z;
        sum0 += hit;
        sum0_sq += hit * hit;
    }
    McEstimate est;
    est.samples = samples;
    const double n = static_cast<double>(samples);
    est.estimate = sum / n;
    est.estimate_free = sum0 / n;
    est.stderr_ = std::sqrt(std::max(0.0, sum_sq / n - est.estimate * est.estimate) / n);
    est.stderr_free =
        std::sqrt(std::max(0.0, sum0_sq / n - est.estimate_free * est.estimate_free) / n);
    return est;
}

}  // namespace lpgraph
