#pragma once

#include "lpgraph/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpgraph {

/// Subsets up to this window size are enumerated exhaustively (2^22 subsets).
inline constexpr int kExhaustiveCap = 22;

/// Isoperimetric ratio with a stored witness; the value is exactly
/// |dW| / n(W) for that witness, recomputable from the window data.
struct CheegerResult {
    double value = 0.0;
    std::vector<VertexId> witness;            // indices into the window
    std::vector<std::int64_t> witness_labels;
    std::string mode;                         // exhaustive | sweep | family
    int window_radius = 0;
};

/// (|dW|, n(W)) with the boundary counted against the full family: edges into
/// the rest of the window plus all edges leaving the window entirely.
inline std::pair<double, double> boundary_measure(const FamilyWindow& w,
                                                  const std::vector<VertexId>& subset) {
    std::vector<char> in(static_cast<std::size_t>(w.graph.vertex_count()), 0);
    for (VertexId v : subset) in[v] = 1;
    double cut = 0.0, volume = 0.0;
    for (VertexId v : subset) {
        double inside = 0.0;
        for (const auto& nb : w.graph.neighbors(v))
            if (in[nb.vertex]) inside += nb.b;
        cut += w.full_weighted_degree[v] - inside;
        volume += w.full_weighted_degree[v];
    }
    return {cut, volume};
}

namespace detail {

/// Gray-code walk over all nonempty subsets of `verts`, maintaining the cut
/// and volume incrementally. Returns the minimizing ratio and witness mask.
struct SubsetScan {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
};

inline SubsetScan min_ratio_subsets(const FamilyWindow& w, const std::vector<VertexId>& verts) {
    const int n = static_cast<int>(verts.size());
    if (n > kExhaustiveCap)
        throw std::invalid_argument("cheeger_exhaustive: window exceeds " +
                                    std::to_string(kExhaustiveCap) +
                                    " vertices; use sweep or family mode");
    std::vector<int> pos(static_cast<std::size_t>(w.graph.vertex_count()), -1);
    for (int i = 0; i < n; ++i) pos[verts[i]] = i;

    std::vector<double> w_in(static_cast<std::size_t>(n), 0.0);
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    double cut = 0.0, volume = 0.0;
    SubsetScan scan;
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int v = std::countr_zero(i);  // bit toggled between gray(i-1) and gray(i)
        const double nf = w.full_weighted_degree[verts[v]];
        if (!in[v]) {
            cut += nf - 2.0 * w_in[v];
            volume += nf;
            in[v] = 1;
        } else {
            cut -= nf - 2.0 * w_in[v];
            volume -= nf;
            in[v] = 0;
        }
        const double sign = in[v] ? 1.0 : -1.0;
        for (const auto& nb : w.graph.neighbors(verts[v])) {
            const int p = pos[nb.vertex];
            if (p >= 0) w_in[p] += sign * nb.b;
        }
        const double ratio = cut / volume;
        if (ratio < scan.best) {
            scan.best = ratio;
            std::uint32_t mask = 0;
            for (int k = 0; k < n; ++k)
                if (in[k]) mask |= 1u << k;
            scan.best_mask = mask;
        }
    }
    return scan;
}

inline CheegerResult result_from_subset(const FamilyWindow& w, std::vector<VertexId> subset,
                                        std::string mode, int radius) {
    CheegerResult res;
    const auto [cut, volume] = boundary_measure(w, subset);
    res.value = cut / volume;
    std::sort(subset.begin(), subset.end());
    res.witness = std::move(subset);
    for (VertexId v : res.witness) res.witness_labels.push_back(w.labels[v]);
    res.mode = std::move(mode);
    res.window_radius = radius;
    return res;
}

inline std::vector<VertexId> ball_vertices(const FamilyWindow& w, int radius) {
    const auto hops = window_hops(w.graph, w.root);
    std::vector<VertexId> verts;
    for (VertexId x = 0; x < w.graph.vertex_count(); ++x)
        if (hops[x] >= 0 && hops[x] <= radius) verts.push_back(x);
    return verts;
}

}  // namespace detail

/// Exact minimum of |dW|/n(W) over all nonempty subsets of B_R(root).
inline CheegerResult cheeger_exhaustive(const GraphFamily& family, int radius) {
    const FamilyWindow w = family.materialize(radius);
    const auto verts = detail::ball_vertices(w, radius);
    const auto scan = detail::min_ratio_subsets(w, verts);
    std::vector<VertexId> subset;
    for (std::size_t k = 0; k < verts.size(); ++k)
        if (scan.best_mask & (1u << k)) subset.push_back(verts[k]);
    return detail::result_from_subset(w, std::move(subset), "exhaustive", radius);
}

/// Ball isoperimetric ratios beta(R) = |dB_R| / n(B_R) along the exhaustion,
/// with a 1/R-model limit estimate from the last two radii.
struct CheegerSeries {
    std::vector<int> radii;
    std::vector<double> beta;
    double limit_estimate = 0.0;
    CheegerResult last;
};

inline CheegerSeries cheeger_family(const GraphFamily& family, const std::vector<int>& radii) {
    if (radii.empty()) throw std::invalid_argument("cheeger_family: no radii");
    const FamilyWindow w = family.materialize(radii.back());
    const auto hops = window_hops(w.graph, w.root);
    CheegerSeries s;
    for (int r : radii) {
        std::vector<VertexId> ball;
        for (VertexId x = 0; x < w.graph.vertex_count(); ++x)
            if (hops[x] >= 0 && hops[x] <= r) ball.push_back(x);
        const auto [cut, volume] = boundary_measure(w, ball);
        s.radii.push_back(r);
        s.beta.push_back(cut / volume);
        if (r == radii.back()) s.last = detail::result_from_subset(w, ball, "family", r);
    }
    const std::size_t k = s.radii.size();
    if (k >= 2) {
        const double r1 = s.radii[k - 2], r2 = s.radii[k - 1];
        s.limit_estimate = (s.beta[k - 1] * r2 - s.beta[k - 2] * r1) / (r2 - r1);
    } else {
        s.limit_estimate = s.beta[0];
    }
    return s;
}

/// Upper-bound heuristic: prefixes of the window ordered by the second
/// eigenvector of its boundaryless normalized Laplacian.
inline CheegerResult cheeger_sweep(const GraphFamily& family, int radius) {
    const FamilyWindow w = family.materialize(radius);
    const auto verts = detail::ball_vertices(w, radius);
    const Index n = static_cast<Index>(verts.size());
    if (n < 2) throw std::invalid_argument("cheeger_sweep: window too small");

    // second eigenvector of the ball graph, m = n, c = 0, no boundary killing
    std::vector<Index> pos(static_cast<std::size_t>(w.graph.vertex_count()), -1);
    for (Index i = 0; i < n; ++i) pos[verts[i]] = i;
    std::vector<Edge> edges;
    for (const Edge& e : w.graph.edges())
        if (pos[e.u] >= 0 && pos[e.v] >= 0)
            edges.push_back({static_cast<VertexId>(pos[e.u]), static_cast<VertexId>(pos[e.v]),
                             e.b});
    WeightedGraph ball(n, std::move(edges), Vectord::Ones(n), Vectord::Zero(n));
    const LaplacianMatrix L = assemble(full_graph_truncation(normalized(ball)));
    Vectord fiedler = L.eigenvectors.col(std::min<Index>(1, n - 1));
    for (Index i = 0; i < n; ++i)
        if (std::abs(fiedler[i]) > 1e-12) {
            if (fiedler[i] < 0.0) fiedler = -fiedler;
            break;
        }

    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (fiedler[a] != fiedler[b]) return fiedler[a] < fiedler[b];
        return verts[a] < verts[b];
    });

    // incremental prefix ratios against the full family boundary
    std::vector<double> w_in(static_cast<std::size_t>(n), 0.0);
    double cut = 0.0, volume = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_len = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const VertexId v = verts[order[k]];
        const double nf = w.full_weighted_degree[v];
        cut += nf - 2.0 * w_in[order[k]];
        volume += nf;
        for (const auto& nb : w.graph.neighbors(v)) {
            const Index p = pos[nb.vertex];
            if (p >= 0) w_in[p] += nb.b;
        }
        if (cut / volume < best) {
            best = cut / volume;
            best_len = k + 1;
        }
    }
    std::vector<VertexId> subset;
    for (std::size_t k = 0; k < best_len; ++k) subset.push_back(verts[order[k]]);
    return detail::result_from_subset(w, std::move(subset), "sweep", radius);
}

/// Cheeger constant away from a compact set: the minimization restricted to
/// subsets of the annulus {K <= hop <= R}. Exhaustive when the annulus is
/// small, otherwise the minimum over the annuli {K..r}, r <= R.
inline CheegerResult cheeger_at_infinity(const GraphFamily& family, int k_radius, int radius) {
    const FamilyWindow w = family.materialize(radius);
    const auto hops = window_hops(w.graph, w.root);
    std::vector<VertexId> annulus;
    for (VertexId x = 0; x < w.graph.vertex_count(); ++x)
        if (hops[x] >= k_radius && hops[x] <= radius) annulus.push_back(x);
    if (annulus.empty()) throw std::invalid_argument("cheeger_at_infinity: empty annulus");

    if (static_cast<int>(annulus.size()) <= kExhaustiveCap) {
        const auto scan = detail::min_ratio_subsets(w, annulus);
        std::vector<VertexId> subset;
        for (std::size_t k = 0; k < annulus.size(); ++k)
            if (scan.best_mask & (1u << k)) subset.push_back(annulus[k]);
        CheegerResult res = detail::result_from_subset(w, std::move(subset), "exhaustive", radius);
        return res;
    }
    double best = std::numeric_limits<double>::infinity();
    int best_r = k_radius;
    for (int r = k_radius; r <= radius; ++r) {
        std::vector<VertexId> shell;
        for (VertexId x : annulus)
            if (hops[x] <= r) shell.push_back(x);
        if (shell.empty()) continue;
        const auto [cut, volume] = boundary_measure(w, shell);
        if (cut / volume < best) {
            best = cut / volume;
            best_r = r;
        }
    }
    std::vector<VertexId> shell;
    for (VertexId x : annulus)
        if (hops[x] <= best_r) shell.push_back(x);
    return detail::result_from_subset(w, std::move(shell), "family", radius);
}

/// lambda_0(B_R) >= alpha^2 / 2 for the normalized Dirichlet window, with
/// alpha the exact window Cheeger constant.
struct CheegerInequalityCheck {
    double lambda0 = 0.0;
    double alpha = 0.0;
    bool pass = false;
};

inline CheegerInequalityCheck cheeger_inequality_check(const GraphFamily& family, int radius) {
    CheegerInequalityCheck chk;
    chk.alpha = cheeger_exhaustive(family, radius).value;
    const Truncation tr = truncate(family, radius, 0, MeasureChoice::NormalizingMeasure);
    chk.lambda0 = bottom_eigenvalue(assemble(tr));
    chk.pass = chk.lambda0 >= 0.5 * chk.alpha * chk.alpha - 1e-10;
    return chk;
}

/// Evidence report for the equivalence "spectral bounds agree at p=1,2 iff
/// the Cheeger constant vanishes". Thresholds are part of the report.
struct DichotomyReport {
    double alpha_limit = 0.0;
    double lambda_hat_1 = 0.0;
    double lambda_hat_2 = 0.0;
    double zero_threshold = 0.02;
    double gap_threshold = 0.02;
    bool alpha_zero = false;
    bool gap_strict = false;
    bool consistent = false;
};

inline DichotomyReport alpha_dichotomy_probe(const GraphFamily& family,
                                             const std::vector<int>& radii,
                                             const std::vector<double>& t_grid) {
    DichotomyReport rep;
    rep.alpha_limit = cheeger_family(family, radii).limit_estimate;
    const LaplacianMatrix L =
        assemble(truncate(family, radii.back(), 0, MeasureChoice::NormalizingMeasure));
    rep.lambda_hat_1 = p_growth_bound_of(L, 1.0, t_grid);
    rep.lambda_hat_2 = p_growth_bound_of(L, 2.0, t_grid);
    rep.alpha_zero = rep.alpha_limit < rep.zero_threshold;
    rep.gap_strict = rep.lambda_hat_2 - rep.lambda_hat_1 > rep.gap_threshold;
    rep.consistent = rep.alpha_zero != rep.gap_strict;
    return rep;
}

}  // namespace lpgraph
