#pragma once

#include "lpgraph/graph.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpgraph {

/// Per-edge positive weights, indexed like WeightedGraph::edges().
struct EdgeWeighting {
    std::vector<double> w;
};

enum class MetricProvenance { PathMetric, Natural, UserSupplied };

inline const char* to_string(MetricProvenance p) {
    switch (p) {
        case MetricProvenance::PathMetric: return "path-metric";
        case MetricProvenance::Natural: return "natural";
        default: return "user-supplied";
    }
}

/// Dense all-pairs pseudo metric. Disconnected pairs hold kUnreachable.
struct PseudoMetric {
    Matrixd d;
    MetricProvenance provenance = MetricProvenance::UserSupplied;
    double jump_size = 0.0;
};

/// Single-source shortest-path distances under an edge weighting (Dijkstra).
/// Large windows use this directly instead of materializing the dense table.
inline Vectord single_source_distances(const WeightedGraph& g, const EdgeWeighting& w,
                                       VertexId source) {
    const Index n = g.vertex_count();
    Vectord dist = Vectord::Constant(n, kUnreachable);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [dx, x] = heap.top();
        heap.pop();
        if (dx > dist[x]) continue;
        for (const auto& nb : g.neighbors(x)) {
            const double cand = dx + w.w[nb.edge_index];
            if (cand < dist[nb.vertex]) {
                dist[nb.vertex] = cand;
                heap.emplace(cand, nb.vertex);
            }
        }
    }
    return dist;
}

inline double jump_size_of(const WeightedGraph& g, const Matrixd& d) {
    double s = 0.0;
    for (const Edge& e : g.edges())
        if (e.u != e.v) s = std::max(s, d(e.u, e.v));
    return s;
}

/// Shortest-path pseudo metric for the given weighting. Weights must be
/// strictly positive. Cross-component distances are kUnreachable.
inline PseudoMetric path_metric(const WeightedGraph& g, const EdgeWeighting& w) {
    if (static_cast<Index>(w.w.size()) != static_cast<Index>(g.edges().size()))
        throw std::invalid_argument("path_metric: weighting size mismatch");
    for (double wi : w.w)
        if (!(wi > 0.0)) throw std::invalid_argument("path_metric: non-positive edge weight");
    const Index n = g.vertex_count();
    PseudoMetric pm;
    pm.d.resize(n, n);
    for (VertexId x = 0; x < n; ++x) pm.d.col(x) = single_source_distances(g, w, x);
    // symmetrize exactly; Dijkstra from both ends can differ in the last ulp
    for (VertexId x = 0; x < n; ++x)
        for (VertexId y = 0; y < x; ++y) {
            const double v = std::min(pm.d(x, y), pm.d(y, x));
            pm.d(x, y) = pm.d(y, x) = v;
        }
    pm.provenance = MetricProvenance::PathMetric;
    pm.jump_size = jump_size_of(g, pm.d);
    return pm;
}

/// w(x,y) = ((m/n)(x) ^ (m/n)(y))^{1/2}; its path metric is always intrinsic.
inline EdgeWeighting default_intrinsic_weights(const WeightedGraph& g) {
    const Vectord n = normalizing_measure(g);
    EdgeWeighting w;
    w.w.reserve(g.edges().size());
    for (const Edge& e : g.edges()) {
        const double ru = g.m()[e.u] / n[e.u];
        const double rv = g.m()[e.v] / n[e.v];
        w.w.push_back(std::sqrt(std::min(ru, rv)));
    }
    return w;
}

/// Hop-count metric (unit edge weights).
inline PseudoMetric natural_metric(const WeightedGraph& g) {
    EdgeWeighting ones;
    ones.w.assign(g.edges().size(), 1.0);
    PseudoMetric pm = path_metric(g, ones);
    pm.provenance = MetricProvenance::Natural;
    return pm;
}

/// Per-vertex slack m(x) - sum_y b(x,y) d(x,y)^2. The metric is intrinsic
/// iff no vertex has slack below -1e-12 m(x).
struct IntrinsicReport {
    Vectord slack;
    double min_slack = 0.0;
    VertexId worst_vertex = -1;
    bool intrinsic = false;
};

inline IntrinsicReport verify_intrinsic(const WeightedGraph& g, const PseudoMetric& d) {
    const Index n = g.vertex_count();
    IntrinsicReport rep;
    rep.slack = g.m();
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        const double dd = d.d(e.u, e.v);
        rep.slack[e.u] -= e.b * dd * dd;
        rep.slack[e.v] -= e.b * dd * dd;
    }
    rep.min_slack = rep.slack[0];
    rep.worst_vertex = 0;
    rep.intrinsic = true;
    for (VertexId x = 0; x < n; ++x) {
        const double rel = rep.slack[x] / g.m()[x];
        if (rep.slack[x] < rep.min_slack) {
            rep.min_slack = rep.slack[x];
            rep.worst_vertex = x;
        }
        if (rel < -1e-12) rep.intrinsic = false;
    }
    return rep;
}

/// Closed ball {y : d(x,y) <= r}, ordered by vertex id.
inline std::vector<VertexId> ball(const PseudoMetric& d, VertexId x, double r) {
    std::vector<VertexId> out;
    for (VertexId y = 0; y < d.d.rows(); ++y)
        if (d.d(x, y) <= r) out.push_back(y);
    return out;
}

/// Per-vertex function with asserted Lipschitz constant.
struct LipschitzFunction {
    Vectord psi;
    double eps = 0.0;
};

struct LipschitzReport {
    bool lipschitz_ok = true;            // psi satisfies its own invariant
    VertexId witness_x = -1, witness_y = -1;  // violating pair when not
    bool bounds_hold = true;
    double max_ratio_linear = 0.0;       // lhs/rhs of the first-order edge bound
    double max_ratio_quadratic = 0.0;    // lhs/rhs of the product edge bound
};

/// Verifies on every edge the two exponential-difference bounds satisfied by
/// eps-Lipschitz functions: |1 - e^{psi(x)-psi(y)}| <= eps e^{eps s} d(x,y)
/// and |(e^{-psi(x)}-e^{-psi(y)})(e^{psi(x)}-e^{psi(y)})| <= 2 eps^2 e^{eps s} d(x,y)^2.
/// A psi violating the Lipschitz invariant itself is rejected with a witness pair.
inline LipschitzReport lipschitz_verify(const WeightedGraph& g, const PseudoMetric& d,
                                        const LipschitzFunction& f) {
    LipschitzReport rep;
    const Index n = g.vertex_count();
    for (VertexId x = 0; x < n && rep.lipschitz_ok; ++x)
        for (VertexId y = 0; y < n; ++y) {
            if (x == y || d.d(x, y) == kUnreachable) continue;
            if (f.psi[x] - f.psi[y] > f.eps * d.d(x, y) + 1e-12) {
                rep.lipschitz_ok = false;
                rep.witness_x = x;
                rep.witness_y = y;
                break;
            }
        }
    if (!rep.lipschitz_ok) return rep;

    const double s = d.jump_size;
    const double amp = std::exp(f.eps * s);
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        const double dd = d.d(e.u, e.v);
        const double diff = f.psi[e.u] - f.psi[e.v];
        const double lhs1 = std::abs(1.0 - std::exp(diff));
        const double rhs1 = f.eps * amp * dd;
        const double lhs2 = std::abs((std::exp(-f.psi[e.u]) - std::exp(-f.psi[e.v])) *
                                     (std::exp(f.psi[e.u]) - std::exp(f.psi[e.v])));
        const double rhs2 = 2.0 * f.eps * f.eps * amp * dd * dd;
        if (rhs1 > 0.0) rep.max_ratio_linear = std::max(rep.max_ratio_linear, lhs1 / rhs1);
        if (rhs2 > 0.0) rep.max_ratio_quadratic = std::max(rep.max_ratio_quadratic, lhs2 / rhs2);
        if (lhs1 > rhs1 * (1.0 + 1e-12) || lhs2 > rhs2 * (1.0 + 1e-12)) rep.bounds_hold = false;
    }
    return rep;
}

/// Worst triangle-inequality violation d(x,z) - d(x,y) - d(y,z) over all
/// triples (exhaustive for |X| <= 200, seeded sampling above). Test helper
/// for the PseudoMetric invariants.
inline double max_triangle_violation(const PseudoMetric& pm, std::uint64_t seed = 7) {
    const Index n = pm.d.rows();
    double worst = -kUnreachable;
    auto probe = [&](Index x, Index y, Index z) {
        const double a = pm.d(x, y), b = pm.d(y, z), c = pm.d(x, z);
        if (a == kUnreachable || b == kUnreachable) return;
        worst = std::max(worst, c - a - b);
    };
    if (n <= 200) {
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                for (Index z = 0; z < n; ++z) probe(x, y, z);
    } else {
        std::uint64_t state = seed;
        for (int k = 0; k < 2000000; ++k) {
            const Index x = static_cast<Index>(splitmix64(state) % n);
            const Index y = static_cast<Index>(splitmix64(state) % n);
            const Index z = static_cast<Index>(splitmix64(state) % n);
            probe(x, y, z);
        }
    }
    return worst;
}

}  // namespace lpgraph
