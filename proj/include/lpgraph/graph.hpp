#pragma once

#include "lpgraph/types.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace lpgraph {

using VertexId = int;

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    double b = 0.0;
};

/// Finite weighted graph (b, c, m): symmetric positive edge weights b,
/// nonnegative killing term c and positive vertex measure m. Immutable
/// after construction; construction is permissive so that validate() can
/// report rule violations instead of throwing.
class WeightedGraph {
  public:
    WeightedGraph() = default;

    WeightedGraph(Index vertex_count, std::vector<Edge> edges, Vectord m, Vectord c)
        : vertex_count_(vertex_count),
          edges_(std::move(edges)),
          m_(std::move(m)),
          c_(std::move(c)) {
        if (m_.size() != vertex_count_ || c_.size() != vertex_count_)
            throw std::invalid_argument("WeightedGraph: m/c size mismatch");
        build_adjacency();
    }

    /// Unit measure, zero killing.
    static WeightedGraph unweighted(Index vertex_count, std::vector<Edge> edges) {
        return WeightedGraph(vertex_count, std::move(edges),
                             Vectord::Ones(vertex_count), Vectord::Zero(vertex_count));
    }

    Index vertex_count() const { return vertex_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Vectord& m() const { return m_; }
    const Vectord& c() const { return c_; }

    struct Neighbor {
        VertexId vertex;
        double b;
        Index edge_index;
    };
    const std::vector<Neighbor>& neighbors(VertexId x) const { return adj_[x]; }

    /// Returns a copy with the measure replaced.
    WeightedGraph with_measure(Vectord m) const {
        return WeightedGraph(vertex_count_, edges_, std::move(m), c_);
    }

  private:
    void build_adjacency() {
        adj_.assign(static_cast<std::size_t>(vertex_count_), {});
        for (Index e = 0; e < static_cast<Index>(edges_.size()); ++e) {
            const Edge& ed = edges_[e];
            if (ed.u < 0 || ed.u >= vertex_count_ || ed.v < 0 || ed.v >= vertex_count_)
                throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
            if (ed.u == ed.v) continue;  // self-loops kept in edges_ for validate()
            adj_[ed.u].push_back({ed.v, ed.b, e});
            adj_[ed.v].push_back({ed.u, ed.b, e});
        }
        for (auto& list : adj_)
            std::sort(list.begin(), list.end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    }

    Index vertex_count_ = 0;
    std::vector<Edge> edges_;
    Vectord m_, c_;
    std::vector<std::vector<Neighbor>> adj_;
};

/// Partition of the vertex set with every edge crossing between the parts.
struct Bipartition {
    std::vector<VertexId> part1;
    std::vector<VertexId> part2;
    /// side[x] is 0 for part1 and 1 for part2.
    std::vector<std::uint8_t> side;
};

/// Checks all WeightedGraph invariants. Empty result means the graph is valid;
/// each violation names the offending vertex or edge and the broken rule.
inline std::vector<std::string> validate(const WeightedGraph& g) {
    std::vector<std::string> out;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const Edge& e : g.edges()) {
        if (e.u == e.v)
            out.push_back("self-loop at vertex " + std::to_string(e.u));
        if (!(e.b > 0.0))
            out.push_back("non-positive weight b on edge (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ")");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            out.push_back("duplicate edge (" + std::to_string(key.first) + "," +
                          std::to_string(key.second) + ")");
    }
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        if (!(g.m()[x] > 0.0))
            out.push_back("positivity violation: m(" + std::to_string(x) + ") <= 0");
        if (g.c()[x] < 0.0)
            out.push_back("negativity violation: c(" + std::to_string(x) + ") < 0");
        if (g.neighbors(x).empty())
            out.push_back("isolated vertex " + std::to_string(x));
    }
    return out;
}

/// n(x) = sum_y b(x,y).
inline Vectord normalizing_measure(const WeightedGraph& g) {
    Vectord n = Vectord::Zero(g.vertex_count());
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) continue;
        n[e.u] += e.b;
        n[e.v] += e.b;
    }
    return n;
}

/// Number of neighbors of each vertex.
inline Vectori combinatorial_degree(const WeightedGraph& g) {
    Vectori deg(g.vertex_count());
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        deg[x] = static_cast<int>(g.neighbors(x).size());
    return deg;
}

/// max_x (n(x)+c(x))/m(x). Twice this value bounds the operator norm of the
/// Laplacian on every l^p.
inline double bounded_geometry_ratio(const WeightedGraph& g) {
    const Vectord n = normalizing_measure(g);
    double best = 0.0;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        best = std::max(best, (n[x] + g.c()[x]) / g.m()[x]);
    return best;
}

/// BFS 2-coloring. Deterministic: the lowest-id vertex of each component goes
/// to part1. Returns nullopt when an odd cycle exists.
inline std::optional<Bipartition> bipartition(const WeightedGraph& g) {
    const Index n = g.vertex_count();
    std::vector<std::int8_t> color(static_cast<std::size_t>(n), -1);
    std::vector<VertexId> queue;
    for (VertexId start = 0; start < n; ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        queue.assign(1, start);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            VertexId x = queue[head];
            for (const auto& nb : g.neighbors(x)) {
                if (color[nb.vertex] == -1) {
                    color[nb.vertex] = static_cast<std::int8_t>(1 - color[x]);
                    queue.push_back(nb.vertex);
                } else if (color[nb.vertex] == color[x]) {
                    return std::nullopt;
                }
            }
        }
    }
    Bipartition bp;
    bp.side.resize(static_cast<std::size_t>(n));
    for (VertexId x = 0; x < n; ++x) {
        bp.side[x] = static_cast<std::uint8_t>(color[x]);
        (color[x] == 0 ? bp.part1 : bp.part2).push_back(x);
    }
    return bp;
}

}  // namespace lpgraph
