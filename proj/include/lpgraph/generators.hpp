#pragma once

#include "lpgraph/tessellation.hpp"

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lpgraph {

enum class MeasureChoice { Given, UnitMeasure, NormalizingMeasure };

inline const char* to_string(MeasureChoice c) {
    switch (c) {
        case MeasureChoice::UnitMeasure: return "m1";
        case MeasureChoice::NormalizingMeasure: return "mn";
        default: return "given";
    }
}

/// Finite window of a conceptually infinite graph. The full-degree data is
/// exact: edges leaving the window are known even though their far endpoints
/// are not materialized, which makes Dirichlet truncations exact.
struct FamilyWindow {
    WeightedGraph graph;
    VertexId root = 0;
    Vectord full_weighted_degree;       // n(x) over the full graph
    Vectori full_combinatorial_degree;  // deg(x) over the full graph
    int radius = 0;
    std::vector<std::int64_t> labels;   // stable per-family vertex labels
};

/// Sum of edge weights leaving the window, per vertex.
inline Vectord boundary_weight(const FamilyWindow& w) {
    Vectord out = w.full_weighted_degree - normalizing_measure(w.graph);
    for (Index i = 0; i < out.size(); ++i)
        if (out[i] < 0.0 && out[i] > -1e-12) out[i] = 0.0;
    return out;
}

/// Replaces the window measure. The normalizing choice uses the full-graph n,
/// so normalized truncations restrict the infinite normalized operator.
inline FamilyWindow with_measure(FamilyWindow w, MeasureChoice choice) {
    switch (choice) {
        case MeasureChoice::UnitMeasure:
            w.graph = w.graph.with_measure(Vectord::Ones(w.graph.vertex_count()));
            break;
        case MeasureChoice::NormalizingMeasure:
            w.graph = w.graph.with_measure(w.full_weighted_degree);
            break;
        case MeasureChoice::Given:
            break;
    }
    return w;
}

/// Intrinsic edge weights computed against the full-graph normalizing measure,
/// so that window path metrics dominate the metric of the infinite graph.
inline EdgeWeighting default_intrinsic_weights_full(const FamilyWindow& w) {
    EdgeWeighting ew;
    ew.w.reserve(w.graph.edges().size());
    for (const Edge& e : w.graph.edges()) {
        const double ru = w.graph.m()[e.u] / w.full_weighted_degree[e.u];
        const double rv = w.graph.m()[e.v] / w.full_weighted_degree[e.v];
        ew.w.push_back(std::sqrt(std::min(ru, rv)));
    }
    return ew;
}

/// Deterministic radius-indexed exhaustion of an infinite graph; materialize(R)
/// is an induced restriction of materialize(R') for R <= R', with stable ids.
class GraphFamily {
  public:
    virtual ~GraphFamily() = default;
    virtual std::string kind() const = 0;
    virtual FamilyWindow materialize(int radius) const = 0;
};

using FamilyPtr = std::shared_ptr<const GraphFamily>;

namespace detail {

inline FamilyWindow finite_window(WeightedGraph g, VertexId root, int radius) {
    FamilyWindow w;
    w.full_weighted_degree = normalizing_measure(g);
    w.full_combinatorial_degree = combinatorial_degree(g);
    w.graph = std::move(g);
    w.root = root;
    w.radius = radius;
    w.labels.resize(static_cast<std::size_t>(w.graph.vertex_count()));
    for (Index i = 0; i < w.graph.vertex_count(); ++i) w.labels[i] = i;
    return w;
}

}  // namespace detail

/// Half-line over the naturals with b(x,x+1) = x on positive multiples of 4
/// and 1 elsewhere; m = 1, c = 0. Subexponential growth with unbounded n/m.
class LineExampleFamily : public GraphFamily {
  public:
    std::string kind() const override { return "line"; }
    FamilyWindow materialize(int radius) const override {
        const Index n = radius + 1;
        std::vector<Edge> edges;
        for (int x = 0; x + 1 <= radius; ++x) edges.push_back({x, x + 1, edge_weight(x)});
        FamilyWindow w;
        w.graph = WeightedGraph::unweighted(n, std::move(edges));
        w.root = 0;
        w.radius = radius;
        w.full_weighted_degree.resize(n);
        w.full_combinatorial_degree.resize(n);
        for (int x = 0; x <= radius; ++x) {
            w.full_weighted_degree[x] = (x > 0 ? edge_weight(x - 1) : 0.0) + edge_weight(x);
            w.full_combinatorial_degree[x] = x > 0 ? 2 : 1;
        }
        w.labels.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) w.labels[i] = i;
        return w;
    }
    static double edge_weight(int x) { return (x > 0 && x % 4 == 0) ? x : 1.0; }
};

/// d-regular tree ball, unit weights, m = 1, BFS vertex order.
class RegularTreeFamily : public GraphFamily {
  public:
    explicit RegularTreeFamily(int degree) : degree_(degree) {
        if (degree < 2) throw std::invalid_argument("regular tree: degree >= 2");
    }
    std::string kind() const override { return "tree"; }
    int degree() const { return degree_; }
    FamilyWindow materialize(int radius) const override {
        std::vector<Edge> edges;
        std::vector<int> depth{0};
        Index next = 1;
        for (Index v = 0; v < static_cast<Index>(depth.size()); ++v) {
            if (depth[v] >= radius) continue;
            const int children = depth[v] == 0 ? degree_ : degree_ - 1;
            for (int c = 0; c < children; ++c) {
                edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(next), 1.0});
                depth.push_back(depth[v] + 1);
                ++next;
            }
        }
        FamilyWindow w;
        w.graph = WeightedGraph::unweighted(next, std::move(edges));
        w.root = 0;
        w.radius = radius;
        w.full_weighted_degree = Vectord::Constant(next, degree_);
        w.full_combinatorial_degree = Vectori::Constant(next, degree_);
        w.labels.resize(static_cast<std::size_t>(next));
        for (Index i = 0; i < next; ++i) w.labels[i] = i;
        return w;
    }

  private:
    int degree_;
};

/// Z^dim ball in the l1 metric, unit weights, m = 1.
class LatticeFamily : public GraphFamily {
  public:
    explicit LatticeFamily(int dim) : dim_(dim) {
        if (dim < 1 || dim > 4) throw std::invalid_argument("lattice: dim in [1,4]");
    }
    std::string kind() const override { return "lattice"; }
    int dim() const { return dim_; }
    FamilyWindow materialize(int radius) const override {
        using Coord = std::array<int, 4>;
        std::map<Coord, VertexId> index;
        std::vector<Coord> coords;
        auto intern = [&](const Coord& c) {
            auto it = index.find(c);
            if (it != index.end()) return it->second;
            const VertexId id = static_cast<VertexId>(coords.size());
            index.emplace(c, id);
            coords.push_back(c);
            return id;
        };
        Coord origin{0, 0, 0, 0};
        intern(origin);
        std::vector<Edge> edges;
        for (std::size_t head = 0; head < coords.size(); ++head) {
            const Coord at = coords[head];
            int norm = 0;
            for (int k = 0; k < dim_; ++k) norm += std::abs(at[k]);
            if (norm >= radius) continue;
            for (int k = 0; k < dim_; ++k)
                for (int step : {+1, -1}) {
                    Coord to = at;
                    to[k] += step;
                    const VertexId a = static_cast<VertexId>(head);
                    const VertexId b = intern(to);
                    if (a < b) edges.push_back({a, b, 1.0});
                }
        }
        const Index n = static_cast<Index>(coords.size());
        FamilyWindow w;
        w.graph = WeightedGraph::unweighted(n, std::move(edges));
        w.root = 0;
        w.radius = radius;
        w.full_weighted_degree = Vectord::Constant(n, 2.0 * dim_);
        w.full_combinatorial_degree = Vectori::Constant(n, 2 * dim_);
        w.labels.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            std::int64_t packed = 0;
            for (int k = dim_ - 1; k >= 0; --k)
                packed = packed * 4096 + (coords[i][k] + 2048);
            w.labels[i] = packed;
        }
        return w;
    }

  private:
    int dim_;
};

/// Tree whose generation-k vertices have degree k+2 (so k+1 children).
/// Ball ratios at infinity approach 1.
class RapidlyBranchingTreeFamily : public GraphFamily {
  public:
    std::string kind() const override { return "rbtree"; }
    FamilyWindow materialize(int radius) const override {
        std::vector<Edge> edges;
        std::vector<int> gen{0};
        Index next = 1;
        for (Index v = 0; v < static_cast<Index>(gen.size()); ++v) {
            if (gen[v] >= radius) continue;
            const int children = gen[v] + 1 + (gen[v] == 0 ? 1 : 0);
            for (int c = 0; c < children; ++c) {
                edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(next), 1.0});
                gen.push_back(gen[v] + 1);
                ++next;
            }
        }
        FamilyWindow w;
        w.graph = WeightedGraph::unweighted(next, std::move(edges));
        w.root = 0;
        w.radius = radius;
        w.full_weighted_degree.resize(next);
        w.full_combinatorial_degree.resize(next);
        for (Index v = 0; v < next; ++v) {
            w.full_weighted_degree[v] = gen[v] + 2;
            w.full_combinatorial_degree[v] = gen[v] + 2;
        }
        w.labels.resize(static_cast<std::size_t>(next));
        for (Index i = 0; i < next; ++i) w.labels[i] = i;
        return w;
    }
};

/// Constant family wrapping a fixed finite graph (no edges leave any window).
class FixedGraphFamily : public GraphFamily {
  public:
    FixedGraphFamily(WeightedGraph g, VertexId root, std::string kind)
        : graph_(std::move(g)), root_(root), kind_(std::move(kind)) {}
    std::string kind() const override { return kind_; }
    FamilyWindow materialize(int radius) const override {
        return detail::finite_window(graph_, root_, radius);
    }

  private:
    WeightedGraph graph_;
    VertexId root_;
    std::string kind_;
};

inline WeightedGraph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle: n >= 3");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    edges.push_back({0, n - 1, 1.0});
    return WeightedGraph::unweighted(n, std::move(edges));
}

inline WeightedGraph path_graph(int n) {
    if (n < 2) throw std::invalid_argument("path: n >= 2");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return WeightedGraph::unweighted(n, std::move(edges));
}

inline WeightedGraph complete_graph(int n) {
    if (n < 2) throw std::invalid_argument("complete: n >= 2");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    return WeightedGraph::unweighted(n, std::move(edges));
}

inline FamilyPtr cycle_family(int n) {
    return std::make_shared<FixedGraphFamily>(cycle_graph(n), 0, "cycle");
}
inline FamilyPtr path_family(int n) {
    return std::make_shared<FixedGraphFamily>(path_graph(n), 0, "path");
}
inline FamilyPtr complete_family(int n) {
    return std::make_shared<FixedGraphFamily>(complete_graph(n), 0, "complete");
}
inline FamilyPtr single_edge_family() {
    return std::make_shared<FixedGraphFamily>(path_graph(2), 0, "edge");
}

/// Exhaustion of the regular (p,q) tessellation by face rings around the
/// root. Every vertex of the infinite tessellation has degree q, so the
/// full-degree data is exact. materialize(R) contains the natural-metric
/// ball B_R(root) since every edge moves at most one ring.
class TessellationFamily : public GraphFamily {
  public:
    TessellationFamily(int p, int q) : p_(p), q_(q) {
        generate_pq(p, q, 1);  // validates the pair
    }
    std::string kind() const override { return "tess"; }
    int p() const { return p_; }
    int q() const { return q_; }
    Tessellation patch(int layers) const { return generate_pq(p_, q_, std::max(layers, 1)); }
    FamilyWindow materialize(int radius) const override {
        Tessellation t = patch(radius);
        const Index n = t.graph.vertex_count();
        FamilyWindow w;
        w.graph = std::move(t.graph);
        w.root = 0;
        w.radius = radius;
        w.full_weighted_degree = Vectord::Constant(n, q_);
        w.full_combinatorial_degree = Vectori::Constant(n, q_);
        w.labels.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) w.labels[i] = i;
        return w;
    }

  private:
    int p_, q_;
};

inline FamilyPtr line_example_family() { return std::make_shared<LineExampleFamily>(); }
inline FamilyPtr regular_tree_family(int d) { return std::make_shared<RegularTreeFamily>(d); }
inline FamilyPtr lattice_family(int dim) { return std::make_shared<LatticeFamily>(dim); }
inline FamilyPtr rapidly_branching_tree_family() {
    return std::make_shared<RapidlyBranchingTreeFamily>();
}
inline FamilyPtr from_tessellation(int p, int q) {
    return std::make_shared<TessellationFamily>(p, q);
}

}  // namespace lpgraph
