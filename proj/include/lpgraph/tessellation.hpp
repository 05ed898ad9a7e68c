#pragma once

#include "lpgraph/metric.hpp"

#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace lpgraph {

/// Planar tessellation patch: unit edge weights, zero killing, unit measure.
/// Faces are cyclic vertex sequences; boundary_face marks faces left
/// incomplete at the patch edge (generated patches store complete faces only).
struct Tessellation {
    WeightedGraph graph;
    std::vector<std::vector<VertexId>> faces;
    std::vector<bool> boundary_face;

    Vectori face_count() const {
        Vectori nf = Vectori::Zero(graph.vertex_count());
        for (const auto& f : faces)
            for (VertexId v : f) nf[v] += 1;
        return nf;
    }
};

/// A vertex is interior when its complete incident faces close up around it,
/// i.e. the face count equals the degree.
inline std::vector<bool> interior_vertices(const Tessellation& t) {
    const Vectori nf = t.face_count();
    const Vectori deg = combinatorial_degree(t.graph);
    std::vector<bool> interior(static_cast<std::size_t>(t.graph.vertex_count()), false);
    Vectori nf_complete = nf;
    for (std::size_t i = 0; i < t.faces.size(); ++i)
        if (t.boundary_face[i])
            for (VertexId v : t.faces[i]) nf_complete[v] -= 1;
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
        interior[v] = nf_complete[v] == deg[v] && deg[v] >= 3 && nf_complete[v] == nf[v];
    return interior;
}

/// kappa(x) = 1 - deg(x)/2 + sum_{f: x in f} 1/deg(f). Defined for interior
/// vertices only; boundary vertices return nullopt.
inline std::optional<double> vertex_curvature(const Tessellation& t, VertexId x) {
    if (!interior_vertices(t)[x]) return std::nullopt;
    double k = 1.0 - 0.5 * static_cast<double>(t.graph.neighbors(x).size());
    for (const auto& f : t.faces)
        for (VertexId v : f)
            if (v == x) k += 1.0 / static_cast<double>(f.size());
    return k;
}

/// All interior curvatures at once (faces scanned a single time).
inline std::vector<std::pair<VertexId, double>> interior_curvatures(const Tessellation& t) {
    const auto interior = interior_vertices(t);
    Vectord k(t.graph.vertex_count());
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
        k[v] = 1.0 - 0.5 * static_cast<double>(t.graph.neighbors(v).size());
    for (const auto& f : t.faces)
        for (VertexId v : f) k[v] += 1.0 / static_cast<double>(f.size());
    std::vector<std::pair<VertexId, double>> out;
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
        if (interior[v]) out.emplace_back(v, k[v]);
    return out;
}

/// Gauss-Bonnet cross-check for disk patches: the per-vertex curvature terms
/// summed over all vertices (with the patch's actual partial fans) equal the
/// Euler count |V| - |E| + |F|, which is 1 for a disk.
struct EulerCheck {
    double curvature_sum = 0.0;
    double euler_count = 0.0;
};

inline EulerCheck euler_consistency(const Tessellation& t) {
    EulerCheck ec;
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
        ec.curvature_sum += 1.0 - 0.5 * static_cast<double>(t.graph.neighbors(v).size());
    for (const auto& f : t.faces) ec.curvature_sum += 1.0;  // sum_{x in f} 1/deg(f) = 1
    ec.euler_count = static_cast<double>(t.graph.vertex_count()) -
                     static_cast<double>(t.graph.edges().size()) +
                     static_cast<double>(t.faces.size());
    return ec;
}

namespace detail {

/// One face of the next ring: the old-boundary vertices it absorbs
/// (a path of r+1 vertices for edge faces, a single vertex otherwise).
struct RingFacePlan {
    std::vector<VertexId> old_path;
};

struct PatchState {
    Index vertex_count = 0;
    std::vector<Edge> edges;
    std::set<std::pair<VertexId, VertexId>> edge_set;
    std::vector<std::vector<VertexId>> faces;
    std::vector<int> nf;           // faces incident so far
    std::vector<VertexId> boundary;  // outer cycle, cyclic order

    void add_edge(VertexId a, VertexId b) {
        auto key = std::minmax(a, b);
        if (edge_set.insert(key).second) edges.push_back({key.first, key.second, 1.0});
    }
};

/// Emits one ring of p-gon faces. Each face reuses the previous face's last arc
/// vertex as its first (the shared spoke endpoint); the seam is closed with a
/// union-find merge so single-vertex arcs chain correctly.
inline void emit_ring(PatchState& st, const std::vector<RingFacePlan>& plans, int p) {
    const std::size_t nfaces = plans.size();
    if (nfaces == 0) throw std::logic_error("emit_ring: empty plan");

    // provisional fresh ids per face arc
    const Index base = st.vertex_count;
    std::vector<std::vector<Index>> arcs(nfaces);
    Index next = base;
    for (std::size_t i = 0; i < nfaces; ++i) {
        const Index arc_len = p - static_cast<Index>(plans[i].old_path.size());
        if (arc_len < 1)
            throw std::runtime_error("tessellation ring: face run too long for p-gon");
        arcs[i].resize(arc_len);
        for (Index j = 0; j < arc_len; ++j) arcs[i][j] = next++;
    }

    // union-find over provisional ids; merge consecutive spoke endpoints
    std::vector<Index> parent(next - base);
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index a) {
        a -= base;
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a + base;
    };
    auto unite = [&](Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b) - base] = std::min(a, b) - base;
    };
    for (std::size_t i = 0; i < nfaces; ++i)
        unite(arcs[i].back(), arcs[(i + 1) % nfaces].front());

    // compact representatives to dense ids in first-appearance order
    std::map<Index, VertexId> compact;
    for (std::size_t i = 0; i < nfaces; ++i)
        for (Index prov : arcs[i]) {
            Index rep = find(prov);
            if (!compact.count(rep))
                compact[rep] = static_cast<VertexId>(base + compact.size());
        }
    st.vertex_count = base + static_cast<Index>(compact.size());
    st.nf.resize(static_cast<std::size_t>(st.vertex_count), 0);

    std::vector<VertexId> new_boundary;
    for (std::size_t i = 0; i < nfaces; ++i) {
        std::vector<VertexId> arc(arcs[i].size());
        for (std::size_t j = 0; j < arcs[i].size(); ++j) arc[j] = compact[find(arcs[i][j])];
        // face cycle: old path forward, then the arc walked back toward the start
        std::vector<VertexId> face = plans[i].old_path;
        for (std::size_t j = arc.size(); j-- > 0;) face.push_back(arc[j]);
        for (std::size_t j = 0; j < face.size(); ++j)
            st.add_edge(face[j], face[(j + 1) % face.size()]);
        for (VertexId v : face) st.nf[v] += 1;
        st.faces.push_back(std::move(face));
        // all arc vertices except the shared last one join the new boundary
        for (std::size_t j = 0; j + 1 < arc.size(); ++j) new_boundary.push_back(arc[j]);
    }
    // dedupe chained singles while preserving order
    std::vector<VertexId> dedup;
    for (VertexId v : new_boundary)
        if (dedup.empty() || dedup.back() != v) dedup.push_back(v);
    if (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
    st.boundary = std::move(dedup);
}

inline std::vector<RingFacePlan> plan_ring(const PatchState& st, int q) {
    const std::size_t K = st.boundary.size();
    std::vector<int> slot(K);
    std::size_t start = K;  // first boundary index with >= 2 free slots
    for (std::size_t i = 0; i < K; ++i) {
        slot[i] = q - st.nf[st.boundary[i]];
        if (slot[i] < 1) throw std::runtime_error("tessellation ring: oversaturated vertex");
        if (slot[i] >= 2 && start == K) start = i;
    }
    if (start == K) throw std::runtime_error("tessellation ring: degenerate boundary");

    std::vector<RingFacePlan> plans;
    std::size_t consumed = 0;
    std::size_t i = start;
    while (consumed < K) {
        // edge face: absorb edges while the next vertex has a single free slot
        RingFacePlan f;
        f.old_path.push_back(st.boundary[i]);
        do {
            i = (i + 1) % K;
            ++consumed;
            f.old_path.push_back(st.boundary[i]);
        } while (consumed < K && slot[i] == 1);
        plans.push_back(std::move(f));
        // then the run-end vertex spends its remaining slots on vertex faces
        const int extra = (consumed < K) ? slot[i] - 2 : slot[i] - 2;
        for (int k = 0; k < extra; ++k) plans.push_back({{st.boundary[i]}});
    }
    return plans;
}

}  // namespace detail

/// Layer-by-layer combinatorial construction of the regular tessellation with
/// p-gon faces and interior vertex degree q, centered at a root vertex.
/// Euclidean for 1/p + 1/q = 1/2, hyperbolic for < 1/2; spherical inputs are
/// rejected. `layers` counts face rings around the root.
inline Tessellation generate_pq(int p, int q, int layers) {
    if (p < 3 || q < 3) throw std::invalid_argument("generate_pq: need p, q >= 3");
    if (layers < 1) throw std::invalid_argument("generate_pq: need at least one layer");
    // 1/p + 1/q > 1/2  <=>  2(p + q) > p q
    if (2 * (p + q) > p * q)
        throw std::invalid_argument("generate_pq: spherical (p,q) rejected");

    detail::PatchState st;
    st.vertex_count = 1;  // root
    st.nf.assign(1, 0);
    std::vector<detail::RingFacePlan> first(static_cast<std::size_t>(q), {{0}});
    detail::emit_ring(st, first, p);
    for (int ring = 2; ring <= layers; ++ring)
        detail::emit_ring(st, detail::plan_ring(st, q), p);

    Tessellation t;
    t.graph = WeightedGraph::unweighted(st.vertex_count, std::move(st.edges));
    t.faces = std::move(st.faces);
    t.boundary_face.assign(t.faces.size(), false);
    return t;
}

/// Intrinsic path metric for m = 1: edge weights (n(x) v n(y))^{-1/2}.
/// Jump size is at most 1 on any graph without isolated vertices.
inline PseudoMetric d1_metric(const Tessellation& t) {
    return path_metric(t.graph, default_intrinsic_weights(t.graph));
}

}  // namespace lpgraph
