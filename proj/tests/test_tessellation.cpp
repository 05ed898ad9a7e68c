#include "lpgraph/curvature_report.hpp"
#include "lpgraph/io.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpgraph;

TEST_SUITE_BEGIN("tessellation");

TEST_CASE("interior curvature matches 1 - q/2 + q/p exactly") {
    const std::vector<std::pair<int, int>> pairs = {{4, 4}, {3, 6}, {6, 3},
                                                    {7, 3}, {8, 3}, {5, 4}};
    for (const auto& [p, q] : pairs) {
        const Tessellation t = generate_pq(p, q, 4);
        const double expect = 1.0 - q / 2.0 + static_cast<double>(q) / p;
        const auto ks = interior_curvatures(t);
        REQUIRE(!ks.empty());
        for (const auto& [v, k] : ks) CHECK(k == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("named curvature values") {
    CHECK(*vertex_curvature(generate_pq(4, 4, 2), 0) == doctest::Approx(0.0));
    CHECK(*vertex_curvature(generate_pq(6, 3, 2), 0) == doctest::Approx(0.0));
    CHECK(*vertex_curvature(generate_pq(7, 3, 2), 0) == doctest::Approx(-1.0 / 14.0));
}

TEST_CASE("boundary vertices have no curvature") {
    const Tessellation t = generate_pq(4, 4, 2);
    const auto interior = interior_vertices(t);
    bool saw_boundary = false;
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
        if (!interior[v]) {
            CHECK(!vertex_curvature(t, v).has_value());
            saw_boundary = true;
        }
    CHECK(saw_boundary);
}

TEST_CASE("spherical pairs are rejected, bad layer counts too") {
    CHECK_THROWS_AS(generate_pq(3, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(generate_pq(3, 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(generate_pq(5, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(generate_pq(2, 8, 2), std::invalid_argument);
    CHECK_THROWS_AS(generate_pq(4, 4, 0), std::invalid_argument);
}

TEST_CASE("face incidence invariants") {
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{4, 4}, {7, 3}, {3, 6}}) {
        const Tessellation t = generate_pq(p, q, 3);
        for (const auto& f : t.faces) CHECK(static_cast<int>(f.size()) == p);
        // interior edges lie in exactly two faces
        std::map<std::pair<VertexId, VertexId>, int> count;
        for (const auto& f : t.faces)
            for (std::size_t i = 0; i < f.size(); ++i)
                count[std::minmax(f[i], f[(i + 1) % f.size()])] += 1;
        const auto interior = interior_vertices(t);
        for (const Edge& e : t.graph.edges()) {
            const int c = count[std::minmax(e.u, e.v)];
            CHECK(c >= 1);
            CHECK(c <= 2);
            if (interior[e.u] && interior[e.v]) CHECK(c == 2);
        }
    }
}

TEST_CASE("euler consistency on every generated patch") {
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{4, 4}, {3, 6}, {6, 3},
                                                               {7, 3}, {8, 3}, {5, 4}}) {
        const auto ec = euler_consistency(generate_pq(p, q, 4));
        CHECK(ec.euler_count == doctest::Approx(1.0));
        CHECK(ec.curvature_sum == doctest::Approx(ec.euler_count).epsilon(1e-9));
    }
}

TEST_CASE("d1 metric: weights, intrinsic, jump size") {
    const Tessellation square = generate_pq(4, 4, 3);
    const EdgeWeighting w = default_intrinsic_weights(square.graph);
    const auto interior = interior_vertices(square);
    for (std::size_t e = 0; e < square.graph.edges().size(); ++e) {
        const Edge& ed = square.graph.edges()[e];
        if (interior[ed.u] && interior[ed.v]) CHECK(w.w[e] == doctest::Approx(0.5));
    }
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{4, 4}, {7, 3}, {5, 4}}) {
        const Tessellation t = generate_pq(p, q, 3);
        const PseudoMetric d1 = d1_metric(t);
        CHECK(verify_intrinsic(t.graph, d1).intrinsic);
        CHECK(d1.jump_size <= 1.0 + 1e-12);
    }
}

TEST_CASE("curvature report: flat classes fit quadratic growth") {
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{4, 4}, {3, 6}, {6, 3}}) {
        const CurvatureReport rep = curvature_report(generate_pq(p, q, 14));
        CHECK(rep.curvature_class == "nonnegative");
        CHECK(rep.growth_exponent_dn == doctest::Approx(2.0).epsilon(0.1));
        CHECK(rep.growth_exponent_d1 == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("curvature report: hyperbolic classes") {
    const CurvatureReport rep = curvature_report(generate_pq(7, 3, 8));
    CHECK(rep.curvature_class == "negative");
    CHECK(rep.higuchi_bound_holds);
    CHECK(rep.max_kappa <= -1.0 / 1806.0);
    CHECK(rep.exp_rate > 0.2);
    CHECK(rep.lambda0 > 0.01);
    CHECK(!rep.divergence_evidence);
}

TEST_CASE("curvature report: hand-built mixed patch") {
    // 5 x 4 grid of unit squares with one corner square split by a diagonal;
    // the vertex at the split has curvature -1/12, grid-interior ones 0
    const int W = 5, H = 4;
    auto id = [&](int i, int j) { return j * W + i; };
    std::vector<Edge> edges;
    for (int j = 0; j < H; ++j)
        for (int i = 0; i < W; ++i) {
            if (i + 1 < W) edges.push_back({id(i, j), id(i + 1, j), 1.0});
            if (j + 1 < H) edges.push_back({id(i, j), id(i, j + 1), 1.0});
        }
    edges.push_back({id(0, 0), id(1, 1), 1.0});  // the diagonal
    Tessellation t;
    t.graph = WeightedGraph::unweighted(W * H, std::move(edges));
    for (int j = 0; j + 1 < H; ++j)
        for (int i = 0; i + 1 < W; ++i) {
            if (i == 0 && j == 0) continue;
            t.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    t.faces.push_back({id(0, 0), id(1, 0), id(1, 1)});
    t.faces.push_back({id(0, 0), id(1, 1), id(0, 1)});
    t.boundary_face.assign(t.faces.size(), false);

    const auto interior = interior_vertices(t);
    CHECK(interior[id(1, 1)]);
    CHECK(interior[id(2, 1)]);
    const auto k11 = vertex_curvature(t, id(1, 1));
    REQUIRE(k11.has_value());
    CHECK(*k11 == doctest::Approx(1.0 - 2.5 + (2.0 / 3.0 + 3.0 / 4.0)));
    CHECK(*vertex_curvature(t, id(2, 1)) == doctest::Approx(0.0));

    const CurvatureReport rep = curvature_report(t);
    CHECK(rep.curvature_class == "mixed");
    CHECK(rep.total_abs_kappa > 0.0);
}

TEST_CASE("tessellation json round trip") {
    const Tessellation t = generate_pq(7, 3, 2);
    const Json j = tessellation_to_json(t);
    const Tessellation back = tessellation_from_json(j);
    CHECK(back.graph.vertex_count() == t.graph.vertex_count());
    CHECK(back.faces == t.faces);
    CHECK(tessellation_to_json(back).dump() == j.dump());
}

TEST_SUITE_END();
