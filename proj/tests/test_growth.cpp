#include "lpgraph/growth.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpgraph;

TEST_SUITE_BEGIN("growth");

TEST_CASE("lattice profile counts 2r+1") {
    const GrowthProfile p =
        volume_profile(*lattice_family(1), MetricChoice::Natural, 0, 10, 2);
    for (int r = 0; r <= 10; ++r) {
        CHECK(p.counts[r] == 2 * r + 1);
        CHECK(p.volumes[r] == doctest::Approx(2 * r + 1));
    }
}

TEST_CASE("tree profile matches the layer recursion") {
    const GrowthProfile p =
        volume_profile(*regular_tree_family(3), MetricChoice::Natural, 0, 8, 1);
    for (int r = 0; r <= 8; ++r)
        CHECK(p.counts[r] == testing::tree_ball_count(3, r));
}

TEST_CASE("window too small raises instead of truncating") {
    CHECK_THROWS_WITH_AS(
        volume_profile(*lattice_family(1), MetricChoice::Natural, 0, 10, 0),
        doctest::Contains("window too small"), std::runtime_error);
}

TEST_CASE("line example ball bound from the intrinsic metric") {
    // counts satisfy #B_r <= sqrt(2) (8r + 6) for every eligible center
    const FamilyWindow w = line_example_family()->materialize(200);
    const EdgeWeighting ew = metric_weights(w, MetricChoice::DefaultIntrinsic);
    const auto centers = sample_centers(w, ew, 12);
    REQUIRE(!centers.empty());
    for (VertexId x : centers) {
        const GrowthProfile p = volume_profile(w, ew, x, 12);
        for (int r = 0; r <= 12; ++r)
            CHECK(p.counts[r] <= std::sqrt(2.0) * (8.0 * r + 6.0));
    }
}

TEST_CASE("growth rates: lattice flat, tree log 2") {
    const double mu_z =
        exp_growth_rate(*lattice_family(1), MetricChoice::Natural, 0, 60, 1);
    CHECK(std::abs(mu_z) < 0.05);

    const double mu_t =
        exp_growth_rate(*regular_tree_family(3), MetricChoice::Natural, 0, 14, 1);
    CHECK(mu_t == doctest::Approx(std::log(2.0)).epsilon(0.08));
}

TEST_CASE("lattice dim 2 exponent near 2") {
    const GrowthProfile p =
        volume_profile(*lattice_family(2), MetricChoice::Natural, 0, 16, 1);
    CHECK(p.poly_exponent == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("rapidly branching tree grows superexponentially") {
    const double mu =
        exp_growth_rate(*rapidly_branching_tree_family(), MetricChoice::Natural, 0, 8, 1);
    CHECK(mu > std::log(3.0));
}

TEST_CASE("monotone volumes, and window enlargement preserves profiles") {
    const GrowthProfile p =
        volume_profile(*lattice_family(2), MetricChoice::Natural, 0, 8, 1);
    for (int r = 1; r <= 8; ++r) {
        CHECK(p.volumes[r] >= p.volumes[r - 1]);
        CHECK(p.counts[r] >= p.counts[r - 1]);
    }
    const GrowthProfile pbig =
        volume_profile(*lattice_family(2), MetricChoice::Natural, 0, 8, 5);
    CHECK((p.volumes - pbig.volumes).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subexp certificate: quadratic growth plateaus, trees fail") {
    const SubexpCertificate flat =
        subexp_certificate(*lattice_family(2), MetricChoice::Natural, 0.5, 12, 12);
    CHECK(flat.plateau);

    const SubexpCertificate tree = subexp_certificate(
        *regular_tree_family(3), MetricChoice::Natural, 0.5, 9, 1, MeasureChoice::Given, {0});
    CHECK(!tree.plateau);
    CHECK(tree.argmax_radius == 9.0);
}

TEST_CASE("line example plateaus at every eps") {
    const FamilyWindow w = line_example_family()->materialize(200);
    const EdgeWeighting ew = metric_weights(w, MetricChoice::DefaultIntrinsic);
    const auto centers = sample_centers(w, ew, 12);
    for (double eps : {0.5, 1.0}) {
        const SubexpCertificate cert = subexp_certificate(
            *line_example_family(), MetricChoice::DefaultIntrinsic, eps, 12, 188,
            MeasureChoice::Given, centers);
        CHECK(cert.plateau);
    }
}

TEST_CASE("growth consequences on the unit-measure lattice") {
    const GrowthConsequences gc =
        growth_consequence_check(*lattice_family(1), MetricChoice::Natural, 1.0, 10, 10);
    // m = 1: the measure-comparison constant is exactly 1
    CHECK(gc.c_measure == doctest::Approx(1.0));
    CHECK(gc.count_bound_holds);
    // geometric series oracle: sum_y e^{-|y-x|} = 1 + 2 sum_{k=1..} e^{-k}
    double oracle = 1.0;
    for (int k = 1; k <= 30; ++k) oracle += 2.0 * std::exp(-static_cast<double>(k));
    CHECK(gc.c_exp_sum <= oracle + 1e-9);
    CHECK(gc.c_exp_sum >= oracle - 2.0 * std::exp(-10.0));
}

TEST_CASE("growth consequences on the line example") {
    const GrowthConsequences gc = growth_consequence_check(
        *line_example_family(), MetricChoice::DefaultIntrinsic, 0.5, 8, 60);
    CHECK(std::isfinite(gc.c_eps));
    CHECK(std::isfinite(gc.c_measure));
    CHECK(std::isfinite(gc.c_exp_sum));
    CHECK(gc.count_bound_holds);
}

TEST_CASE("count rearrangement is pointwise on unit-measure instances") {
    const FamilyWindow w = lattice_family(2)->materialize(12);
    const EdgeWeighting ew = metric_weights(w, MetricChoice::Natural);
    const SubexpCertificate cert =
        subexp_certificate(*lattice_family(2), MetricChoice::Natural, 0.7, 6, 6);
    for (VertexId x : {w.root}) {
        const Vectord dist = single_source_distances(w.graph, ew, x);
        for (int r = 0; r <= 6; ++r) {
            int count = 0;
            double vol = 0;
            for (Index y = 0; y < dist.size(); ++y)
                if (dist[y] <= r) {
                    ++count;
                    vol += w.graph.m()[y];
                }
            CHECK(count <= cert.c_eps * std::exp(0.7 * r) * vol / w.graph.m()[x] + 1e-9);
        }
    }
}

TEST_SUITE_END();
