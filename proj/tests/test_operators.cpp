#include "lpgraph/bounds.hpp"
#include "lpgraph/spectra.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lpgraph;

TEST_SUITE_BEGIN("operators");

namespace {

Truncation single_edge_normalized() {
    WeightedGraph g = path_graph(2);
    return full_graph_truncation(normalized(g));
}

Truncation single_vertex_with_killing() {
    // one vertex, c = m = 1; representable as a truncation even though a
    // standalone graph would flag the isolated vertex
    WeightedGraph g(1, {}, Vectord::Ones(1), Vectord::Ones(1));
    return full_graph_truncation(std::move(g));
}

}  // namespace

TEST_CASE("truncate: lattice window killing sits at the rim") {
    const Truncation tr = truncate(*lattice_family(1), 2);
    REQUIRE(tr.window.vertex_count() == 5);
    int rim = 0;
    for (Index v = 0; v < 5; ++v) {
        if (tr.boundary_killing[v] > 0.0) {
            CHECK(tr.boundary_killing[v] == 1.0);
            ++rim;
        }
    }
    CHECK(rim == 2);
}

TEST_CASE("truncate: finite family windows have no boundary") {
    const Truncation tr = truncate(*single_edge_family(), 3);
    CHECK(tr.boundary_killing.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncate: tree leaves lose two edges each") {
    const Truncation tr = truncate(*regular_tree_family(3), 2);
    int leaves = 0;
    for (Index v = 0; v < tr.window.vertex_count(); ++v)
        if (tr.boundary_killing[v] > 0.0) {
            CHECK(tr.boundary_killing[v] == 2.0);
            ++leaves;
        }
    CHECK(leaves == 6);  // depth-2 layer size 3 * 2
}

TEST_CASE("assemble: single edge and single vertex") {
    const LaplacianMatrix L = assemble(single_edge_normalized());
    Matrixd expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK((L.action - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(L.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(L.eigenvalues[1] == doctest::Approx(2.0));

    const LaplacianMatrix Lv = assemble(single_vertex_with_killing());
    CHECK(Lv.action(0, 0) == 1.0);
}

TEST_CASE("assemble: symmetrization and positivity invariants") {
    for (std::uint64_t seed : {31, 32, 33}) {
        const WeightedGraph g = testing::random_graph(40, seed, true);
        const LaplacianMatrix L = assemble(full_graph_truncation(g));
        CHECK((L.sym - L.sym.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(L.eigenvalues[0] >= -1e-10);
        // S = M^{1/2} A M^{-1/2}
        const Vectord rm = g.m().cwiseSqrt();
        const Matrixd s2 = rm.asDiagonal() * L.action * rm.cwiseInverse().asDiagonal();
        CHECK((L.sym - s2).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("assemble: normalized no-boundary windows live in [0,2] with zero row sums") {
    const WeightedGraph g = testing::random_graph(30, 41);
    const LaplacianMatrix L = assemble(full_graph_truncation(normalized(g)));
    CHECK(L.action.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(L.eigenvalues[0] >= -1e-10);
    CHECK(L.eigenvalues[L.size - 1] <= 2.0 + 1e-10);
}

TEST_CASE("dirichlet energy matches the operator form") {
    const Truncation tr = single_edge_normalized();
    Vectord f(2);
    f << 1.0, -1.0;
    // <Af, f>_m with Af = (2, -2)
    CHECK(dirichlet_energy<double>(tr, f, f) == doctest::Approx(4.0));

    Vectord ones = Vectord::Ones(2);
    CHECK(dirichlet_energy<double>(tr, ones, ones) == doctest::Approx(0.0));

    // random window: Q(f,f) = <Af, f>_m, and complex inputs stay consistent
    const Truncation rt = truncate(*regular_tree_family(3), 3, 0,
                                   MeasureChoice::NormalizingMeasure);
    const LaplacianMatrix L = assemble(rt);
    std::mt19937_64 eng(7);
    std::normal_distribution<double> gauss;
    Vectord fr(L.size);
    for (Index i = 0; i < L.size; ++i) fr[i] = gauss(eng);
    const double q = dirichlet_energy<double>(rt, fr, fr);
    const double af = (L.m.asDiagonal() * (L.action * fr)).dot(fr);
    CHECK(q == doctest::Approx(af).epsilon(1e-10));
    CHECK(q >= 0.0);

    DenseVector<Complex> fc(L.size);
    for (Index i = 0; i < L.size; ++i) fc[i] = Complex(gauss(eng), gauss(eng));
    const Complex qc = dirichlet_energy<Complex>(rt, fc, fc);
    CHECK(std::abs(qc.imag()) < 1e-10 * std::abs(qc));
    CHECK(qc.real() >= 0.0);
}

TEST_CASE("heat kernel: t=0, closed form, conservation") {
    const Truncation tr = single_edge_normalized();
    const LaplacianMatrix L = assemble(tr);
    const KernelMatrix<double> p0 = heat_kernel(L, 0.0);
    CHECK(p0.k(0, 0) == doctest::Approx(1.0));
    CHECK(p0.k(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

    for (double t : {0.3, 1.0, 2.5}) {
        const KernelMatrix<double> pt = heat_kernel(L, t);
        CHECK(pt.k(0, 0) == doctest::Approx(0.5 * (1.0 + std::exp(-2.0 * t))));
        CHECK(pt.k(0, 1) == doctest::Approx(0.5 * (1.0 - std::exp(-2.0 * t))));
    }
    CHECK_THROWS_AS(heat_kernel(L, -0.1), std::invalid_argument);

    // stochastic completeness on boundaryless windows with c = 0
    const WeightedGraph g = testing::random_graph(25, 51);
    const LaplacianMatrix Lg = assemble(full_graph_truncation(g));
    const KernelMatrix<double> pt = heat_kernel(Lg, 0.7);
    for (Index y = 0; y < Lg.size; ++y) {
        double mass = 0.0;
        for (Index x = 0; x < Lg.size; ++x) mass += pt.k(x, y) * g.m()[x];
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(pt.k.minCoeff() >= -1e-12);
}

TEST_CASE("heat kernel: semigroup law and symmetry") {
    const Truncation tr = truncate(*lattice_family(1), 6, 0, MeasureChoice::NormalizingMeasure);
    const LaplacianMatrix L = assemble(tr);
    const auto p1 = heat_kernel(L, 0.6);
    const auto p2 = heat_kernel(L, 1.1);
    const auto p3 = heat_kernel(L, 1.7);
    const auto comp = compose(p1, p2);
    CHECK((comp.k - p3.k).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p1.k - p1.k.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("heat kernel: domain monotonicity under window growth") {
    const Truncation small = truncate(*regular_tree_family(3), 3);
    const Truncation big = truncate(*regular_tree_family(3), 5);
    const auto ps = heat_kernel(assemble(small), 1.0);
    const auto pb = heat_kernel(assemble(big), 1.0);
    // family ids of the smaller window prefix the larger one
    for (Index x = 0; x < ps.k.rows(); ++x)
        for (Index y = 0; y < ps.k.cols(); ++y)
            CHECK(ps.k(x, y) <= pb.k(x, y) + 1e-12);
}

TEST_CASE("chebyshev columns match the dense kernel") {
    const Truncation tr = truncate(*regular_tree_family(3), 6, 0,
                                   MeasureChoice::NormalizingMeasure);
    const LaplacianMatrix L = assemble(tr);
    const double lmax = gershgorin_upper(L.sym_sparse);
    for (double t : {0.5, 4.0, 32.0}) {
        const auto pt = heat_kernel(L, t);
        const Vectord col = heat_kernel_column(L, t, 17, lmax);
        CHECK((col - pt.k.col(17)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("resolvent kernel: closed forms and Laplace transform") {
    const LaplacianMatrix Lv = assemble(single_vertex_with_killing());
    CHECK(resolvent_kernel(Lv, -1.0).k(0, 0) == doctest::Approx(0.5));

    const LaplacianMatrix L = assemble(single_edge_normalized());
    const KernelMatrix<double> g = resolvent_kernel(L, -1.0);
    CHECK(g.k(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(g.k(0, 1) == doctest::Approx(1.0 / 3.0));

    // quadrature of the Laplace transform, trapezoid on a fine grid
    const Truncation tt = truncate(*regular_tree_family(3), 3);
    const LaplacianMatrix Lt = assemble(tt);
    const double alpha = -1.0;
    const KernelMatrix<double> ga = resolvent_kernel(Lt, alpha);
    Matrixd quad = Matrixd::Zero(Lt.size, Lt.size);
    const double dt = 0.002, tmax = 45.0;
    for (double t = 0.0; t < tmax; t += dt) {
        const double w = (t == 0.0) ? 0.5 : 1.0;
        quad += w * std::exp(alpha * t) * heat_kernel(Lt, t).k * dt;
    }
    CHECK((quad - ga.k).cwiseAbs().maxCoeff() < 1e-5);

    CHECK(ga.k.minCoeff() >= -1e-13);
    CHECK_THROWS_AS(resolvent_kernel(Lt, Lt.eigenvalues[0]), std::invalid_argument);
}

TEST_CASE("resolvent identity") {
    const Truncation tr = truncate(*lattice_family(2), 3, 0,
                                   MeasureChoice::NormalizingMeasure);
    const LaplacianMatrix L = assemble(tr);
    const double a = -0.7, b = -2.3;
    const auto ga = resolvent_kernel(L, a);
    const auto gb = resolvent_kernel(L, b);
    const auto prod = compose(ga, gb);
    CHECK((ga.k - gb.k - (a - b) * prod.k).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("squared resolvent: composition, decay fit, complex parameter") {
    const LaplacianMatrix L = assemble(single_edge_normalized());
    const auto g1 = resolvent_kernel(L, -1.0);
    const auto sq = squared_resolvent_kernel(L, Complex(-1.0, 0.0));
    const auto comp = compose(g1, g1);
    CHECK((sq.k.real() - comp.k).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sq.k.imag().cwiseAbs().maxCoeff() < 1e-12);

    const Truncation tz = truncate(*lattice_family(1), 40);
    const LaplacianMatrix Lz = assemble(tz);
    const FamilyWindow w = lattice_family(1)->materialize(40);
    const EdgeWeighting ew = default_intrinsic_weights_full(w);
    const PseudoMetric dm = path_metric(w.graph, ew);

    const auto sqz = squared_resolvent_kernel(Lz, Complex(-1.0, 0.0));
    const DecayFit fit = kernel_decay_fit(sqz, dm.d);
    CHECK(fit.slope < 0.0);
    CHECK(fit.r_squared > 0.9);

    const auto sqc = squared_resolvent_kernel(Lz, Complex(0.5, 0.5));
    CHECK(sqc.k.cwiseAbs().maxCoeff() < kUnreachable);
    const DecayFit fitc = kernel_decay_fit(sqc, dm.d);
    CHECK(fitc.slope < 0.0);

    CHECK_THROWS_AS(squared_resolvent_kernel(Lz, Complex(Lz.eigenvalues[3], 0.0)),
                    std::invalid_argument);
}

TEST_CASE("kernel norms: identity, heat, dirichlet mass loss") {
    const WeightedGraph g = testing::random_graph(18, 61);
    const LaplacianMatrix L = assemble(full_graph_truncation(g));
    KernelMatrix<double> id;
    id.k = Matrixd::Zero(L.size, L.size);
    for (Index i = 0; i < L.size; ++i) id.k(i, i) = 1.0 / g.m()[i];
    id.m = g.m();
    for (double p : {1.0, 2.0, kInfNorm}) CHECK(kernel_norm(id, p, p) == doctest::Approx(1.0));
    CHECK(kernel_norm(id, 1.0, kInfNorm) == doctest::Approx(1.0 / g.m().minCoeff()));

    const auto pt = heat_kernel(L, 1.3);
    CHECK(kernel_norm(pt, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(kernel_norm(pt, kInfNorm, kInfNorm) == doctest::Approx(1.0).epsilon(1e-10));

    const auto ptk = heat_kernel(assemble(truncate(*regular_tree_family(3), 3)), 1.0);
    CHECK(kernel_norm(ptk, 1.0, 1.0) < 1.0);

    CHECK_THROWS_AS(kernel_norm(pt, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("kernel norm (2,2) equals e^{-t lambda_min}") {
    const Truncation tr = truncate(*regular_tree_family(3), 4, 0,
                                   MeasureChoice::NormalizingMeasure);
    const LaplacianMatrix L = assemble(tr);
    for (double t : {0.5, 2.0}) {
        const double n22 = kernel_norm(heat_kernel(L, t), 2.0, 2.0);
        CHECK(n22 == doctest::Approx(std::exp(-t * L.eigenvalues[0])).epsilon(1e-9));
    }
}

TEST_CASE("general (p,q) norm is an upper bound for the exact cases") {
    const WeightedGraph g = testing::random_graph(15, 71);
    const auto pt = heat_kernel(assemble(full_graph_truncation(g)), 0.8);
    // the integral bound at (2,2) dominates the spectral value
    const double exact22 = kernel_norm(pt, 2.0, 2.0);
    KernelMatrix<double> asym = pt;
    asym.k(0, 1) += 1e-6;  // breaks symmetry, forcing the bound route
    const double bound22 = kernel_norm(asym, 2.0, 2.0);
    CHECK(bound22 + 1e-9 >= exact22);
}

TEST_CASE("transition matrix of normalized truncations") {
    const Truncation tr = single_edge_normalized();
    const auto P = transition_matrix(tr);
    CHECK(P.k(0, 1) == doctest::Approx(1.0));
    CHECK(P.k(0, 0) == 0.0);
    for (double p : {1.0, 2.0, kInfNorm}) CHECK(kernel_norm(P, p, p) <= 1.0 + 1e-12);

    // P3: norms at most one, and I - P has the Laplacian spectrum
    const WeightedGraph p3 = normalized(path_graph(3));
    const Truncation t3 = full_graph_truncation(p3);
    const auto P3 = transition_matrix(t3);
    for (double p : {1.0, 2.0, kInfNorm}) CHECK(kernel_norm(P3, p, p) <= 1.0 + 1e-12);
    const LaplacianMatrix L3 = assemble(t3);
    const Matrixd P3op = P3.k * p3.m().asDiagonal();
    const Matrixd shifted = Matrixd::Identity(3, 3) - P3op;
    CHECK((shifted - L3.action).cwiseAbs().maxCoeff() < 1e-13);

    // requires m = n and c = 0
    CHECK_THROWS_AS(transition_matrix(truncate(*lattice_family(1), 2)),
                    std::invalid_argument);
}

TEST_CASE("heat bound check: clean scans on small windows") {
    const std::vector<double> grid{0.1, 0.5, 2.0, 10.0};
    const auto repz = heat_bound_check(*lattice_family(1), 5, 5, grid);
    CHECK(repz.violations.empty());
    CHECK(repz.pairs_checked > 0);
    CHECK(repz.max_ratio <= 1.0 + 1e-9);

    const auto rept = heat_bound_check(*regular_tree_family(3), 4, 4, grid);
    CHECK(rept.violations.empty());

    const auto repl = heat_bound_check(*line_example_family(), 8, 8, grid);
    CHECK(repl.violations.empty());
}

TEST_CASE("heat bound beta variant") {
    const std::vector<double> grid{0.1, 1.0, 10.0};
    for (double beta : {1.0, 2.0}) {
        const auto rep = heat_bound_beta_check(*lattice_family(1), 5, 5, beta, grid);
        CHECK(rep.violations.empty());
    }
    const auto rept = heat_bound_beta_check(*regular_tree_family(3), 4, 4, 2.0, grid);
    CHECK(rept.violations.empty());
}

TEST_CASE("resolvent bound check") {
    for (double eps : {0.5, 1.0}) {
        const auto rep = resolvent_bound_check(*lattice_family(1), 8, 8, eps);
        CHECK(rep.violations.empty());
        const auto repl = resolvent_bound_check(*line_example_family(), 8, 8, eps);
        CHECK(repl.violations.empty());
    }
}

TEST_CASE("feynman-kac: deterministic at t=0 and matching closed form") {
    const Truncation tr = single_edge_normalized();
    const auto at0 = feynman_kac_mc(tr, 0.0, 0, 0, 2000, 99);
    CHECK(at0.estimate == doctest::Approx(1.0));
    CHECK(at0.stderr_ == doctest::Approx(0.0));

    const auto est = feynman_kac_mc(tr, 1.0, 0, 1, 60000, 1234);
    const double truth = 0.5 * (1.0 - std::exp(-2.0));
    CHECK(std::abs(est.estimate - truth) <= 4.0 * est.stderr_ + 1e-12);
}

TEST_CASE("feynman-kac: killing domination is samplewise") {
    WeightedGraph g = testing::random_graph(20, 81, true);
    const Truncation tr = full_graph_truncation(g);
    const LaplacianMatrix L = assemble(tr);
    const double t = 0.8;
    const auto est = feynman_kac_mc(tr, t, 2, 5, 50000, 4321);
    CHECK(est.estimate <= est.estimate_free + 1e-15);

    const auto pt = heat_kernel(L, t);
    CHECK(std::abs(est.estimate - pt.k(2, 5)) <= 4.0 * est.stderr_ + 1e-3);

    // the free estimate tracks the c = 0 kernel of the same window
    WeightedGraph g0(g.vertex_count(), g.edges(), g.m(), Vectord::Zero(g.vertex_count()));
    const auto p0 = heat_kernel(assemble(full_graph_truncation(g0)), t);
    CHECK(std::abs(est.estimate_free - p0.k(2, 5)) <= 4.0 * est.stderr_free + 1e-3);
}

TEST_SUITE_END();
