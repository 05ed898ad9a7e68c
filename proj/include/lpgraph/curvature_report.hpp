#pragma once

#include "lpgraph/growth.hpp"
#include "lpgraph/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace lpgraph {

/// Interior curvature classification with the checks the sign pattern calls
/// for: quadratic-growth fits when kappa >= 0, the per-instance Higuchi bound
/// and spectral gap when kappa < 0, and only summary statistics when mixed.
struct CurvatureReport {
    std::string curvature_class;  // "nonnegative" | "negative" | "mixed"
    int interior_count = 0;
    double min_kappa = 0.0;
    double max_kappa = 0.0;
    double total_abs_kappa = 0.0;

    // nonnegative class
    double growth_exponent_dn = 0.0;  // natural metric, m = n
    double growth_exponent_d1 = 0.0;  // d_1 metric, m = 1
    // negative class
    bool higuchi_bound_holds = false;  // sup kappa <= -1/1806
    double exp_rate = 0.0;
    double lambda0 = 0.0;
    int lambda0_radius = 0;
    // layerwise minima; evidence channel for curvature decreasing outward
    std::vector<double> layer_min_kappa;
    bool divergence_evidence = false;
};

namespace detail {

inline FamilyWindow patch_as_window(const Tessellation& t) {
    FamilyWindow w;
    w.full_weighted_degree = normalizing_measure(t.graph);
    w.full_combinatorial_degree = combinatorial_degree(t.graph);
    w.graph = t.graph;
    w.root = 0;
    w.labels.resize(static_cast<std::size_t>(t.graph.vertex_count()));
    for (Index i = 0; i < t.graph.vertex_count(); ++i) w.labels[i] = i;
    return w;
}

}  // namespace detail

inline CurvatureReport curvature_report(const Tessellation& t) {
    const auto interior = interior_vertices(t);
    const auto kappas = interior_curvatures(t);
    if (kappas.empty()) throw std::invalid_argument("curvature_report: no interior vertices");

    CurvatureReport rep;
    rep.interior_count = static_cast<int>(kappas.size());
    rep.min_kappa = rep.max_kappa = kappas.front().second;
    for (const auto& [v, k] : kappas) {
        rep.min_kappa = std::min(rep.min_kappa, k);
        rep.max_kappa = std::max(rep.max_kappa, k);
        rep.total_abs_kappa += std::abs(k);
    }
    // classification tolerance: 1/p sums leave curvature-zero lattices a few
    // ulp off exact zero
    constexpr double kClassTol = 1e-12;
    if (rep.min_kappa >= -kClassTol)
        rep.curvature_class = "nonnegative";
    else if (rep.max_kappa <= -kClassTol)
        rep.curvature_class = "negative";
    else
        rep.curvature_class = "mixed";

    // hop layers from the root; balls below the clearance stay interior
    const auto hops = window_hops(t.graph, 0);
    int clearance = std::numeric_limits<int>::max();
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
        if (!interior[v] && hops[v] >= 0) clearance = std::min(clearance, hops[v]);
    const int max_exact = clearance - 1;

    std::vector<double> layer_min;
    for (const auto& [v, k] : kappas) {
        const std::size_t layer = static_cast<std::size_t>(hops[v]);
        if (layer_min.size() <= layer)
            layer_min.resize(layer + 1, std::numeric_limits<double>::infinity());
        layer_min[layer] = std::min(layer_min[layer], k);
    }
    for (double v : layer_min)
        rep.layer_min_kappa.push_back(std::isfinite(v) ? v : 0.0);

    const FamilyWindow patch = detail::patch_as_window(t);
    if (rep.curvature_class == "nonnegative" && max_exact >= 2) {
        const FamilyWindow wn = with_measure(patch, MeasureChoice::NormalizingMeasure);
        rep.growth_exponent_dn =
            volume_profile(wn, metric_weights(wn, MetricChoice::Natural), 0, max_exact)
                .poly_exponent;
        const EdgeWeighting d1w = default_intrinsic_weights(t.graph);
        const Vectord d1 = single_source_distances(t.graph, d1w, 0);
        double d1_clear = kUnreachable;
        for (VertexId v = 0; v < t.graph.vertex_count(); ++v)
            if (!interior[v]) d1_clear = std::min(d1_clear, d1[v]);
        const int r1 = static_cast<int>(std::floor(d1_clear - 1e-9));
        if (r1 >= 2) rep.growth_exponent_d1 = volume_profile(patch, d1w, 0, r1).poly_exponent;
    } else if (rep.curvature_class == "negative" && max_exact >= 1) {
        rep.higuchi_bound_holds = rep.max_kappa <= -1.0 / 1806.0 + 1e-15;
        const FamilyWindow wn = with_measure(patch, MeasureChoice::NormalizingMeasure);
        rep.exp_rate =
            volume_profile(wn, metric_weights(wn, MetricChoice::Natural), 0, max_exact)
                .exp_rate;
        rep.lambda0_radius = std::min(6, max_exact);
        const auto hops_ball = window_hops(wn.graph, 0);
        std::vector<VertexId> ball;
        for (VertexId v = 0; v < wn.graph.vertex_count(); ++v)
            if (hops_ball[v] >= 0 && hops_ball[v] <= rep.lambda0_radius) ball.push_back(v);
        rep.lambda0 = bottom_eigenvalue(
            assemble(induced_truncation(wn, ball, "tess"), AssembleMode::SparseOnly));
        // outward-decreasing curvature evidence
        std::vector<double> mins;
        for (std::size_t l = 1; l < rep.layer_min_kappa.size(); ++l)
            if (rep.layer_min_kappa[l] != 0.0) mins.push_back(rep.layer_min_kappa[l]);
        rep.divergence_evidence =
            mins.size() >= 3 && mins.back() <= 2.0 * mins.front() && mins.back() <= mins.front() - 1.0;
    }
    return rep;
}

}  // namespace lpgraph
