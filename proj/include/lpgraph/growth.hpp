#pragma once

#include "lpgraph/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace lpgraph {

enum class MetricChoice { Natural, DefaultIntrinsic };

inline const char* to_string(MetricChoice c) {
    return c == MetricChoice::Natural ? "natural" : "default-intrinsic";
}

inline EdgeWeighting metric_weights(const FamilyWindow& w, MetricChoice choice) {
    if (choice == MetricChoice::Natural) {
        EdgeWeighting ew;
        ew.w.assign(w.graph.edges().size(), 1.0);
        return ew;
    }
    return default_intrinsic_weights_full(w);
}

namespace detail {

/// Distance from x to the nearest vertex with edges leaving the window. Ball
/// computations are exact strictly below this clearance.
inline double boundary_clearance(const FamilyWindow& w, const Vectord& dist) {
    const Vectord leak = boundary_weight(w);
    double c = kUnreachable;
    for (Index v = 0; v < leak.size(); ++v)
        if (leak[v] > 0.0) c = std::min(c, dist[v]);
    return c;
}

struct SortedDistances {
    std::vector<double> d;       // ascending, reachable vertices only
    std::vector<double> m_cum;   // cumulative measure in the same order
};

inline SortedDistances sorted_distances(const FamilyWindow& w, const Vectord& dist) {
    std::vector<Index> order;
    for (Index v = 0; v < dist.size(); ++v)
        if (dist[v] != kUnreachable) order.push_back(v);
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return dist[a] < dist[b]; });
    SortedDistances sd;
    double acc = 0.0;
    for (Index v : order) {
        acc += w.graph.m()[v];
        sd.d.push_back(dist[v]);
        sd.m_cum.push_back(acc);
    }
    return sd;
}

inline std::pair<double, Index> ball_mass(const SortedDistances& sd, double r) {
    const auto it = std::upper_bound(sd.d.begin(), sd.d.end(), r);
    const Index count = static_cast<Index>(it - sd.d.begin());
    return {count == 0 ? 0.0 : sd.m_cum[count - 1], count};
}

inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
    }
    const double vxx = sxx - sx * sx / n;
    return vxx > 0.0 ? (sxy - sx * sy / n) / vxx : 0.0;
}

}  // namespace detail

/// Ball volumes and counts around one center on the integer radius grid
/// 0..R, with growth-rate fits over the top half of the grid.
struct GrowthProfile {
    VertexId center = 0;
    std::int64_t center_label = 0;
    std::vector<double> radii;
    Vectord volumes;
    Vectori counts;
    double exp_rate = 0.0;       // slope of log m(B_r) vs r, top half
    double poly_exponent = 0.0;  // slope of log m(B_r) vs log r, top half
};

/// Exact m(B_r(x)) for r <= R. The window must extend past the requested
/// radius (clearance check); truncated balls raise an error rather than
/// silently undercounting.
inline GrowthProfile volume_profile(const FamilyWindow& w, const EdgeWeighting& ew,
                                    VertexId center, int R) {
    const Vectord dist = single_source_distances(w.graph, ew, center);
    if (!(detail::boundary_clearance(w, dist) > static_cast<double>(R)))
        throw std::runtime_error(
            "volume_profile: window too small for radius " + std::to_string(R) +
            " around vertex " + std::to_string(center));
    const auto sd = detail::sorted_distances(w, dist);
    GrowthProfile p;
    p.center = center;
    p.center_label = w.labels[center];
    p.volumes.resize(R + 1);
    p.counts.resize(R + 1);
    for (int r = 0; r <= R; ++r) {
        p.radii.push_back(r);
        const auto [mass, count] = detail::ball_mass(sd, r);
        p.volumes[r] = mass;
        p.counts[r] = static_cast<int>(count);
    }
    std::vector<double> xs, ys, lx, ly;
    for (int r = (R + 1) / 2; r <= R; ++r) {
        xs.push_back(r);
        ys.push_back(std::log(p.volumes[r]));
        if (r >= 1) {
            lx.push_back(std::log(static_cast<double>(r)));
            ly.push_back(std::log(p.volumes[r]));
        }
    }
    p.exp_rate = detail::fit_slope(xs, ys);
    p.poly_exponent = detail::fit_slope(lx, ly);
    return p;
}

inline GrowthProfile volume_profile(const GraphFamily& family, MetricChoice mc, VertexId center,
                                    int R, int buffer,
                                    MeasureChoice measure = MeasureChoice::Given) {
    const FamilyWindow w = with_measure(family.materialize(R + buffer), measure);
    return volume_profile(w, metric_weights(w, mc), center, R);
}

inline double exp_growth_rate(const GraphFamily& family, MetricChoice mc, VertexId center,
                              int R, int buffer, MeasureChoice measure = MeasureChoice::Given) {
    return volume_profile(family, mc, center, R, buffer, measure).exp_rate;
}

/// Deterministic center sample: all eligible vertices when the window holds
/// at most 500, otherwise 64 picks with a fixed seed. Eligible means the
/// window can resolve balls of radius R exactly around the vertex.
inline std::vector<VertexId> sample_centers(const FamilyWindow& w, const EdgeWeighting& ew,
                                            int R, std::uint64_t seed = 12345) {
    std::vector<VertexId> eligible;
    for (VertexId x = 0; x < w.graph.vertex_count(); ++x) {
        const Vectord dist = single_source_distances(w.graph, ew, x);
        if (detail::boundary_clearance(w, dist) > static_cast<double>(R)) eligible.push_back(x);
    }
    if (eligible.empty())
        throw std::runtime_error("sample_centers: no vertex clears radius " + std::to_string(R));
    if (w.graph.vertex_count() <= 500 || eligible.size() <= 64) return eligible;
    std::vector<VertexId> picked;
    std::mt19937_64 eng(seed);
    std::sample(eligible.begin(), eligible.end(), std::back_inserter(picked), 64, eng);
    return picked;
}

/// Empirical subexponential-growth certificate: the smallest constant with
/// m(B_r(x)) <= C e^{eps r} m(x) over the sampled centers and the radius
/// grid. A plateau (argmax in the lower half of the grid) is evidence for
/// subexponential growth; an argmax at the rim flags failure at this eps.
struct SubexpCertificate {
    double eps = 0.0;
    double c_eps = 0.0;
    std::vector<double> per_radius;  // max over centers of m(B_r) e^{-eps r} / m(x)
    double argmax_radius = 0.0;
    bool plateau = false;
    std::vector<VertexId> centers;
};

inline SubexpCertificate subexp_certificate(const GraphFamily& family, MetricChoice mc,
                                            double eps, int R, int buffer,
                                            MeasureChoice measure = MeasureChoice::Given,
                                            std::vector<VertexId> centers = {}) {
    if (eps <= 0.0) throw std::invalid_argument("subexp_certificate: eps > 0");
    const FamilyWindow w = with_measure(family.materialize(R + buffer), measure);
    const EdgeWeighting ew = metric_weights(w, mc);
    if (centers.empty()) centers = sample_centers(w, ew, R);

    SubexpCertificate cert;
    cert.eps = eps;
    cert.centers = centers;
    cert.per_radius.assign(R + 1, 0.0);
    for (VertexId x : centers) {
        const Vectord dist = single_source_distances(w.graph, ew, x);
        if (!(detail::boundary_clearance(w, dist) > static_cast<double>(R)))
            throw std::runtime_error("subexp_certificate: center " + std::to_string(x) +
                                     " does not clear radius " + std::to_string(R));
        const auto sd = detail::sorted_distances(w, dist);
        for (int r = 0; r <= R; ++r) {
            const double val =
                detail::ball_mass(sd, r).first * std::exp(-eps * r) / w.graph.m()[x];
            cert.per_radius[r] = std::max(cert.per_radius[r], val);
        }
    }
    for (int r = 0; r <= R; ++r)
        if (cert.per_radius[r] >= cert.c_eps) {
            // ties resolve to the larger radius: a flat tail is not a plateau claim
            cert.c_eps = cert.per_radius[r];
            cert.argmax_radius = r;
        }
    cert.plateau = cert.argmax_radius <= 0.5 * R;
    return cert;
}

/// Window-level consequences of a measured growth constant: the measure
/// comparison constant, the derived vertex-count bound (an identity-level
/// rearrangement, so it must pass), and the exponential-sum constant.
struct GrowthConsequences {
    double eps = 0.0;
    double c_eps = 0.0;
    double c_measure = 0.0;    // smallest C with m(x) <= C e^{eps d} m(y)
    double c_count_bound = 0.0;  // C_eps * c_measure
    double max_count_ratio = 0.0;  // max #B_r(x) e^{-2 eps r}
    bool count_bound_holds = false;
    double c_exp_sum = 0.0;    // max_x sum_y e^{-eps d(x,y)}
};

inline GrowthConsequences growth_consequence_check(const GraphFamily& family, MetricChoice mc,
                                                   double eps, int R, int buffer,
                                                   MeasureChoice measure = MeasureChoice::Given) {
    const FamilyWindow w = with_measure(family.materialize(R + buffer), measure);
    const EdgeWeighting ew = metric_weights(w, mc);
    const std::vector<VertexId> centers = sample_centers(w, ew, R);

    GrowthConsequences gc;
    gc.eps = eps;
    for (VertexId x : centers) {
        const Vectord dist = single_source_distances(w.graph, ew, x);
        const auto sd = detail::sorted_distances(w, dist);
        double sum = 0.0;
        for (Index y = 0; y < dist.size(); ++y) {
            if (dist[y] == kUnreachable) continue;
            sum += std::exp(-eps * dist[y]);
            gc.c_measure = std::max(
                gc.c_measure, w.graph.m()[x] / (w.graph.m()[y] * std::exp(eps * dist[y])));
        }
        gc.c_exp_sum = std::max(gc.c_exp_sum, sum);
        for (int r = 0; r <= R; ++r) {
            const double ratio = detail::ball_mass(sd, r).second * std::exp(-2.0 * eps * r);
            gc.max_count_ratio = std::max(gc.max_count_ratio, ratio);
            const double cball =
                detail::ball_mass(sd, r).first * std::exp(-eps * r) / w.graph.m()[x];
            gc.c_eps = std::max(gc.c_eps, cball);
        }
    }
    gc.c_count_bound = gc.c_eps * gc.c_measure;
    gc.count_bound_holds = gc.max_count_ratio <= gc.c_count_bound * (1.0 + 1e-12);
    return gc;
}

}  // namespace lpgraph
