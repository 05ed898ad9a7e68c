// Command-line front end: ingest graphs or family specs, run the analyses,
// emit deterministic JSON reports and optional CSV tables.
//
// Exit codes: 0 success, 1 invalid input, 2 analysis found bound violations.

#include "lpgraph/bounds.hpp"
#include "lpgraph/cheeger.hpp"
#include "lpgraph/curvature_report.hpp"
#include "lpgraph/growth.hpp"
#include "lpgraph/io.hpp"
#include "lpgraph/spectra.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace lpgraph;

struct InputOptions {
    std::string input;        // family spec or path to graph json
    std::string measure = "given";
    int radius = -1;
    int buffer = -1;
    std::string out;          // report path; stdout when empty
    std::string csv;          // csv path prefix
};

void add_input_options(CLI::App* cmd, InputOptions& opt, bool with_radius = true) {
    cmd->add_option("input", opt.input,
                    "family spec (e.g. tree:d=3,R=10) or graph json path")
        ->required();
    cmd->add_option("--measure", opt.measure, "vertex measure: given | m1 | mn");
    if (with_radius) {
        cmd->add_option("-R,--radius", opt.radius, "window radius");
        cmd->add_option("--buffer", opt.buffer, "extra window radius for distances");
    }
    cmd->add_option("-o,--out", opt.out, "write the JSON report to this path");
    cmd->add_option("--csv", opt.csv, "write CSV tables with this path prefix");
}

bool looks_like_path(const std::string& s) {
    return s.find(".json") != std::string::npos || s.find('/') != std::string::npos;
}

struct ResolvedInput {
    FamilyPtr family;
    int radius = 0;
    std::string description;
};

ResolvedInput resolve_input(const InputOptions& opt, int default_radius) {
    ResolvedInput r;
    if (looks_like_path(opt.input)) {
        const WeightedGraph g = graph_from_json(load_json_file(opt.input));
        r.family = std::make_shared<FixedGraphFamily>(g, 0, "file");
        r.radius = opt.radius >= 0 ? opt.radius : static_cast<int>(g.vertex_count());
        r.description = opt.input;
    } else {
        const FamilySpec spec = parse_family_spec(opt.input);
        r.family = spec.family;
        r.radius = opt.radius >= 0 ? opt.radius : (spec.radius >= 0 ? spec.radius : default_radius);
        r.description = opt.input;
    }
    return r;
}

Json config_json(const InputOptions& opt, const ResolvedInput& in, int buffer) {
    return Json{{"input", opt.input},
                {"measure", opt.measure},
                {"radius", in.radius},
                {"buffer", buffer}};
}

void emit(const InputOptions& opt, const Json& report) {
    const std::string text = dump_report(report);
    if (opt.out.empty())
        std::cout << text;
    else
        write_text_file(opt.out, text);
}

int cmd_info(const InputOptions& opt, const std::string& echo_path) {
    const ResolvedInput in = resolve_input(opt, 6);
    const FamilyWindow w =
        with_measure(in.family->materialize(in.radius), parse_measure(opt.measure));
    const WeightedGraph& g = w.graph;
    const auto violations = validate(g);
    const Vectord n = normalizing_measure(g);
    const Vectori deg = combinatorial_degree(g);
    const auto bp = bipartition(g);

    Json res;
    res["vertices"] = g.vertex_count();
    res["edges"] = g.edges().size();
    res["valid"] = violations.empty();
    res["violations"] = violations;
    res["boundedGeometryRatio"] = jnum(bounded_geometry_ratio(g));
    res["minDegree"] = deg.minCoeff();
    res["maxDegree"] = deg.maxCoeff();
    res["minNormalizingMeasure"] = jnum(n.minCoeff());
    res["maxNormalizingMeasure"] = jnum(n.maxCoeff());
    res["bipartite"] = bp.has_value();
    if (bp) res["part1Size"] = bp->part1.size();

    if (!echo_path.empty()) write_text_file(echo_path, graph_to_json(g).dump(2) + "\n");

    Json prov{{"boundedGeometryRatio", "graph-core.bounded_geometry_ratio"},
              {"bipartite", "graph-core.bipartition"},
              {"valid", "graph-core.validate"}};
    emit(opt, make_report("info", config_json(opt, in, 0), res, prov));
    return 0;
}

int cmd_generate(const InputOptions& opt, const std::string& to) {
    const ResolvedInput in = resolve_input(opt, 4);
    const FamilyWindow w =
        with_measure(in.family->materialize(in.radius), parse_measure(opt.measure));
    const Json j = graph_to_json(w.graph);
    if (to.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_text_file(to, j.dump(2) + "\n");
    return 0;
}

int cmd_metric(const InputOptions& opt, const std::string& metric_name) {
    const ResolvedInput in = resolve_input(opt, 8);
    const FamilyWindow w =
        with_measure(in.family->materialize(in.radius), parse_measure(opt.measure));

    PseudoMetric pm;
    if (metric_name == "natural")
        pm = natural_metric(w.graph);
    else if (metric_name == "default-intrinsic" || metric_name == "d1")
        pm = path_metric(w.graph, default_intrinsic_weights(w.graph));
    else
        throw std::invalid_argument("unknown metric '" + metric_name + "'");

    const IntrinsicReport rep = verify_intrinsic(w.graph, pm);
    Json res;
    res["metric"] = metric_name;
    res["jumpSize"] = jnum(pm.jump_size);
    res["intrinsic"] = rep.intrinsic;
    res["minSlack"] = jnum(rep.min_slack);
    res["worstVertex"] = rep.worst_vertex;
    const auto b1 = ball(pm, w.root, 1.0);
    res["unitBallSizeAtRoot"] = b1.size();

    Json prov{{"intrinsic", "metric.verify_intrinsic"},
              {"jumpSize", "metric.path_metric"}};
    emit(opt, make_report("metric", config_json(opt, in, 0), res, prov));
    return 0;
}

int cmd_growth(const InputOptions& opt, const std::string& metric_name, double eps) {
    const ResolvedInput in = resolve_input(opt, 8);
    const int buffer = opt.buffer >= 0 ? opt.buffer : in.radius;
    const MetricChoice mc = metric_name == "natural" ? MetricChoice::Natural
                                                     : MetricChoice::DefaultIntrinsic;
    const MeasureChoice meas = parse_measure(opt.measure);

    const GrowthProfile prof =
        volume_profile(*in.family, mc, 0, in.radius, buffer, meas);
    const SubexpCertificate cert =
        subexp_certificate(*in.family, mc, eps, in.radius, buffer, meas);

    Json res;
    res["expRate"] = jnum(prof.exp_rate);
    res["polyExponent"] = jnum(prof.poly_exponent);
    res["cEps"] = jnum(cert.c_eps);
    res["eps"] = jnum(eps);
    res["argmaxRadius"] = jnum(cert.argmax_radius);
    res["verdict"] = cert.plateau ? "subexponential evidence" : "fails at eps";
    res["centers"] = cert.centers.size();
    Json vols = Json::array();
    for (Index r = 0; r < prof.volumes.size(); ++r)
        vols.push_back({{"r", prof.radii[r]},
                        {"volume", jnum(prof.volumes[r])},
                        {"count", prof.counts[r]}});
    res["profile"] = vols;

    if (!opt.csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (Index r = 0; r < prof.volumes.size(); ++r)
            rows.push_back({std::to_string(prof.center_label), csv_num(prof.radii[r]),
                            csv_num(prof.volumes[r]), std::to_string(prof.counts[r])});
        write_csv(opt.csv + "_growth.csv", {"center", "r", "volume", "count"}, rows);
    }
    Json prov{{"expRate", "growth.volume_profile"},
              {"cEps", "growth.subexp_certificate"},
              {"verdict", "growth.subexp_certificate"}};
    emit(opt, make_report("growth", config_json(opt, in, buffer), res, prov));
    return 0;
}

int cmd_spectra(const InputOptions& opt) {
    const ResolvedInput in = resolve_input(opt, 8);
    const MeasureChoice meas = parse_measure(opt.measure);

    std::vector<int> radii;
    for (int r = std::max(1, in.radius / 4); r <= in.radius; ++r) radii.push_back(r);
    const ExhaustionSeries series = bottom_exhaustion(*in.family, radii, meas);
    const LaplacianMatrix L = assemble(truncate(*in.family, in.radius, 0, meas));
    const auto grid = default_t_grid();
    const double l1 = p_growth_bound_of(L, 1.0, grid);
    const double l2 = p_growth_bound_of(L, 2.0, grid);

    Json res;
    res["lambda0"] = jnum(series.lambda0.back());
    res["lambda0Extrapolated"] = jnum(series.extrapolated);
    res["lambdaHat1"] = jnum(l1);
    res["lambdaHat2"] = jnum(l2);
    if (L.dense) {
        Json evs = Json::array();
        for (Index i = 0; i < L.eigenvalues.size(); ++i) evs.push_back(jnum(L.eigenvalues[i]));
        res["eigenvalues"] = evs;
        res["diskCheck"] = disk_check(L.eigenvalues) ? "pass" : "fail";
        const FamilyWindow w = with_measure(in.family->materialize(in.radius), meas);
        if (const auto bp = bipartition(w.graph)) {
            const auto sym = bipartite_symmetry_check(L.eigenvalues);
            res["symmetry"] = sym.pass ? "pass" : "fail";
            res["symmetryDefect"] = jnum(sym.max_defect);
        } else {
            res["symmetry"] = "not-bipartite";
        }
    }
    if (!opt.csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < series.radii.size(); ++i) {
            const LaplacianMatrix Lr =
                assemble(truncate(*in.family, series.radii[i], 0, meas));
            rows.push_back({std::to_string(series.radii[i]), csv_num(series.lambda0[i]),
                            csv_num(p_growth_bound_of(Lr, 1.0, grid)),
                            csv_num(p_growth_bound_of(Lr, 2.0, grid))});
        }
        write_csv(opt.csv + "_spectra.csv", {"R", "lambda0", "lambdaHat1", "lambdaHat2"}, rows);
    }
    Json prov{{"lambda0", "spectra.bottom_exhaustion"},
              {"lambdaHat1", "spectra.p_growth_bound"},
              {"lambdaHat2", "spectra.p_growth_bound"},
              {"symmetry", "spectra.bipartite_symmetry_check"},
              {"diskCheck", "spectra.disk_check"}};
    emit(opt, make_report("spectra", config_json(opt, in, 0), res, prov));
    return 0;
}

int cmd_cheeger(const InputOptions& opt, int k_radius) {
    const ResolvedInput in = resolve_input(opt, 6);
    std::vector<int> radii;
    for (int r = 1; r <= in.radius; ++r) radii.push_back(r);
    const CheegerSeries series = cheeger_family(*in.family, radii);

    Json res;
    res["betaSeries"] = Json::array();
    for (std::size_t i = 0; i < series.radii.size(); ++i)
        res["betaSeries"].push_back({{"R", series.radii[i]}, {"beta", jnum(series.beta[i])}});
    res["limitEstimate"] = jnum(series.limit_estimate);

    const FamilyWindow w = in.family->materialize(in.radius);
    const auto ballv = detail::ball_vertices(w, in.radius);
    if (static_cast<int>(ballv.size()) <= kExhaustiveCap) {
        const CheegerResult ex = cheeger_exhaustive(*in.family, in.radius);
        res["exhaustive"] = {{"value", jnum(ex.value)}, {"witness", ex.witness_labels}};
        const auto ineq = cheeger_inequality_check(*in.family, in.radius);
        res["inequality"] = {{"lambda0", jnum(ineq.lambda0)},
                             {"alpha", jnum(ineq.alpha)},
                             {"pass", ineq.pass}};
    }
    const CheegerResult sweep = cheeger_sweep(*in.family, in.radius);
    res["sweep"] = {{"value", jnum(sweep.value)}, {"witnessSize", sweep.witness.size()}};
    if (k_radius > 0) {
        const CheegerResult inf = cheeger_at_infinity(*in.family, k_radius, in.radius);
        res["atInfinity"] = {{"value", jnum(inf.value)},
                             {"kRadius", k_radius},
                             {"mode", inf.mode}};
    }
    if (!opt.csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < series.radii.size(); ++i)
            rows.push_back({std::to_string(series.radii[i]), csv_num(series.beta[i])});
        write_csv(opt.csv + "_cheeger.csv", {"R", "beta"}, rows);
    }
    Json prov{{"betaSeries", "cheeger.cheeger_family"},
              {"exhaustive", "cheeger.cheeger_exhaustive"},
              {"sweep", "cheeger.cheeger_sweep"},
              {"inequality", "cheeger.cheeger_inequality_check"},
              {"atInfinity", "cheeger.cheeger_at_infinity"}};
    emit(opt, make_report("cheeger", config_json(opt, in, 0), res, prov));
    return 0;
}

int cmd_heatcheck(const InputOptions& opt, double eps, double beta, bool with_mc,
                  std::uint64_t seed) {
    const ResolvedInput in = resolve_input(opt, 8);
    const int buffer = opt.buffer >= 0 ? opt.buffer : in.radius;
    const MeasureChoice meas = parse_measure(opt.measure);
    const std::vector<double> t_grid{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};

    const BoundCheckReport heat = heat_bound_check(*in.family, in.radius, buffer, t_grid, meas);
    const BoundCheckReport betarep =
        heat_bound_beta_check(*in.family, in.radius, buffer, beta, t_grid, meas);
    const BoundCheckReport resv = resolvent_bound_check(*in.family, in.radius, buffer, eps, meas);

    auto violations_json = [](const BoundCheckReport& r) {
        Json out = Json::array();
        for (const auto& v : r.violations)
            out.push_back({{"x", v.x}, {"y", v.y}, {"t", v.t}, {"lhs", jnum(v.lhs)},
                           {"rhs", jnum(v.rhs)}});
        return out;
    };
    Json res;
    res["heatBound"] = {{"pairsChecked", heat.pairs_checked},
                        {"maxRatio", jnum(heat.max_ratio)},
                        {"violations", violations_json(heat)}};
    res["heatBoundBeta"] = {{"beta", jnum(beta)},
                            {"pairsChecked", betarep.pairs_checked},
                            {"maxRatio", jnum(betarep.max_ratio)},
                            {"violations", violations_json(betarep)}};
    res["resolventBound"] = {{"eps", jnum(eps)},
                             {"pairsChecked", resv.pairs_checked},
                             {"maxRatio", jnum(resv.max_ratio)},
                             {"violations", violations_json(resv)}};
    if (with_mc) {
        const Truncation tr = truncate(*in.family, in.radius, 0, meas);
        const LaplacianMatrix L = assemble(tr);
        const double t = 1.0;
        const VertexId x = tr.root >= 0 ? tr.root : 0;
        const McEstimate mc = feynman_kac_mc(tr, t, x, x, 100000, seed);
        Json jm{{"t", t},
                {"x", tr.labels[x]},
                {"estimate", jnum(mc.estimate)},
                {"stderr", jnum(mc.stderr_)},
                {"samples", mc.samples},
                {"seed", seed}};
        if (L.dense) jm["matrix"] = jnum(heat_kernel(L, t).k(x, x));
        res["feynmanKac"] = jm;
    }
    Json prov{{"heatBound", "operator.heat_bound_check"},
              {"heatBoundBeta", "operator.heat_bound_beta_check"},
              {"resolventBound", "operator.resolvent_bound_check"},
              {"feynmanKac", "operator.feynman_kac_mc"}};
    emit(opt, make_report("heatcheck", config_json(opt, in, buffer), res, prov));
    const bool found = !heat.violations.empty() || !betarep.violations.empty() ||
                       !resv.violations.empty();
    return found ? 2 : 0;
}

int cmd_curvature(const InputOptions& opt) {
    const ResolvedInput in = resolve_input(opt, 6);
    Tessellation t;
    if (looks_like_path(opt.input)) {
        t = tessellation_from_json(load_json_file(opt.input));
    } else {
        const auto* tf = dynamic_cast<const TessellationFamily*>(in.family.get());
        if (!tf)
            throw std::invalid_argument("curvature: input must be a tess family or a "
                                        "tessellation json");
        t = tf->patch(in.radius);
    }
    const CurvatureReport rep = curvature_report(t);
    const PseudoMetric d1 = d1_metric(t);
    const IntrinsicReport intr = verify_intrinsic(t.graph, d1);

    Json res;
    res["class"] = rep.curvature_class;
    res["interiorCount"] = rep.interior_count;
    res["minKappa"] = jnum(rep.min_kappa);
    res["maxKappa"] = jnum(rep.max_kappa);
    res["totalAbsKappa"] = jnum(rep.total_abs_kappa);
    if (rep.curvature_class == "nonnegative") {
        res["growthExponentDn"] = jnum(rep.growth_exponent_dn);
        res["growthExponentD1"] = jnum(rep.growth_exponent_d1);
    } else if (rep.curvature_class == "negative") {
        res["higuchiBoundHolds"] = rep.higuchi_bound_holds;
        res["expRate"] = jnum(rep.exp_rate);
        res["lambda0"] = jnum(rep.lambda0);
        res["lambda0Radius"] = rep.lambda0_radius;
    }
    res["d1Intrinsic"] = intr.intrinsic;
    res["d1JumpSize"] = jnum(d1.jump_size);

    Json prov{{"class", "tessellation.curvature_report"},
              {"minKappa", "tessellation.vertex_curvature"},
              {"d1Intrinsic", "tessellation.d1_metric"}};
    emit(opt, make_report("curvature", config_json(opt, in, 0), res, prov));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-graph spectral toolkit"};
    app.require_subcommand(1);

    InputOptions info_opt, gen_opt, metric_opt, growth_opt, spectra_opt, cheeger_opt,
        heat_opt, curv_opt;
    std::string echo_path, gen_to, metric_name = "default-intrinsic";
    std::string growth_metric = "natural";
    double growth_eps = 0.5, heat_eps = 1.0, heat_beta = 1.0;
    int cheeger_k = 0;
    bool heat_mc = false;
    std::uint64_t seed = 1;

    auto* info = app.add_subcommand("info", "graph summary and validation");
    add_input_options(info, info_opt);
    info->add_option("--echo-graph", echo_path, "re-serialize the canonical graph json here");

    auto* gen = app.add_subcommand("generate", "materialize a family window as graph json");
    add_input_options(gen, gen_opt);
    gen->add_option("--to", gen_to, "output path for the graph json");

    auto* met = app.add_subcommand("metric", "metric construction and intrinsic verification");
    add_input_options(met, metric_opt);
    met->add_option("--metric", metric_name, "natural | default-intrinsic | d1");

    auto* gro = app.add_subcommand("growth", "volume profiles and growth certificates");
    add_input_options(gro, growth_opt);
    gro->add_option("--metric", growth_metric, "natural | default-intrinsic");
    gro->add_option("--eps", growth_eps, "certificate rate");

    auto* spe = app.add_subcommand("spectra", "eigenvalues, exhaustion and p-bounds");
    add_input_options(spe, spectra_opt);

    auto* che = app.add_subcommand("cheeger", "isoperimetric constants");
    add_input_options(che, cheeger_opt);
    che->add_option("--k-radius", cheeger_k, "inner radius for the constant at infinity");

    auto* hea = app.add_subcommand("heatcheck", "heat kernel and resolvent bound checks");
    add_input_options(hea, heat_opt);
    hea->add_option("--eps", heat_eps, "resolvent decay rate");
    hea->add_option("--beta", heat_beta, "linear-decay heat bound rate");
    hea->add_flag("--mc", heat_mc, "run the Monte Carlo kernel cross-check");
    hea->add_option("--seed", seed, "Monte Carlo seed");

    auto* cur = app.add_subcommand("curvature", "tessellation curvature report");
    add_input_options(cur, curv_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed()) return cmd_info(info_opt, echo_path);
        if (gen->parsed()) return cmd_generate(gen_opt, gen_to);
        if (met->parsed()) return cmd_metric(metric_opt, metric_name);
        if (gro->parsed()) return cmd_growth(growth_opt, growth_metric, growth_eps);
        if (spe->parsed()) return cmd_spectra(spectra_opt);
        if (che->parsed()) return cmd_cheeger(cheeger_opt, cheeger_k);
        if (hea->parsed()) return cmd_heatcheck(heat_opt, heat_eps, heat_beta, heat_mc, seed);
        if (cur->parsed()) return cmd_curvature(curv_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
