#pragma once

#include "lpgraph/generators.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpgraph {

using Json = nlohmann::json;

inline constexpr const char* kToolkitName = "lpgraph";
inline constexpr const char* kToolkitVersion = "0.1.0";

/// JSON number rounded to the report precision.
inline double jnum(double x) { return round12(x); }

/// Canonical graph JSON: vertices sorted by id, each undirected edge once
/// with u < v. The same graph always serializes to the same bytes.
inline Json graph_to_json(const WeightedGraph& g) {
    Json jv = Json::array();
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        jv.push_back({{"id", x}, {"m", g.m()[x]}, {"c", g.c()[x]}});
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    Json je = Json::array();
    for (const Edge& e : edges) je.push_back({{"u", e.u}, {"v", e.v}, {"b", e.b}});
    return Json{{"vertices", jv}, {"edges", je}};
}

inline WeightedGraph graph_from_json(const Json& j) {
    if (!j.contains("vertices") || !j.contains("edges"))
        throw std::invalid_argument("graph json: missing 'vertices' or 'edges'");
    const Json& jv = j.at("vertices");
    const Index n = static_cast<Index>(jv.size());
    Vectord m(n), c(n);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::size_t i = 0; i < jv.size(); ++i) {
        const Json& rec = jv[i];
        const std::string where = "vertices[" + std::to_string(i) + "]";
        if (!rec.contains("id")) throw std::invalid_argument(where + ": missing id");
        const std::int64_t id = rec.at("id").get<std::int64_t>();
        if (id < 0 || id >= n)
            throw std::invalid_argument(where + ": id " + std::to_string(id) +
                                        " not dense in [0," + std::to_string(n) + ")");
        if (seen[static_cast<std::size_t>(id)])
            throw std::invalid_argument(where + ": duplicate id " + std::to_string(id));
        seen[static_cast<std::size_t>(id)] = true;
        m[id] = rec.value("m", 1.0);
        c[id] = rec.value("c", 0.0);
        if (!(m[id] > 0.0))
            throw std::invalid_argument(where + ": m must be positive");
        if (c[id] < 0.0) throw std::invalid_argument(where + ": c must be nonnegative");
    }
    std::vector<Edge> edges;
    std::set<std::pair<VertexId, VertexId>> keys;
    const Json& je = j.at("edges");
    for (std::size_t i = 0; i < je.size(); ++i) {
        const Json& rec = je[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        Edge e;
        e.u = rec.at("u").get<VertexId>();
        e.v = rec.at("v").get<VertexId>();
        e.b = rec.value("b", 1.0);
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument(where + ": endpoint out of range");
        if (e.u == e.v)
            throw std::invalid_argument(where + ": self-loop at " + std::to_string(e.u));
        if (!(e.b > 0.0)) throw std::invalid_argument(where + ": b must be positive");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!keys.insert({e.u, e.v}).second)
            throw std::invalid_argument(where + ": duplicate edge (" + std::to_string(e.u) +
                                        "," + std::to_string(e.v) + ")");
        edges.push_back(e);
    }
    WeightedGraph g(n, std::move(edges), std::move(m), std::move(c));
    const auto violations = validate(g);
    if (!violations.empty())
        throw std::invalid_argument("graph json: " + violations.front());
    return g;
}

inline Json tessellation_to_json(const Tessellation& t) {
    Json j = graph_to_json(t.graph);
    Json faces = Json::array();
    for (const auto& f : t.faces) faces.push_back(f);
    Json flags = Json::array();
    for (std::size_t i = 0; i < t.boundary_face.size(); ++i)
        if (t.boundary_face[i]) flags.push_back(i);
    j["faces"] = std::move(faces);
    j["boundaryFaces"] = std::move(flags);
    return j;
}

inline Tessellation tessellation_from_json(const Json& j) {
    Tessellation t;
    t.graph = graph_from_json(j);
    if (!j.contains("faces")) throw std::invalid_argument("tessellation json: missing 'faces'");
    for (std::size_t i = 0; i < j.at("faces").size(); ++i) {
        std::vector<VertexId> f = j.at("faces")[i].get<std::vector<VertexId>>();
        if (f.size() < 3)
            throw std::invalid_argument("faces[" + std::to_string(i) + "]: degree < 3");
        for (VertexId v : f)
            if (v < 0 || v >= t.graph.vertex_count())
                throw std::invalid_argument("faces[" + std::to_string(i) +
                                            "]: vertex out of range");
        t.faces.push_back(std::move(f));
    }
    t.boundary_face.assign(t.faces.size(), false);
    if (j.contains("boundaryFaces"))
        for (const auto& idx : j.at("boundaryFaces"))
            t.boundary_face.at(idx.get<std::size_t>()) = true;
    return t;
}

/// Family spec mini-grammar: kind:key=val,key=val. Errors carry the exact
/// position of the offending token.
struct FamilySpec {
    FamilyPtr family;
    int radius = -1;  // R from the spec string, when present
    std::string text;
};

namespace detail {

[[noreturn]] inline void spec_error(const std::string& text, std::size_t pos,
                                    const std::string& what) {
    throw std::invalid_argument("family spec '" + text + "': " + what + " at position " +
                                std::to_string(pos));
}

}  // namespace detail

inline FamilySpec parse_family_spec(const std::string& text) {
    FamilySpec spec;
    spec.text = text;
    const std::size_t colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::map<std::string, int> kv;
    if (colon != std::string::npos) {
        std::size_t at = colon + 1;
        while (at < text.size()) {
            std::size_t stop = text.find(',', at);
            if (stop == std::string::npos) stop = text.size();
            const std::string item = text.substr(at, stop - at);
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                detail::spec_error(text, at, "expected key=value");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            try {
                std::size_t used = 0;
                const int parsed = std::stoi(val, &used);
                if (used != val.size()) throw std::invalid_argument("trailing characters");
                if (!kv.emplace(key, parsed).second)
                    detail::spec_error(text, at, "duplicate key '" + key + "'");
            } catch (const std::invalid_argument&) {
                detail::spec_error(text, at + eq + 1, "expected integer value for '" + key + "'");
            } catch (const std::out_of_range&) {
                detail::spec_error(text, at + eq + 1, "integer out of range for '" + key + "'");
            }
            at = stop + 1;
        }
    }
    auto require = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            detail::spec_error(text, text.size(), std::string("missing key '") + key + "'");
        const int v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_radius = [&]() {
        const auto it = kv.find("R");
        if (it != kv.end()) {
            spec.radius = it->second;
            kv.erase(it);
        }
    };

    if (kind == "line") {
        take_radius();
        spec.family = line_example_family();
    } else if (kind == "tree") {
        const int d = require("d");
        take_radius();
        spec.family = regular_tree_family(d);
    } else if (kind == "lattice") {
        const int dim = require("dim");
        take_radius();
        spec.family = lattice_family(dim);
    } else if (kind == "rbtree") {
        take_radius();
        spec.family = rapidly_branching_tree_family();
    } else if (kind == "cycle") {
        spec.family = cycle_family(require("n"));
    } else if (kind == "path") {
        spec.family = path_family(require("n"));
    } else if (kind == "complete") {
        spec.family = complete_family(require("n"));
    } else if (kind == "edge") {
        spec.family = single_edge_family();
    } else if (kind == "tess") {
        const int p = require("p");
        const int q = require("q");
        take_radius();
        spec.family = from_tessellation(p, q);
    } else {
        detail::spec_error(text, 0, "unknown family '" + kind + "'");
    }
    if (!kv.empty())
        detail::spec_error(text, text.find(kv.begin()->first + "="),
                           "unknown key '" + kv.begin()->first + "'");
    return spec;
}

inline MeasureChoice parse_measure(const std::string& s) {
    if (s == "given") return MeasureChoice::Given;
    if (s == "m1") return MeasureChoice::UnitMeasure;
    if (s == "mn") return MeasureChoice::NormalizingMeasure;
    throw std::invalid_argument("unknown measure '" + s + "' (given | m1 | mn)");
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json load_json_file(const std::string& path) {
    return Json::parse(read_text_file(path));
}

/// CSV with a header row; cells are preformatted strings.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < header.size(); ++i)
        ss << header[i] << (i + 1 < header.size() ? "," : "");
    ss << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            ss << row[i] << (i + 1 < row.size() ? "," : "");
        ss << "\n";
    }
    write_text_file(path, ss.str());
}

inline std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Report envelope: toolkit version, the full config echo, results, and the
/// module.op provenance of each headline number.
inline Json make_report(const std::string& command, const Json& config, const Json& results,
                        const Json& provenance) {
    return Json{{"toolkit", {{"name", kToolkitName}, {"version", kToolkitVersion}}},
                {"command", command},
                {"config", config},
                {"results", results},
                {"provenance", provenance}};
}

inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace lpgraph
