#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jacstab/assignment.hpp"
#include "jacstab/chip_firing.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/polarization.hpp"
#include "jacstab/report.hpp"
#include "jacstab/universal.hpp"

namespace jacstab {

using json = nlohmann::ordered_json;

// Parse failure with the JSON path of the offending node.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

namespace detail {

inline const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(path, std::string("missing '") + key + "'");
    return j.at(key);
}

inline std::string need_string(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_string()) throw ParseError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

inline long long need_integer(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) throw ParseError(path + "." + key, "expected an integer");
    return v.get<long long>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graph document.

inline json graph_to_json(const Graph& g) {
    json j;
    j["version"] = "1";
    j["vertices"] = json::array();
    for (const auto& v : g.vertices()) j["vertices"].push_back({{"id", v.id}, {"genus", v.genus}});
    j["edges"] = json::array();
    for (const auto& e : g.edges()) {
        auto ends = std::minmax(e.end_a, e.end_b);
        j["edges"].push_back({{"id", e.id}, {"ends", {ends.first, ends.second}}});
    }
    j["legs"] = json::array();
    for (const auto& l : g.legs())
        j["legs"].push_back({{"id", l.id}, {"vertex", l.vertex}, {"label", l.label}});
    return j;
}

inline Graph graph_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    if (detail::need_string(j, "version", path) != "1")
        throw ParseError(path + ".version", "unsupported document version");
    std::vector<Vertex> vertices;
    const json& jv = detail::need(j, "vertices", path);
    if (!jv.is_array()) throw ParseError(path + ".vertices", "expected an array");
    for (std::size_t i = 0; i < jv.size(); ++i) {
        const std::string p = path + ".vertices[" + std::to_string(i) + "]";
        vertices.push_back({detail::need_string(jv[i], "id", p),
                            static_cast<int>(detail::need_integer(jv[i], "genus", p))});
    }
    std::vector<Edge> edges;
    const json& je = detail::need(j, "edges", path);
    if (!je.is_array()) throw ParseError(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < je.size(); ++i) {
        const std::string p = path + ".edges[" + std::to_string(i) + "]";
        const std::string id = detail::need_string(je[i], "id", p);
        const json& ends = detail::need(je[i], "ends", p);
        if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() || !ends[1].is_string())
            throw ParseError(p + ".ends", "expected two vertex ids");
        edges.push_back({id, ends[0].get<std::string>(), ends[1].get<std::string>()});
    }
    std::vector<Leg> legs;
    if (j.contains("legs")) {
        const json& jl = j.at("legs");
        if (!jl.is_array()) throw ParseError(path + ".legs", "expected an array");
        for (std::size_t i = 0; i < jl.size(); ++i) {
            const std::string p = path + ".legs[" + std::to_string(i) + "]";
            legs.push_back({detail::need_string(jl[i], "id", p), detail::need_string(jl[i], "vertex", p),
                            static_cast<int>(detail::need_integer(jl[i], "label", p))});
        }
    }
    try {
        return Graph(std::move(vertices), std::move(edges), std::move(legs));
    } catch (const std::invalid_argument& err) {
        throw ParseError(path, err.what());
    }
}

// ---------------------------------------------------------------------------
// Multidegrees, assignments, polarizations.

inline json multidegree_to_json(const Multidegree& d) {
    json j = json::object();
    for (const auto& [v, x] : d.values) j[v] = x;
    return j;
}

inline Multidegree multidegree_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_object()) throw ParseError(path, "expected an object of vertex -> integer");
    Multidegree d;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number_integer()) throw ParseError(path + "." + k, "expected an integer");
        d.values[k] = v.get<long long>();
    }
    return d;
}

inline json assignment_to_json(const StabilityAssignment& a) {
    json j;
    j["version"] = "1";
    j["degree"] = a.degree();
    j["graph"] = graph_to_json(a.graph());
    j["entries"] = json::array();
    for (const auto& e : a.entries())
        j["entries"].push_back({{"kept_edges", e.kept_edges}, {"multidegree", multidegree_to_json(e.degree)}});
    return j;
}

struct ParsedAssignment {
    StabilityAssignment assignment;
    std::vector<std::string> duplicate_entries;  // textual duplicates in the document
};

inline ParsedAssignment assignment_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    if (detail::need_string(j, "version", path) != "1")
        throw ParseError(path + ".version", "unsupported document version");
    const long long degree = detail::need_integer(j, "degree", path);
    Graph g = graph_from_json(detail::need(j, "graph", path), path + ".graph");
    const json& entries = detail::need(j, "entries", path);
    if (!entries.is_array()) throw ParseError(path + ".entries", "expected an array");
    std::set<AssignmentEntry> set;
    std::vector<std::string> duplicates;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string p = path + ".entries[" + std::to_string(i) + "]";
        const json& kept = detail::need(entries[i], "kept_edges", p);
        if (!kept.is_array()) throw ParseError(p + ".kept_edges", "expected an array of edge ids");
        std::vector<std::string> kept_ids;
        for (const auto& k : kept) {
            if (!k.is_string()) throw ParseError(p + ".kept_edges", "expected edge ids");
            kept_ids.push_back(k.get<std::string>());
        }
        std::sort(kept_ids.begin(), kept_ids.end());
        Multidegree d = multidegree_from_json(detail::need(entries[i], "multidegree", p), p + ".multidegree");
        AssignmentEntry entry{std::move(kept_ids), std::move(d)};
        if (!set.insert(entry).second)
            duplicates.push_back(p + ": duplicate of " + show(entry.degree) + " on " +
                                 show_edges(entry.kept_edges));
    }
    try {
        return {StabilityAssignment(std::move(g), degree, std::move(set)), std::move(duplicates)};
    } catch (const std::invalid_argument& err) {
        throw ParseError(path + ".entries", err.what());
    }
}

inline json polarization_to_json(const Polarization& phi) {
    json values = json::object();
    for (const auto& [v, x] : phi.values) values[v] = rat_to_string(x);
    json j;
    j["version"] = "1";
    j["values"] = std::move(values);
    return j;
}

inline Polarization polarization_from_json(const json& j, const std::string& path = "$") {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    if (detail::need_string(j, "version", path) != "1")
        throw ParseError(path + ".version", "unsupported document version");
    const json& values = detail::need(j, "values", path);
    if (!values.is_object()) throw ParseError(path + ".values", "expected an object of vertex -> rational");
    Polarization phi;
    for (const auto& [k, v] : values.items()) {
        if (!v.is_string()) throw ParseError(path + ".values." + k, "rationals are \"p/q\" strings");
        try {
            phi.values[k] = rat_from_string(v.get<std::string>());
        } catch (const std::invalid_argument& err) {
            throw ParseError(path + ".values." + k, err.what());
        }
    }
    return phi;
}

// ---------------------------------------------------------------------------
// Stable-graph categories and universal assignments.

inline json morphism_to_json(const GraphMorphism& m) {
    json vm = json::object();
    for (const auto& [v, w] : m.vertex_map) vm[v] = w;
    return {{"vertex_map", std::move(vm)}, {"contracted_edges", m.contracted_edges}};
}

inline json category_to_json(const StableGraphCategory& cat) {
    json j;
    j["version"] = "1";
    j["genus"] = cat.genus;
    j["markings"] = cat.markings;
    j["objects"] = json::array();
    for (const auto& g : cat.objects) j["objects"].push_back(graph_to_json(g));
    j["morphisms"] = json::array();
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        for (std::size_t j2 = 0; j2 < cat.objects.size(); ++j2)
            for (const auto& m : cat.morphisms[i][j2]) {
                json entry = morphism_to_json(m);
                entry["source"] = i;
                entry["target"] = j2;
                j["morphisms"].push_back(std::move(entry));
            }
    return j;
}

inline json universal_assignment_to_json(const UniversalAssignment& u) {
    json j;
    j["version"] = "1";
    j["degree"] = u.degree;
    j["per_object"] = json::array();
    for (const auto& a : u.per_object) {
        json entries = json::array();
        for (const auto& e : a.entries())
            entries.push_back({{"kept_edges", e.kept_edges}, {"multidegree", multidegree_to_json(e.degree)}});
        j["per_object"].push_back(std::move(entries));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Canonical dumps, files, digests.

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline json load_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("$", "cannot open '" + file + "'");
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError("$", std::string("invalid JSON in '") + file + "': " + err.what());
    }
    return j;
}

inline void write_text_file(const std::string& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write '" + file + "'");
    out << text;
}

inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

// ---------------------------------------------------------------------------
// Structured command report.

struct CommandReport {
    std::string command;
    std::string inputs_digest;
    std::vector<Finding> details;  // failures; pass <=> empty
    std::vector<std::string> notes;
    json result = json::object();
    double runtime_seconds = 0.0;

    bool pass() const { return details.empty(); }

    json to_json(bool include_runtime = true) const {
        json j;
        j["command"] = command;
        j["inputs_digest"] = inputs_digest;
        j["pass"] = pass();
        j["details"] = json::array();
        for (const auto& f : details) j["details"].push_back({{"code", f.code}, {"detail", f.detail}});
        j["notes"] = notes;
        j["result"] = result;
        if (include_runtime) j["runtime_seconds"] = runtime_seconds;
        return j;
    }
};

}  // namespace jacstab
