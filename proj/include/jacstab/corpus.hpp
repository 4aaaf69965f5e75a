#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jacstab/assignment.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/universal.hpp"

namespace jacstab {

// The fixed family of test graphs shipped as JSON fixtures under corpus/.

inline Graph banana_graph(int t) {
    if (t < 1) throw std::invalid_argument("banana_graph: need t >= 1");
    std::vector<Edge> edges;
    for (int i = 1; i <= t; ++i) edges.push_back({"e" + std::to_string(i), "v1", "v2"});
    return Graph({{"v1", 0}, {"v2", 0}}, std::move(edges));
}

inline Graph theta_graph() { return banana_graph(3); }

inline Graph dumbbell_graph() {
    return Graph({{"v1", 0}, {"v2", 0}}, {{"e1", "v1", "v2"}, {"e2", "v1", "v1"}, {"e3", "v2", "v2"}});
}

inline Graph complete4_graph() {
    return Graph({{"v1", 0}, {"v2", 0}, {"v3", 0}, {"v4", 0}},
                 {{"e12", "v1", "v2"},
                  {"e13", "v1", "v3"},
                  {"e14", "v1", "v4"},
                  {"e23", "v2", "v3"},
                  {"e24", "v2", "v4"},
                  {"e34", "v3", "v4"}});
}

inline Graph path3_graph() {
    return Graph({{"v1", 1}, {"v2", 1}, {"v3", 1}}, {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}});
}

// The seven stable genus-2 unmarked graphs, with fixed ids.
inline std::vector<std::pair<std::string, Graph>> genus2_objects() {
    std::vector<std::pair<std::string, Graph>> out;
    out.push_back({"g2_smooth", Graph({{"v1", 2}}, {})});
    out.push_back({"g2_oneloop", Graph({{"v1", 1}}, {{"e1", "v1", "v1"}})});
    out.push_back({"g2_twoloops", Graph({{"v1", 0}}, {{"e1", "v1", "v1"}, {"e2", "v1", "v1"}})});
    out.push_back({"g2_vine11", Graph({{"v1", 1}, {"v2", 1}}, {{"e1", "v1", "v2"}})});
    out.push_back({"g2_loopbridge", Graph({{"v1", 1}, {"v2", 0}}, {{"e1", "v1", "v2"}, {"e2", "v2", "v2"}})});
    out.push_back({"g2_theta", theta_graph()});
    out.push_back({"g2_dumbbell", dumbbell_graph()});
    return out;
}

inline std::vector<std::pair<std::string, Graph>> corpus_graphs() {
    std::vector<std::pair<std::string, Graph>> out;
    out.push_back({"theta", theta_graph()});
    for (int t = 1; t <= 5; ++t) out.push_back({"banana" + std::to_string(t), banana_graph(t)});
    out.push_back({"dumbbell", dumbbell_graph()});
    out.push_back({"k4", complete4_graph()});
    out.push_back({"path3", path3_graph()});
    out.push_back({"symtri2", symmetric_trivalent_graph(2).graph});
    out.push_back({"symtri3", symmetric_trivalent_graph(3).graph});
    for (auto& [name, g] : genus2_objects()) out.push_back({name, std::move(g)});
    return out;
}

// The two-components-two-nodes assignment with the lower tree value (0,-1):
// the standard first example of a degree-0 stability assignment.
inline StabilityAssignment vine_lambda0_assignment() {
    Graph g = banana_graph(2);
    std::set<AssignmentEntry> entries;
    entries.insert({{"e1", "e2"}, make_multidegree(g, {0, 0})});
    entries.insert({{"e1", "e2"}, make_multidegree(g, {1, -1})});
    entries.insert({{"e1"}, make_multidegree(g, {0, -1})});
    entries.insert({{"e2"}, make_multidegree(g, {0, -1})});
    return StabilityAssignment(std::move(g), 0, std::move(entries));
}

}  // namespace jacstab
