#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jacstab/assignment.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/graph_ops.hpp"
#include "jacstab/polarization.hpp"
#include "jacstab/report.hpp"

namespace jacstab {

// A skeleton of the category of stable genus-g graphs with n legs: objects
// up to isomorphism, morphisms = edge contractions composed with
// relabelling isomorphisms (automorphisms included).
struct StableGraphCategory {
    int genus = 0;
    int markings = 0;
    std::vector<Graph> objects;
    // morphisms[i][j] = all morphisms objects[i] -> objects[j]
    std::vector<std::vector<std::vector<GraphMorphism>>> morphisms;
};

namespace detail {

inline bool vertex_stable(int genus, int valence, int legs) {
    return 2 * genus - 2 + valence + legs > 0;
}

inline std::string padded_vertex_id(std::size_t i, std::size_t total) {
    std::string num = std::to_string(i + 1);
    if (total > 9) num = std::string(2 - std::min<std::size_t>(2, num.size()), '0') + num;
    return "v" + num;
}

}  // namespace detail

inline StableGraphCategory enumerate_stable_graphs(int genus, int markings) {
    if (genus < 0 || markings < 0 || 2 * genus - 2 + markings <= 0)
        throw std::invalid_argument("enumerate_stable_graphs: need 2g-2+n > 0");
    if (genus > 4 || markings > 4)
        throw std::invalid_argument("enumerate_stable_graphs: supported range is g <= 4, n <= 4");

    StableGraphCategory cat;
    cat.genus = genus;
    cat.markings = markings;

    using Fingerprint = std::vector<std::tuple<int, int, int, std::vector<int>>>;
    auto fingerprint = [](const Graph& g) {
        Fingerprint fp;
        for (const auto& v : g.vertices()) {
            std::vector<int> labels;
            for (const auto& l : g.legs())
                if (l.vertex == v.id) labels.push_back(l.label);
            std::sort(labels.begin(), labels.end());
            int loops = 0;
            for (const auto& e : g.edges())
                if (e.end_a == v.id && e.end_b == v.id) ++loops;
            fp.push_back({v.genus, g.valence(v.id), loops, labels});
        }
        std::sort(fp.begin(), fp.end());
        return fp;
    };
    std::vector<Fingerprint> seen;

    const int max_vertices = 2 * genus - 2 + markings;
    for (int k = 1; k <= max_vertices; ++k) {
        std::vector<std::string> vids;
        for (int i = 0; i < k; ++i) vids.push_back(detail::padded_vertex_id(i, k));
        // Vertex genera, non-increasing (any class has such a labelling).
        std::vector<int> gv(k, 0);
        std::function<void(int, int)> genera = [&](int i, int remaining) {
            if (i == k) {
                const int b1 = remaining;
                const int edge_total = b1 + k - 1;
                // Slots: unordered vertex pairs, then loops.
                std::vector<std::pair<int, int>> slots;
                for (int a = 0; a < k; ++a)
                    for (int b = a + 1; b < k; ++b) slots.push_back({a, b});
                for (int a = 0; a < k; ++a) slots.push_back({a, a});
                const int cap = 2 * genus + 1;

                // Leg anchorings: label -> vertex.
                std::vector<int> anchor(markings, 0);
                std::function<void(int)> legs_rec = [&](int li) {
                    if (li == markings) {
                        std::vector<int> counts(slots.size(), 0);
                        std::function<void(std::size_t, int)> edges_rec = [&](std::size_t si, int left) {
                            if (si == slots.size()) {
                                if (left != 0) return;
                                std::vector<Vertex> vertices;
                                for (int i2 = 0; i2 < k; ++i2) vertices.push_back({vids[i2], gv[i2]});
                                std::vector<Edge> edges;
                                for (std::size_t s = 0; s < slots.size(); ++s)
                                    for (int c = 0; c < counts[s]; ++c) {
                                        std::string eid = "e" + std::to_string(edges.size() + 1);
                                        edges.push_back({eid, vids[slots[s].first], vids[slots[s].second]});
                                    }
                                std::vector<Leg> legs;
                                for (int l = 0; l < markings; ++l)
                                    legs.push_back({"p" + std::to_string(l + 1), vids[anchor[l]], l + 1});
                                Graph cand(vertices, edges, legs);
                                if (!is_connected(cand)) return;
                                for (const auto& v : cand.vertices())
                                    if (!detail::vertex_stable(v.genus, cand.valence(v.id),
                                                               cand.leg_count(v.id)))
                                        return;
                                Fingerprint fp = fingerprint(cand);
                                for (std::size_t o = 0; o < cat.objects.size(); ++o)
                                    if (seen[o] == fp && isomorphic(cand, cat.objects[o])) return;
                                seen.push_back(std::move(fp));
                                cat.objects.push_back(std::move(cand));
                                return;
                            }
                            // Feasibility: remaining slots must be able to absorb `left`.
                            const int room = cap * static_cast<int>(slots.size() - si);
                            if (left > room) return;
                            for (int c = 0; c <= std::min(cap, left); ++c) {
                                counts[si] = c;
                                edges_rec(si + 1, left - c);
                            }
                            counts[si] = 0;
                        };
                        edges_rec(0, edge_total);
                        return;
                    }
                    for (int v = 0; v < k; ++v) {
                        anchor[li] = v;
                        legs_rec(li + 1);
                    }
                };
                legs_rec(0);
                return;
            }
            const int bound = (i == 0) ? remaining : std::min(remaining, gv[i - 1]);
            for (int x = bound; x >= 0; --x) {
                gv[i] = x;
                genera(i + 1, remaining - x);
            }
        };
        genera(0, genus);
    }

    // Morphisms: contract every edge subset, then relabel onto an object.
    const std::size_t n_obj = cat.objects.size();
    cat.morphisms.assign(n_obj, std::vector<std::vector<GraphMorphism>>(n_obj));
    for (std::size_t i = 0; i < n_obj; ++i) {
        const Graph& src = cat.objects[i];
        const auto ids = src.edge_ids();
        const std::size_t m = ids.size();
        for (std::size_t bits = 0; bits < (std::size_t(1) << m); ++bits) {
            std::set<std::string> subset;
            for (std::size_t b = 0; b < m; ++b)
                if (bits & (std::size_t(1) << b)) subset.insert(ids[b]);
            ContractionResult con = contract(src, subset);
            for (std::size_t j = 0; j < n_obj; ++j) {
                for (const auto& iso : isomorphisms(con.graph, cat.objects[j]))
                    cat.morphisms[i][j].push_back(compose(con.morphism, iso));
            }
        }
        for (auto& bucket : cat.morphisms[i]) {
            std::sort(bucket.begin(), bucket.end());
            bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
        }
    }
    return cat;
}

// The loopless two-vertex objects T, the subset T' whose automorphisms all
// fix the two vertices, and the one-edge subset C (indices into cat.objects).
struct VineSubsets {
    std::vector<std::size_t> two_vertex;  // T
    std::vector<std::size_t> asymmetric;  // T'
    std::vector<std::size_t> one_edge;    // C
};

inline VineSubsets vine_subsets(const StableGraphCategory& cat) {
    VineSubsets out;
    for (std::size_t i = 0; i < cat.objects.size(); ++i) {
        const Graph& g = cat.objects[i];
        if (g.vertex_count() != 2) continue;
        bool loopless = true;
        for (const auto& e : g.edges())
            if (g.is_loop(e)) loopless = false;
        if (!loopless) continue;
        out.two_vertex.push_back(i);
        bool fixes = true;
        for (const auto& a : cat.morphisms[i][i])
            for (const auto& [v, w] : a.vertex_map)
                if (v != w) fixes = false;
        if (fixes) out.asymmetric.push_back(i);
        if (g.edge_count() == 1) out.one_edge.push_back(i);
    }
    return out;
}

// The trivalent graph on 2g-2 genus-0 vertices whose cyclic symmetry pins
// universal assignments: a (2g-2)-cycle e1..e_{2g-2} plus the g-1 chords
// c_j joining v_j to v_{j+g-1}. Also returns the cycle edge set.
struct SymmetricTrivalentGraph {
    Graph graph;
    std::vector<std::string> cycle_edges;
};

inline SymmetricTrivalentGraph symmetric_trivalent_graph(int genus) {
    if (genus < 2) throw std::invalid_argument("symmetric_trivalent_graph: need g >= 2");
    const int n = 2 * genus - 2;
    std::vector<Vertex> vertices;
    std::vector<std::string> vids;
    for (int i = 0; i < n; ++i) vids.push_back(detail::padded_vertex_id(i, n));
    for (const auto& id : vids) vertices.push_back({id, 0});
    std::vector<Edge> edges;
    std::vector<std::string> cycle;
    for (int i = 0; i < n; ++i) {
        std::string num = std::to_string(i + 1);
        if (n > 9 && num.size() < 2) num = "0" + num;
        const std::string eid = "e" + num;
        edges.push_back({eid, vids[i], vids[(i + 1) % n]});
        cycle.push_back(eid);
    }
    for (int j = 0; j < genus - 1; ++j)
        edges.push_back({"c" + std::to_string(j + 1), vids[j], vids[(j + genus - 1) % n]});
    std::sort(cycle.begin(), cycle.end());
    return {Graph(std::move(vertices), std::move(edges)), std::move(cycle)};
}

// ---------------------------------------------------------------------------
// Tree values from two-vertex data.

// A loopless two-vertex reference object with its prescribed integer: the
// sum of the solution over the preimage of the object's first vertex. The
// first vertex is the lower-genus one, ties broken by smaller id.
struct VineDatum {
    Graph graph;
    long long alpha = 0;
};

inline std::string first_vine_vertex(const Graph& two_vertex) {
    const auto& vs = two_vertex.vertices();
    if (vs.size() != 2) throw std::invalid_argument("first_vine_vertex: not a two-vertex graph");
    if (vs[0].genus != vs[1].genus) return vs[0].genus < vs[1].genus ? vs[0].id : vs[1].id;
    return vs[0].id;  // sorted, so the smaller id
}

struct TreeSystemResult {
    std::optional<Multidegree> value;
    std::string diagnostic;  // set when no integer solution exists
};

// Solve the affine system that morphism compatibility imposes on the tree
// multidegree: one equation per tree edge (a prescribed side sum for
// asymmetric contractions, a corrected balance for symmetric ones) plus the
// total degree.
inline TreeSystemResult solve_tree_values(const Graph& g, const SpanningSubgraph& tree,
                                          const std::vector<VineDatum>& vine_values,
                                          long long degree) {
    if (tree.parent != &g || tree.kept_edges.size() + 1 != g.vertex_count() ||
        !is_connected(tree))
        throw std::invalid_argument("solve_tree_values: not a spanning tree of the graph");
    const std::size_t n = g.vertex_count();
    IntMatrix rows;
    std::vector<Int> rhs;
    for (const auto& split_edge : tree.kept_edges) {
        // The two sides of the tree with split_edge removed.
        std::vector<std::string> rest;
        for (const auto& e : tree.kept_edges)
            if (e != split_edge) rest.push_back(e);
        detail::DisjointSets ds(n);
        for (const auto& e : rest)
            ds.unite(g.vertex_index(g.edge(e).end_a), g.vertex_index(g.edge(e).end_b));
        const std::size_t root_a = ds.find(g.vertex_index(g.edge(split_edge).end_a));
        std::set<std::string> side_a, side_b;
        for (std::size_t i = 0; i < n; ++i)
            (ds.find(i) == root_a ? side_a : side_b).insert(g.vertices()[i].id);

        std::set<std::string> to_contract;
        for (const auto& e : g.edges()) {
            const bool a_in = side_a.count(e.end_a) > 0;
            const bool b_in = side_a.count(e.end_b) > 0;
            if (a_in == b_in) to_contract.insert(e.id);
        }
        ContractionResult con = contract(g, to_contract);
        bool symmetric = false;
        for (const auto& a : automorphisms(con.graph))
            for (const auto& [v, w] : a.vertex_map)
                if (v != w) symmetric = true;

        std::vector<Int> row(n, 0);
        if (symmetric) {
            // Corrected balance: side sums plus their internal missing-edge
            // counts agree. Internal missing edges of side S number
            // |E(Gamma(S))| - (|S| - 1).
            long long internal_a = 0, internal_b = 0;
            for (const auto& e : g.edges()) {
                if (side_a.count(e.end_a) && side_a.count(e.end_b)) ++internal_a;
                if (side_b.count(e.end_a) && side_b.count(e.end_b)) ++internal_b;
            }
            const long long miss_a = internal_a - (static_cast<long long>(side_a.size()) - 1);
            const long long miss_b = internal_b - (static_cast<long long>(side_b.size()) - 1);
            for (std::size_t i = 0; i < n; ++i)
                row[i] = side_a.count(g.vertices()[i].id) ? 1 : -1;
            rows.push_back(std::move(row));
            rhs.push_back(Int(miss_b - miss_a));
        } else {
            const VineDatum* datum = nullptr;
            for (const auto& cand : vine_values)
                if (isomorphic(con.graph, cand.graph)) datum = &cand;
            if (!datum)
                return {std::nullopt, "no prescribed value for the contraction along " + split_edge};
            const auto isos = isomorphisms(con.graph, datum->graph);
            const std::string target_first = first_vine_vertex(datum->graph);
            std::string side_vertex;
            for (const auto& [v, w] : isos.front().vertex_map)
                if (w == target_first) side_vertex = v;
            const bool use_a = side_a.count([&] {
                // side containing the preimage of the designated vertex
                for (const auto& [orig, merged] : con.morphism.vertex_map)
                    if (merged == side_vertex) return orig;
                return side_vertex;
            }()) > 0;
            for (std::size_t i = 0; i < n; ++i)
                row[i] = (use_a ? side_a : side_b).count(g.vertices()[i].id) ? 1 : 0;
            rows.push_back(std::move(row));
            rhs.push_back(Int(datum->alpha));
        }
    }
    rows.push_back(std::vector<Int>(n, 1));
    rhs.push_back(Int(degree - static_cast<long long>(tree.missing_count())));

    auto solution = solve_linear(rows, rhs);
    if (!solution) return {std::nullopt, "the compatibility system is singular"};
    Multidegree d;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_integer((*solution)[i]))
            return {std::nullopt, "no integer solution: coordinate of " + g.vertices()[i].id +
                                      " is " + rat_to_string((*solution)[i])};
        d.values[g.vertices()[i].id] = rat_num((*solution)[i]).convert_to<long long>();
    }
    return {d, ""};
}

// ---------------------------------------------------------------------------
// Universal assignments.

struct UniversalAssignment {
    long long degree = 0;
    std::vector<StabilityAssignment> per_object;  // indexed like cat.objects
};

// All per-object assignment tuples (window-relative via
// enumerate_assignments) compatible with every morphism of the category,
// automorphisms included.
inline std::vector<UniversalAssignment> universal_search(const StableGraphCategory& cat,
                                                         long long degree, long long window) {
    const std::size_t n_obj = cat.objects.size();
    std::vector<std::vector<StabilityAssignment>> lists(n_obj);
    for (std::size_t i = 0; i < n_obj; ++i) {
        for (auto& a : enumerate_assignments(cat.objects[i], degree, window)) {
            bool self_ok = true;
            for (const auto& f : cat.morphisms[i][i])
                if (!pushforward_compatible(a, a, f).pass()) self_ok = false;
            if (self_ok) lists[i].push_back(std::move(a));
        }
    }
    std::vector<UniversalAssignment> results;
    std::vector<const StabilityAssignment*> chosen(n_obj, nullptr);
    std::function<void(std::size_t)> pick = [&](std::size_t i) {
        if (i == n_obj) {
            UniversalAssignment u;
            u.degree = degree;
            for (const auto* a : chosen) u.per_object.push_back(*a);
            results.push_back(std::move(u));
            return;
        }
        for (const auto& cand : lists[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                for (const auto& f : cat.morphisms[i][j])
                    if (!pushforward_compatible(cand, *chosen[j], f).pass()) {
                        ok = false;
                        break;
                    }
                for (const auto& f : cat.morphisms[j][i])
                    if (ok && !pushforward_compatible(*chosen[j], cand, f).pass()) {
                        ok = false;
                        break;
                    }
            }
            if (!ok) continue;
            chosen[i] = &cand;
            pick(i + 1);
            chosen[i] = nullptr;
        }
    };
    if (n_obj > 0) pick(0);
    return results;
}

inline std::vector<UniversalAssignment> universal_search(int genus, int markings, long long degree,
                                                         long long window) {
    if (genus > 3 || markings > 2)
        throw std::invalid_argument("universal_search: supported range is g <= 3, n <= 2");
    return universal_search(enumerate_stable_graphs(genus, markings), degree, window);
}

// gcd(d-g+1, 2g-2) != 1 blocks every universal assignment of type (g,0).
// For g in {2,3} the analytic answer is cross-validated against the forced
// uniform polarization on the (2g-2)-cycle.
inline bool is_degree_obstructed(int genus, long long degree) {
    if (genus < 2) throw std::invalid_argument("is_degree_obstructed: need g >= 2");
    const long long a = degree - genus + 1;
    const long long b = 2 * genus - 2;
    const bool obstructed = std::gcd(a, b) != 1;
    if (genus == 2 || genus == 3) {
        const int n = 2 * genus - 2;
        std::vector<Vertex> vertices;
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) vertices.push_back({"v" + std::to_string(i + 1), 0});
        for (int i = 0; i < n; ++i)
            edges.push_back({"e" + std::to_string(i + 1), vertices[i].id, vertices[(i + 1) % n].id});
        Graph cycle(vertices, edges);
        Polarization phi;
        for (const auto& v : cycle.vertices()) phi.values[v.id] = Rat(Int(a), Int(b));
        const bool nondeg = is_nondegenerate(cycle, phi).nondegenerate;
        if (nondeg == obstructed)
            throw std::logic_error("is_degree_obstructed: cycle cross-validation disagrees");
    }
    return obstructed;
}

// ---------------------------------------------------------------------------
// Families of polarizations over a category.

struct FamilyCompatibility {
    bool strong = false;  // per-morphism additivity of the weights
    bool weak = false;    // induced assignments are morphism-compatible
    VerifyReport report;
};

inline FamilyCompatibility check_polarization_family(const std::vector<Polarization>& phis,
                                                     const StableGraphCategory& cat) {
    if (phis.size() != cat.objects.size())
        throw std::invalid_argument("check_polarization_family: one polarization per object required");
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const auto check = is_nondegenerate(cat.objects[i], phis[i]);
        if (!check.nondegenerate)
            throw std::invalid_argument("check_polarization_family: member " + std::to_string(i) +
                                        " is degenerate");
    }
    FamilyCompatibility out;
    out.strong = true;
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        for (std::size_t j = 0; j < cat.objects.size(); ++j)
            for (const auto& f : cat.morphisms[i][j]) {
                for (const auto& w : cat.objects[j].vertices()) {
                    Rat sum = 0;
                    for (const auto& [v, img] : f.vertex_map)
                        if (img == w.id) sum += phis[i].values.at(v);
                    if (sum != phis[j].values.at(w.id)) {
                        out.strong = false;
                        out.report.fail("strong", "morphism " + std::to_string(i) + "->" +
                                                      std::to_string(j) + " breaks additivity at '" +
                                                      w.id + "'");
                    }
                }
            }
    std::vector<StabilityAssignment> induced;
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        induced.push_back(assignment_from_polarization(cat.objects[i], phis[i]));
    out.weak = true;
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        for (std::size_t j = 0; j < cat.objects.size(); ++j)
            for (const auto& f : cat.morphisms[i][j]) {
                auto rep = pushforward_compatible(induced[i], induced[j], f);
                if (!rep.pass()) {
                    out.weak = false;
                    out.report.fail("weak", "morphism " + std::to_string(i) + "->" + std::to_string(j) +
                                                " breaks assignment compatibility");
                }
            }
    if (out.strong && !out.weak)
        throw std::logic_error("check_polarization_family: strong compatibility without weak");
    return out;
}

}  // namespace jacstab
