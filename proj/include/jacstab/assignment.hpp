#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jacstab/chip_firing.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/graph_ops.hpp"
#include "jacstab/report.hpp"

namespace jacstab {

struct AssignmentEntry {
    std::vector<std::string> kept_edges;  // sorted; defines a connected spanning subgraph
    Multidegree degree;
    auto operator<=>(const AssignmentEntry&) const = default;
};

inline std::string show(const Multidegree& d) {
    std::string s = "(";
    bool first = true;
    for (const auto& [v, x] : d.values) {
        if (!first) s += ",";
        first = false;
        s += v + ":" + std::to_string(x);
    }
    return s + ")";
}

inline std::string show_edges(const std::vector<std::string>& kept) {
    std::string s = "{";
    for (std::size_t i = 0; i < kept.size(); ++i) s += (i ? "," : "") + kept[i];
    return s + "}";
}

// A finite set of (connected spanning subgraph, multidegree) pairs of fixed
// total degree d; every entry satisfies sum = d - #missing edges.
class StabilityAssignment {
public:
    StabilityAssignment(Graph graph, long long degree, std::set<AssignmentEntry> entries)
        : graph_(std::move(graph)), degree_(degree), entries_(std::move(entries)) {
        for (const auto& entry : entries_) {
            SpanningSubgraph sub(graph_, entry.kept_edges);
            if (!is_connected(sub))
                throw std::invalid_argument("assignment entry on a disconnected subgraph " +
                                            show_edges(entry.kept_edges));
            check_anchoring(graph_, entry.degree);
            const long long want = degree_ - static_cast<long long>(sub.missing_count());
            if (entry.degree.total() != want)
                throw std::invalid_argument("assignment entry " + show(entry.degree) + " on " +
                                            show_edges(entry.kept_edges) + " has total " +
                                            std::to_string(entry.degree.total()) + ", expected " +
                                            std::to_string(want));
        }
    }

    const Graph& graph() const { return graph_; }
    long long degree() const { return degree_; }
    const std::set<AssignmentEntry>& entries() const { return entries_; }

    bool contains(const std::vector<std::string>& kept, const Multidegree& d) const {
        return entries_.count({kept, d}) > 0;
    }

    // The fiber over one spanning subgraph, in sorted order.
    std::vector<Multidegree> fiber(const std::vector<std::string>& kept) const {
        std::vector<Multidegree> out;
        for (const auto& e : entries_)
            if (e.kept_edges == kept) out.push_back(e.degree);
        return out;
    }

    bool operator==(const StabilityAssignment& other) const {
        return degree_ == other.degree_ && graph_ == other.graph_ && entries_ == other.entries_;
    }

private:
    Graph graph_;
    long long degree_;
    std::set<AssignmentEntry> entries_;
};

namespace detail {

inline std::vector<AssignmentEntry> chip_added(const Graph& g, const AssignmentEntry& entry) {
    std::vector<AssignmentEntry> out;
    SpanningSubgraph sub(g, entry.kept_edges);
    for (const auto& missing : sub.missing_edges()) {
        const Edge& e = g.edge(missing);
        std::vector<std::string> bigger = entry.kept_edges;
        bigger.insert(std::lower_bound(bigger.begin(), bigger.end(), missing), missing);
        out.push_back({bigger, entry.degree.plus_chip(e.end_a)});
        if (e.end_a != e.end_b) out.push_back({bigger, entry.degree.plus_chip(e.end_b)});
    }
    return out;
}

}  // namespace detail

// Condition: every entry propagates across each missing edge by adding one
// chip at either endpoint (a single successor for a missing loop).
inline VerifyReport verify_chip_adding(const StabilityAssignment& a) {
    VerifyReport report;
    const Graph& g = a.graph();
    for (const auto& entry : a.entries()) {
        for (const auto& successor : detail::chip_added(g, entry)) {
            if (!a.contains(successor.kept_edges, successor.degree))
                report.fail("chip-adding", "entry " + show(entry.degree) + " on " +
                                               show_edges(entry.kept_edges) + " requires " +
                                               show(successor.degree) + " on " +
                                               show_edges(successor.kept_edges));
        }
    }
    return report;
}

// Condition: the fiber over every connected spanning subgraph G is a minimal
// complete set of orbit representatives for the firing action, equivalently
// |fiber(G)| = c(G) with pairwise inequivalent members.
inline VerifyReport verify_minimal_complete(const StabilityAssignment& a) {
    VerifyReport report;
    const Graph& g = a.graph();
    for (const auto& sub : spanning_subgraphs(g, true)) {
        const auto fiber = a.fiber(sub.kept_edges);
        const Int c = complexity(sub);
        if (Int(fiber.size()) != c) {
            report.fail("completeness", "fiber over " + show_edges(sub.kept_edges) + " has " +
                                            std::to_string(fiber.size()) + " elements, complexity is " +
                                            c.str());
        }
        if (fiber.size() < 2) continue;
        const JacobianGroup jg(sub);
        std::vector<std::vector<Int>> coords;
        std::vector<Multidegree> reduced;
        for (const auto& d : fiber) {
            coords.push_back(jg.coordinates(subtract(d, fiber.front())));
            reduced.push_back(reduce(sub, d, jg.base_vertex()));
        }
        for (std::size_t i = 0; i < fiber.size(); ++i)
            for (std::size_t j = i + 1; j < fiber.size(); ++j) {
                const bool same_class = coords[i] == coords[j];
                if (same_class != (reduced[i] == reduced[j]))
                    throw std::logic_error("verify_minimal_complete: equivalence routes disagree");
                if (same_class)
                    report.fail("minimality", "fiber over " + show_edges(sub.kept_edges) +
                                                  " contains equivalent members " + show(fiber[i]) +
                                                  " and " + show(fiber[j]));
            }
    }
    return report;
}

inline bool is_stability_assignment(const StabilityAssignment& a) {
    return verify_chip_adding(a).pass() && verify_minimal_complete(a).pass();
}

// Least fixed point of the chip-adding rule above a seed assignment.
inline StabilityAssignment chip_adding_closure(const StabilityAssignment& seed) {
    const Graph& g = seed.graph();
    std::set<AssignmentEntry> closed = seed.entries();
    std::deque<AssignmentEntry> queue(closed.begin(), closed.end());
    while (!queue.empty()) {
        AssignmentEntry entry = queue.front();
        queue.pop_front();
        for (auto& successor : detail::chip_added(g, entry))
            if (closed.insert(successor).second) queue.push_back(successor);
    }
    return StabilityAssignment(g, seed.degree(), std::move(closed));
}

// Build the closure of one multidegree per spanning tree and keep it only if
// it verifies as a stability assignment; at most one assignment can have the
// given tree values.
inline std::optional<StabilityAssignment> extend_from_trees(
    const Graph& g, long long degree,
    const std::map<std::vector<std::string>, Multidegree>& tree_values) {
    const auto trees = spanning_trees(g);
    std::set<AssignmentEntry> seed;
    for (const auto& tree : trees) {
        auto it = tree_values.find(tree.kept_edges);
        if (it == tree_values.end())
            throw std::invalid_argument("extend_from_trees: no value for tree " +
                                        show_edges(tree.kept_edges));
        const long long want = degree - static_cast<long long>(tree.missing_count());
        if (it->second.total() != want)
            throw std::invalid_argument("extend_from_trees: tree value has total " +
                                        std::to_string(it->second.total()) + ", expected " +
                                        std::to_string(want));
        seed.insert({tree.kept_edges, it->second});
    }
    if (tree_values.size() != trees.size())
        throw std::invalid_argument("extend_from_trees: values given for non-tree subgraphs");
    StabilityAssignment closure =
        chip_adding_closure(StabilityAssignment(g, degree, std::move(seed)));
    if (!is_stability_assignment(closure)) return std::nullopt;
    return closure;
}

// Counting bounds for chip-adding-closed assignments with nonempty tree
// fibers: |fiber(G)| >= c(G) everywhere, and equality at the full graph
// forces equality everywhere.
inline VerifyReport check_complexity_bounds(const StabilityAssignment& a) {
    VerifyReport report;
    const Graph& g = a.graph();
    {
        VerifyReport cond1 = verify_chip_adding(a);
        if (!cond1.pass()) {
            report.fail("precondition", "assignment is not chip-adding closed");
            report.merge(cond1);
            return report;
        }
    }
    bool trees_ok = true;
    for (const auto& tree : spanning_trees(g)) {
        if (a.fiber(tree.kept_edges).empty()) {
            report.fail("precondition", "empty fiber over spanning tree " + show_edges(tree.kept_edges));
            trees_ok = false;
        }
    }
    if (!trees_ok) return report;
    const auto subs = spanning_subgraphs(g, true);
    bool equality_at_top = false;
    for (const auto& sub : subs) {
        if (sub.kept_edges.size() == g.edge_count())
            equality_at_top = Int(a.fiber(sub.kept_edges).size()) == complexity(sub);
    }
    for (const auto& sub : subs) {
        const Int c = complexity(sub);
        const Int have = static_cast<long long>(a.fiber(sub.kept_edges).size());
        if (have < c)
            report.fail("lower-bound", "fiber over " + show_edges(sub.kept_edges) + " has " +
                                           have.str() + " < complexity " + c.str());
        else if (equality_at_top && have != c)
            report.fail("propagation", "equality at the full graph but fiber over " +
                                           show_edges(sub.kept_edges) + " has " + have.str() +
                                           " != complexity " + c.str());
    }
    return report;
}

// All orientation sums over the missing edges of G: one chip per missing
// edge at a chosen endpoint (forced for loops). Total degree = #missing.
inline std::set<Multidegree> perturbations(const Graph& g, const SpanningSubgraph& G) {
    if (!is_connected(G)) throw std::invalid_argument("perturbations: subgraph is disconnected");
    std::set<Multidegree> out;
    const auto missing = G.missing_edges();
    std::function<void(std::size_t, Multidegree)> rec = [&](std::size_t i, Multidegree acc) {
        if (i == missing.size()) {
            out.insert(std::move(acc));
            return;
        }
        const Edge& e = g.edge(missing[i]);
        rec(i + 1, acc.plus_chip(e.end_a));
        if (e.end_a != e.end_b) rec(i + 1, acc.plus_chip(e.end_b));
    };
    rec(0, zero_multidegree(g));
    return out;
}

// Lift an assignment to a subdivision: extend each entry by zero on the
// exceptional vertices and put one chip on a chosen interior vertex of every
// missing edge's chain. Entries missing an unsubdivided edge produce no
// lifts (there is no interior vertex to carry the chip).
inline std::vector<Multidegree> lift_to_subdivision(const StabilityAssignment& a,
                                                    const SubdividedGraph& sub) {
    if (!(a.graph() == sub.base))
        throw std::invalid_argument("lift_to_subdivision: assignment and subdivision disagree on the base");
    std::set<Multidegree> out;
    for (const auto& entry : a.entries()) {
        SpanningSubgraph G(sub.base, entry.kept_edges);
        const auto missing = G.missing_edges();
        bool liftable = true;
        std::vector<std::vector<std::string>> choices;
        for (const auto& e : missing) {
            auto interior = sub.interior_vertices(e);
            if (interior.empty()) {
                liftable = false;
                break;
            }
            choices.push_back(std::move(interior));
        }
        if (!liftable) continue;
        Multidegree base_lift = zero_multidegree(sub.result);
        for (const auto& [v, x] : entry.degree.values) base_lift.values.at(v) = x;
        std::function<void(std::size_t, Multidegree)> rec = [&](std::size_t i, Multidegree acc) {
            if (i == choices.size()) {
                out.insert(std::move(acc));
                return;
            }
            for (const auto& v : choices[i]) rec(i + 1, acc.plus_chip(v));
        };
        rec(0, std::move(base_lift));
    }
    return {out.begin(), out.end()};
}

// For a stability assignment, its lift must be a minimal complete set of
// representatives on the subdivided graph: the count matches the subdivided
// complexity and all classes are pairwise distinct.
inline VerifyReport verify_lifted_classes(const StabilityAssignment& a, const SubdividedGraph& sub) {
    VerifyReport report;
    const auto lifted = lift_to_subdivision(a, sub);
    const SpanningSubgraph whole = full_subgraph(sub.result);
    const Int c = complexity(whole);
    if (Int(lifted.size()) != c)
        report.fail("count", "lift has " + std::to_string(lifted.size()) +
                                 " elements, subdivided complexity is " + c.str());
    if (lifted.size() < 2) return report;
    const JacobianGroup jg(whole);
    std::map<std::vector<Int>, std::size_t> seen_class;
    std::map<Multidegree, std::size_t> seen_reduced;
    for (std::size_t i = 0; i < lifted.size(); ++i) {
        const auto key = jg.coordinates(subtract(lifted[i], lifted.front()));
        const auto red = reduce(whole, lifted[i], jg.base_vertex());
        const auto [it, fresh_class] = seen_class.emplace(key, i);
        const auto [jt, fresh_red] = seen_reduced.emplace(red, i);
        if (fresh_class != fresh_red || (!fresh_class && it->second != jt->second))
            throw std::logic_error("verify_lifted_classes: equivalence routes disagree");
        if (!fresh_class)
            report.fail("minimality", "lifts " + show(lifted[it->second]) + " and " + show(lifted[i]) +
                                          " are equivalent on the subdivision");
    }
    return report;
}

// Compatibility of an assignment with a graph morphism: every entry pushes
// forward into the target assignment, with one chip per contracted missing
// edge landing on its image vertex.
inline VerifyReport pushforward_compatible(const StabilityAssignment& src,
                                           const StabilityAssignment& tgt,
                                           const GraphMorphism& f) {
    if (src.degree() != tgt.degree())
        throw std::invalid_argument("pushforward_compatible: degree mismatch");
    VerifyReport report;
    const Graph& g = src.graph();
    std::set<std::string> contracted(f.contracted_edges.begin(), f.contracted_edges.end());
    for (const auto& entry : src.entries()) {
        std::set<std::string> kept_image;
        for (const auto& e : entry.kept_edges)
            if (!contracted.count(e)) kept_image.insert(f.edge_map.at(e));
        Multidegree image = zero_multidegree(tgt.graph());
        for (const auto& [v, x] : entry.degree.values) image.values.at(f.vertex_map.at(v)) += x;
        SpanningSubgraph sub(g, entry.kept_edges);
        for (const auto& e : sub.missing_edges())
            if (contracted.count(e)) image.values.at(f.vertex_map.at(g.edge(e).end_a)) += 1;
        std::vector<std::string> kept_sorted(kept_image.begin(), kept_image.end());
        if (!tgt.contains(kept_sorted, image))
            report.fail("pushforward", "image of " + show(entry.degree) + " on " +
                                           show_edges(entry.kept_edges) + " is " + show(image) + " on " +
                                           show_edges(kept_sorted) + ", absent from the target");
    }
    return report;
}

// Exhaustive enumeration of stability assignments whose spanning-tree values
// lie in the box [-window, window]^V; complete relative to that window.
inline std::vector<StabilityAssignment> enumerate_assignments(const Graph& g, long long degree,
                                                              long long window) {
    if (window < 0) throw std::invalid_argument("enumerate_assignments: negative window");
    if (!is_connected(g)) throw std::invalid_argument("enumerate_assignments: graph is disconnected");
    const auto subs = spanning_subgraphs(g, true);
    std::map<std::vector<std::string>, Int> cmap;
    for (const auto& sub : subs) cmap[sub.kept_edges] = complexity(sub);
    std::vector<const SpanningSubgraph*> trees;
    for (const auto& sub : subs)
        if (sub.kept_edges.size() + 1 == g.vertex_count()) trees.push_back(&sub);

    // Candidate multidegrees on one tree: entries in the window, fixed total.
    // A single vertex leaves no freedom, so its forced value is not filtered.
    auto candidates = [&](const SpanningSubgraph& tree) {
        const long long want = degree - static_cast<long long>(tree.missing_count());
        const long long n = static_cast<long long>(g.vertex_count());
        if (n == 1) return std::vector<Multidegree>{make_multidegree(g, {want})};
        std::vector<Multidegree> out;
        std::vector<long long> acc(g.vertex_count());
        std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long sum) {
            const long long left = n - static_cast<long long>(i);
            if (i == acc.size()) {
                if (sum == want) out.push_back(make_multidegree(g, acc));
                return;
            }
            for (long long v = -window; v <= window; ++v) {
                const long long rest = want - sum - v;
                if (rest > (left - 1) * window || rest < -(left - 1) * window) continue;
                acc[i] = v;
                rec(i + 1, sum + v);
            }
        };
        rec(0, 0);
        return out;
    };
    std::vector<std::vector<Multidegree>> tree_candidates;
    tree_candidates.reserve(trees.size());
    for (const auto* tree : trees) tree_candidates.push_back(candidates(*tree));

    // The search interns every distinct entry once: its fiber, its reduced
    // form (the canonical class representative) and its single-seed closure
    // are branch-independent, and closures overlap heavily across branches.
    // Interior search nodes then work on plain integer ids. Two pruning
    // rules apply, both sound because entries only accumulate along a
    // branch: a fiber may never exceed its complexity, and may never hold
    // two members of the same firing class.
    const std::string base = g.vertices().front().id;
    std::vector<Int> sub_complexity;                    // by subgraph id
    std::map<std::vector<std::string>, int> sub_ids;    // kept edges -> subgraph id
    std::vector<std::map<Multidegree, int>> class_ids;  // per subgraph: reduced form -> class id
    std::map<AssignmentEntry, int> entry_ids;
    std::vector<AssignmentEntry> entry_by_id;
    struct EntryMeta {
        int subgraph;
        int cls;
    };
    std::vector<EntryMeta> meta;

    auto intern = [&](const AssignmentEntry& entry) {
        auto [it, fresh] = entry_ids.emplace(entry, static_cast<int>(entry_by_id.size()));
        if (!fresh) return it->second;
        entry_by_id.push_back(entry);
        auto [sit, sub_fresh] = sub_ids.emplace(entry.kept_edges, static_cast<int>(sub_complexity.size()));
        if (sub_fresh) {
            sub_complexity.push_back(cmap.at(entry.kept_edges));
            class_ids.emplace_back();
        }
        const int sid = sit->second;
        const Multidegree reduced = reduce(SpanningSubgraph(g, entry.kept_edges), entry.degree, base);
        auto [cit, ignored] = class_ids[sid].emplace(reduced, static_cast<int>(class_ids[sid].size()));
        meta.push_back({sid, cit->second});
        return it->second;
    };

    std::map<AssignmentEntry, std::vector<int>> closure_memo;
    auto seed_closure = [&](const AssignmentEntry& seed) -> const std::vector<int>& {
        auto it = closure_memo.find(seed);
        if (it == closure_memo.end()) {
            std::set<AssignmentEntry> full{seed};
            std::deque<AssignmentEntry> queue{seed};
            while (!queue.empty()) {
                AssignmentEntry entry = queue.front();
                queue.pop_front();
                for (auto& successor : detail::chip_added(g, entry))
                    if (full.insert(successor).second) queue.push_back(successor);
            }
            std::vector<int> ids;
            ids.reserve(full.size());
            for (const auto& entry : full) ids.push_back(intern(entry));
            it = closure_memo.emplace(seed, std::move(ids)).first;
        }
        return it->second;
    };

    std::set<std::set<AssignmentEntry>> dedup;
    std::vector<StabilityAssignment> results;
    std::vector<char> in_closure;
    std::vector<long long> fiber_size;
    std::vector<std::vector<char>> class_used;

    std::function<void(std::size_t)> search = [&](std::size_t ti) {
        if (ti == trees.size()) {
            std::set<AssignmentEntry> entries;
            for (std::size_t id = 0; id < in_closure.size(); ++id)
                if (in_closure[id]) entries.insert(entry_by_id[id]);
            StabilityAssignment candidate(g, degree, entries);
            if (is_stability_assignment(candidate) && dedup.insert(std::move(entries)).second)
                results.push_back(std::move(candidate));
            return;
        }
        for (const auto& value : tree_candidates[ti]) {
            const auto& closure_ids = seed_closure({trees[ti]->kept_edges, value});
            if (in_closure.size() < entry_by_id.size()) in_closure.resize(entry_by_id.size(), 0);
            if (fiber_size.size() < sub_complexity.size()) {
                fiber_size.resize(sub_complexity.size(), 0);
                class_used.resize(sub_complexity.size());
            }
            std::vector<int> added;
            for (const int id : closure_ids)
                if (!in_closure[id]) {
                    in_closure[id] = 1;
                    added.push_back(id);
                }
            bool viable = true;
            std::size_t booked = 0;
            for (const int id : added) {
                const auto [sid, cid] = meta[id];
                if (Int(fiber_size[sid] + 1) > sub_complexity[sid]) {
                    viable = false;
                    break;
                }
                auto& used = class_used[sid];
                if (used.size() <= static_cast<std::size_t>(cid)) used.resize(cid + 1, 0);
                if (used[cid]) {
                    viable = false;
                    break;
                }
                fiber_size[sid] += 1;
                used[cid] = 1;
                ++booked;
            }
            if (viable) search(ti + 1);
            for (std::size_t k = 0; k < added.size(); ++k) {
                if (k < booked) {
                    const auto [sid, cid] = meta[added[k]];
                    fiber_size[sid] -= 1;
                    class_used[sid][cid] = 0;
                }
                in_closure[added[k]] = 0;
            }
        }
    };
    search(0);
    return results;
}

}  // namespace jacstab
