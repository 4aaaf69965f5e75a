#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jacstab/graph.hpp"
#include "jacstab/matrix.hpp"

namespace jacstab {

// All 2^|E| spanning subgraphs, optionally filtered to connected ones, in
// lexicographic order on the sorted edge-id sequences.
inline std::vector<SpanningSubgraph> spanning_subgraphs(const Graph& g, bool connected_only) {
    const auto ids = g.edge_ids();
    std::vector<SpanningSubgraph> out;
    std::vector<std::string> current;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        SpanningSubgraph sub(g, current);
        if (!connected_only || is_connected(sub)) out.push_back(std::move(sub));
        for (std::size_t i = from; i < ids.size(); ++i) {
            current.push_back(ids[i]);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
    return out;
}

inline std::vector<SpanningSubgraph> spanning_trees(const Graph& g) {
    std::vector<SpanningSubgraph> out;
    for (auto& sub : spanning_subgraphs(g, true))
        if (sub.kept_edges.size() + 1 == g.vertex_count()) out.push_back(std::move(sub));
    return out;
}

// Loop-free Laplacian on the parent's full vertex set.
inline IntMatrix laplacian(const SpanningSubgraph& sub) {
    const Graph& g = *sub.parent;
    const std::size_t n = g.vertex_count();
    IntMatrix lap(n, std::vector<Int>(n, 0));
    for (const auto& id : sub.kept_edges) {
        const Edge& e = g.edge(id);
        if (g.is_loop(e)) continue;
        const std::size_t a = g.vertex_index(e.end_a);
        const std::size_t b = g.vertex_index(e.end_b);
        lap[a][a] += 1;
        lap[b][b] += 1;
        lap[a][b] -= 1;
        lap[b][a] -= 1;
    }
    return lap;
}

inline IntMatrix reduced_laplacian(const SpanningSubgraph& sub, std::size_t drop_index) {
    IntMatrix lap = laplacian(sub);
    IntMatrix red;
    for (std::size_t i = 0; i < lap.size(); ++i) {
        if (i == drop_index) continue;
        std::vector<Int> row;
        for (std::size_t j = 0; j < lap.size(); ++j)
            if (j != drop_index) row.push_back(lap[i][j]);
        red.push_back(std::move(row));
    }
    return red;
}

// Spanning-tree count via the matrix-tree determinant; 0 when disconnected.
// complexity_by_enumeration is the independent brute-force route; the two
// must agree (cross-checked by the test suite on small multigraphs).
inline Int complexity(const SpanningSubgraph& sub) {
    if (sub.parent->vertex_count() == 1) return 1;
    return determinant(reduced_laplacian(sub, 0));
}

inline Int complexity(const Graph& g) { return complexity(full_subgraph(g)); }

inline Int complexity_by_enumeration(const SpanningSubgraph& sub) {
    const Graph& g = *sub.parent;
    const std::size_t n = g.vertex_count();
    std::vector<std::string> nonloop;
    for (const auto& id : sub.kept_edges)
        if (!g.is_loop(g.edge(id))) nonloop.push_back(id);
    if (n == 1) return 1;
    if (nonloop.size() < n - 1) return 0;
    Int count = 0;
    std::vector<std::string> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() == n - 1) {
            if (component_count(g, pick) == 1) ++count;
            return;
        }
        for (std::size_t i = from; i < nonloop.size(); ++i) {
            if (nonloop.size() - i < (n - 1) - pick.size()) break;
            pick.push_back(nonloop[i]);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return count;
}

// ---------------------------------------------------------------------------
// Graph morphisms: contractions composed with relabelling isomorphisms.

struct GraphMorphism {
    std::map<std::string, std::string> vertex_map;
    std::vector<std::string> contracted_edges;       // sorted subset of source edges
    std::map<std::string, std::string> edge_map;     // non-contracted source edge -> target edge
    std::map<std::string, std::string> leg_map;

    auto operator<=>(const GraphMorphism&) const = default;
};

struct ContractionResult {
    Graph graph;
    GraphMorphism morphism;
};

// Contract an edge set: a loop is deleted and bumps the incident genus by 1,
// a non-loop merges its endpoints and adds their genera. The merged vertex
// keeps the lexicographically smallest id of its class.
inline ContractionResult contract(const Graph& g, const std::set<std::string>& edge_set) {
    for (const auto& id : edge_set) g.edge(id);
    const std::size_t n = g.vertex_count();
    detail::DisjointSets ds(n);
    std::vector<int> extra_genus(n, 0);  // loops formed while contracting
    for (const auto& id : edge_set) {
        const Edge& e = g.edge(id);
        const std::size_t a = ds.find(g.vertex_index(e.end_a));
        const std::size_t b = ds.find(g.vertex_index(e.end_b));
        if (a == b) {
            extra_genus[a] += 1;
        } else {
            ds.unite(a, b);
            extra_genus[ds.find(a)] = extra_genus[a] + extra_genus[b];
        }
    }
    // Class representative id = smallest vertex id in the class; vertex ids
    // are sorted, so the first index of each root wins.
    std::vector<std::string> class_id(n);
    std::vector<int> class_genus(n, 0);
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = ds.find(i);
        if (!seen[r]) {
            seen[r] = true;
            class_id[r] = g.vertices()[i].id;
        }
        class_genus[r] += g.vertices()[i].genus;
    }
    GraphMorphism m;
    std::vector<Vertex> vertices;
    for (std::size_t i = 0; i < n; ++i) m.vertex_map[g.vertices()[i].id] = class_id[ds.find(i)];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = ds.find(i);
        if (class_id[r] == g.vertices()[i].id)
            vertices.push_back({class_id[r], class_genus[r] + extra_genus[r]});
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        if (edge_set.count(e.id)) continue;
        edges.push_back({e.id, m.vertex_map[e.end_a], m.vertex_map[e.end_b]});
        m.edge_map[e.id] = e.id;
    }
    std::vector<Leg> legs;
    for (const auto& l : g.legs()) {
        legs.push_back({l.id, m.vertex_map[l.vertex], l.label});
        m.leg_map[l.id] = l.id;
    }
    m.contracted_edges.assign(edge_set.begin(), edge_set.end());
    return {Graph(std::move(vertices), std::move(edges), std::move(legs)), std::move(m)};
}

inline GraphMorphism compose(const GraphMorphism& first, const GraphMorphism& second) {
    GraphMorphism out;
    for (const auto& [v, w] : first.vertex_map) out.vertex_map[v] = second.vertex_map.at(w);
    std::set<std::string> contracted(first.contracted_edges.begin(), first.contracted_edges.end());
    for (const auto& [e, f] : first.edge_map) {
        auto it = second.edge_map.find(f);
        if (it == second.edge_map.end())
            contracted.insert(e);
        else
            out.edge_map[e] = it->second;
    }
    out.contracted_edges.assign(contracted.begin(), contracted.end());
    for (const auto& [l, k] : first.leg_map) out.leg_map[l] = second.leg_map.at(k);
    return out;
}

// Checks the structural invariants of a morphism from src to tgt; returns an
// empty string when valid, a diagnostic otherwise.
inline std::string morphism_error(const Graph& src, const Graph& tgt, const GraphMorphism& m) {
    for (const auto& v : src.vertices())
        if (!m.vertex_map.count(v.id)) return "vertex_map misses '" + v.id + "'";
    for (const auto& [v, w] : m.vertex_map)
        if (!tgt.has_vertex(w)) return "vertex_map hits unknown '" + w + "'";
    std::set<std::string> contracted(m.contracted_edges.begin(), m.contracted_edges.end());
    std::set<std::string> tgt_edges_hit;
    for (const auto& e : src.edges()) {
        if (contracted.count(e.id)) {
            if (m.vertex_map.at(e.end_a) != m.vertex_map.at(e.end_b))
                return "contracted edge '" + e.id + "' has split endpoints";
            continue;
        }
        auto it = m.edge_map.find(e.id);
        if (it == m.edge_map.end()) return "edge '" + e.id + "' is neither mapped nor contracted";
        const Edge& te = tgt.edge(it->second);
        std::pair<std::string, std::string> got{m.vertex_map.at(e.end_a), m.vertex_map.at(e.end_b)};
        std::pair<std::string, std::string> want{te.end_a, te.end_b};
        if (got.first > got.second) std::swap(got.first, got.second);
        if (want.first > want.second) std::swap(want.first, want.second);
        if (got != want) return "edge '" + e.id + "' maps with inconsistent endpoints";
        if (!tgt_edges_hit.insert(it->second).second) return "edge_map is not injective";
    }
    if (tgt_edges_hit.size() != tgt.edge_count()) return "edge_map is not onto the target edges";
    std::set<std::string> tgt_legs_hit;
    for (const auto& l : src.legs()) {
        auto it = m.leg_map.find(l.id);
        if (it == m.leg_map.end()) return "leg '" + l.id + "' unmapped";
        const Leg* tl = nullptr;
        for (const auto& cand : tgt.legs())
            if (cand.id == it->second) tl = &cand;
        if (!tl) return "leg_map hits unknown leg";
        if (tl->label != l.label) return "leg '" + l.id + "' changes label";
        if (tl->vertex != m.vertex_map.at(l.vertex)) return "leg '" + l.id + "' has inconsistent anchor";
        if (!tgt_legs_hit.insert(it->second).second) return "leg_map is not injective";
    }
    if (tgt_legs_hit.size() != tgt.legs().size()) return "leg_map is not onto the target legs";
    // Genus rule: target genus = b1 of the contracted preimage + genus sum.
    for (const auto& w : tgt.vertices()) {
        std::set<std::string> pre;
        int genus_sum = 0;
        for (const auto& v : src.vertices())
            if (m.vertex_map.at(v.id) == w.id) {
                pre.insert(v.id);
                genus_sum += v.genus;
            }
        if (pre.empty()) return "vertex '" + w.id + "' has empty preimage";
        std::size_t internal_edges = 0;
        detail::DisjointSets ds(pre.size());
        std::map<std::string, std::size_t> idx;
        for (const auto& p : pre) idx.emplace(p, idx.size());
        std::size_t comps = pre.size();
        for (const auto& id : m.contracted_edges) {
            const Edge& e = src.edge(id);
            if (!pre.count(e.end_a)) continue;
            ++internal_edges;
            if (ds.unite(idx[e.end_a], idx[e.end_b])) --comps;
        }
        if (comps != 1) return "preimage of '" + w.id + "' is not connected";
        const std::size_t b1 = internal_edges - pre.size() + 1;
        if (static_cast<std::size_t>(w.genus) != b1 + static_cast<std::size_t>(genus_sum))
            return "genus rule fails at '" + w.id + "'";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Isomorphisms (genus- and leg-label-preserving), by backtracking over
// vertex bijections with degree/genus pruning, then all edge matchings.

namespace detail {

struct VertexSignature {
    int genus;
    int valence;
    int loops;
    std::vector<int> leg_labels;
    auto operator<=>(const VertexSignature&) const = default;
};

inline VertexSignature vertex_signature(const Graph& g, const std::string& v) {
    VertexSignature s;
    s.genus = g.genus_of(v);
    s.valence = g.valence(v);
    s.loops = 0;
    for (const auto& e : g.edges())
        if (e.end_a == v && e.end_b == v) ++s.loops;
    for (const auto& l : g.legs())
        if (l.vertex == v) s.leg_labels.push_back(l.label);
    std::sort(s.leg_labels.begin(), s.leg_labels.end());
    return s;
}

inline std::map<std::pair<std::string, std::string>, std::vector<std::string>> edge_classes(const Graph& g) {
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> classes;
    for (const auto& e : g.edges()) {
        auto key = std::minmax(e.end_a, e.end_b);
        classes[{key.first, key.second}].push_back(e.id);
    }
    return classes;
}

}  // namespace detail

inline std::vector<GraphMorphism> isomorphisms(const Graph& g1, const Graph& g2) {
    std::vector<GraphMorphism> out;
    if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() ||
        g1.legs().size() != g2.legs().size())
        return out;

    const auto v1 = g1.vertex_ids();
    const auto v2 = g2.vertex_ids();
    std::map<std::string, detail::VertexSignature> sig1, sig2;
    for (const auto& v : v1) sig1[v] = detail::vertex_signature(g1, v);
    for (const auto& v : v2) sig2[v] = detail::vertex_signature(g2, v);
    {
        std::vector<detail::VertexSignature> a, b;
        for (const auto& [k, s] : sig1) a.push_back(s);
        for (const auto& [k, s] : sig2) b.push_back(s);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return out;
    }

    const auto classes1 = detail::edge_classes(g1);
    auto multiplicity2 = [&](const std::string& a, const std::string& b) {
        int n = 0;
        for (const auto& e : g2.edges()) {
            auto key = std::minmax(e.end_a, e.end_b);
            auto want = std::minmax(a, b);
            if (key == want) ++n;
        }
        return n;
    };

    std::map<std::string, std::string> vmap;
    std::set<std::string> used;
    std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == v1.size()) {
            // Vertex bijection complete: emit every edge matching.
            std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairings;
            for (const auto& [key, src_ids] : classes1) {
                std::vector<std::string> tgt_ids;
                auto want = std::minmax(vmap.at(key.first), vmap.at(key.second));
                for (const auto& e : g2.edges()) {
                    auto got = std::minmax(e.end_a, e.end_b);
                    if (got == want) tgt_ids.push_back(e.id);
                }
                if (tgt_ids.size() != src_ids.size()) return;  // cannot happen after pruning
                pairings.push_back({src_ids, tgt_ids});
            }
            GraphMorphism base;
            base.vertex_map = vmap;
            for (const auto& l1 : g1.legs())
                for (const auto& l2 : g2.legs())
                    if (l1.label == l2.label) base.leg_map[l1.id] = l2.id;
            std::function<void(std::size_t, GraphMorphism&)> match = [&](std::size_t ci, GraphMorphism& m) {
                if (ci == pairings.size()) {
                    out.push_back(m);
                    return;
                }
                const auto& [src_ids, tgt_ids] = pairings[ci];
                std::vector<std::size_t> perm(tgt_ids.size());
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    for (std::size_t k = 0; k < src_ids.size(); ++k) m.edge_map[src_ids[k]] = tgt_ids[perm[k]];
                    match(ci + 1, m);
                } while (std::next_permutation(perm.begin(), perm.end()));
                for (const auto& s : src_ids) m.edge_map.erase(s);
            };
            match(0, base);
            return;
        }
        const std::string& v = v1[i];
        for (const auto& w : v2) {
            if (used.count(w) || sig1.at(v) != sig2.at(w)) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                int m1 = 0;
                auto want = std::minmax(v, v1[j]);
                for (const auto& e : g1.edges()) {
                    auto got = std::minmax(e.end_a, e.end_b);
                    if (got == want) ++m1;
                }
                if (m1 != multiplicity2(w, vmap.at(v1[j]))) ok = false;
            }
            // Leg anchors are pinned by labels.
            for (const auto& l1 : g1.legs()) {
                if (l1.vertex != v) continue;
                for (const auto& l2 : g2.legs())
                    if (l2.label == l1.label && l2.vertex != w) ok = false;
            }
            if (!ok) continue;
            vmap[v] = w;
            used.insert(w);
            place(i + 1);
            used.erase(w);
            vmap.erase(v);
        }
    };
    place(0);
    return out;
}

inline std::vector<GraphMorphism> automorphisms(const Graph& g) { return isomorphisms(g, g); }

inline bool isomorphic(const Graph& g1, const Graph& g2) { return !isomorphisms(g1, g2).empty(); }

inline bool has_separating_edge(const Graph& g) {
    auto ids = g.edge_ids();
    for (const auto& e : ids) {
        if (g.is_loop(g.edge(e))) continue;
        std::vector<std::string> rest;
        for (const auto& f : ids)
            if (f != e) rest.push_back(f);
        if (component_count(g, rest) > 1) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Subdivision: each edge e becomes a chain of m(e)+1 edges through m(e)
// genus-0 exceptional vertices.

struct SubdividedGraph {
    Graph base;
    std::map<std::string, int> m;
    Graph result;
    std::map<std::string, std::string> vertex_from_base;                 // result -> base vertex
    std::map<std::string, std::pair<std::string, int>> exceptional;      // result -> (base edge, 1..m(e))
    std::map<std::string, std::string> edge_origin;                      // result edge -> base edge

    // Interior vertices of the chain over one base edge, by position.
    std::vector<std::string> interior_vertices(const std::string& base_edge) const {
        std::vector<std::pair<int, std::string>> found;
        for (const auto& [vid, src] : exceptional)
            if (src.first == base_edge) found.push_back({src.second, vid});
        std::sort(found.begin(), found.end());
        std::vector<std::string> out;
        for (auto& [pos, vid] : found) out.push_back(vid);
        return out;
    }
};

inline SubdividedGraph subdivide(const Graph& g, const std::map<std::string, int>& m) {
    SubdividedGraph out;
    out.base = g;
    for (const auto& e : g.edges()) {
        auto it = m.find(e.id);
        const int k = it == m.end() ? 0 : it->second;
        if (k < 0) throw std::invalid_argument("subdivide: negative multiplicity on '" + e.id + "'");
        out.m[e.id] = k;
    }
    std::vector<Vertex> vertices = g.vertices();
    std::vector<Edge> edges;
    for (const auto& v : g.vertices()) out.vertex_from_base[v.id] = v.id;
    for (const auto& e : g.edges()) {
        const int k = out.m[e.id];
        if (k == 0) {
            edges.push_back(e);
            out.edge_origin[e.id] = e.id;
            continue;
        }
        std::string prev = e.end_a;
        for (int i = 1; i <= k; ++i) {
            const std::string vid = e.id + "@" + std::to_string(i);
            vertices.push_back({vid, 0});
            out.exceptional[vid] = {e.id, i};
            const std::string eid = e.id + "@s" + std::to_string(i - 1);
            edges.push_back({eid, prev, vid});
            out.edge_origin[eid] = e.id;
            prev = vid;
        }
        const std::string eid = e.id + "@s" + std::to_string(k);
        edges.push_back({eid, prev, e.end_b});
        out.edge_origin[eid] = e.id;
    }
    out.result = Graph(std::move(vertices), std::move(edges), g.legs());
    return out;
}

}  // namespace jacstab
