#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace jacstab {

// Genus-labelled multigraph with loops and labelled legs: the dual graph of
// a nodal curve. Vertices, edges and legs are identified by string tokens;
// parallel edges are distinguishable by id. Everything is sorted by id so
// all downstream output is byte-reproducible.
struct Vertex {
    std::string id;
    int genus = 0;
    auto operator<=>(const Vertex&) const = default;
};

struct Edge {
    std::string id;
    std::string end_a;  // unordered pair; loops have end_a == end_b
    std::string end_b;
    auto operator<=>(const Edge&) const = default;
};

struct Leg {
    std::string id;
    std::string vertex;
    int label = 0;  // labels are a permutation of 1..n
    auto operator<=>(const Leg&) const = default;
};

class Graph {
public:
    Graph() = default;

    Graph(std::vector<Vertex> vertices, std::vector<Edge> edges, std::vector<Leg> legs = {})
        : vertices_(std::move(vertices)), edges_(std::move(edges)), legs_(std::move(legs)) {
        std::sort(vertices_.begin(), vertices_.end());
        for (auto& e : edges_)
            if (e.end_b < e.end_a) std::swap(e.end_a, e.end_b);  // endpoint pairs are unordered
        std::sort(edges_.begin(), edges_.end());
        std::sort(legs_.begin(), legs_.end());
        validate();
    }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Leg>& legs() const { return legs_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_vertex(const std::string& id) const {
        return std::binary_search(vertices_.begin(), vertices_.end(), Vertex{id, 0},
                                  [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    }

    std::size_t vertex_index(const std::string& id) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                                   [](const Vertex& v, const std::string& s) { return v.id < s; });
        if (it == vertices_.end() || it->id != id)
            throw std::invalid_argument("unknown vertex '" + id + "'");
        return static_cast<std::size_t>(it - vertices_.begin());
    }

    const Edge& edge(const std::string& id) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                                   [](const Edge& e, const std::string& s) { return e.id < s; });
        if (it == edges_.end() || it->id != id)
            throw std::invalid_argument("unknown edge '" + id + "'");
        return *it;
    }

    int genus_of(const std::string& vertex_id) const { return vertices_[vertex_index(vertex_id)].genus; }

    bool is_loop(const Edge& e) const { return e.end_a == e.end_b; }

    // Valence counts loops twice; legs are not counted.
    int valence(const std::string& vertex_id) const {
        int val = 0;
        for (const auto& e : edges_) {
            if (e.end_a == vertex_id) ++val;
            if (e.end_b == vertex_id) ++val;
        }
        return val;
    }

    int leg_count(const std::string& vertex_id) const {
        int n = 0;
        for (const auto& l : legs_)
            if (l.vertex == vertex_id) ++n;
        return n;
    }

    std::vector<std::string> vertex_ids() const {
        std::vector<std::string> out;
        out.reserve(vertices_.size());
        for (const auto& v : vertices_) out.push_back(v.id);
        return out;
    }

    std::vector<std::string> edge_ids() const {
        std::vector<std::string> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_) out.push_back(e.id);
        return out;
    }

private:
    void validate() const {
        std::set<std::string> vids;
        for (const auto& v : vertices_) {
            if (v.genus < 0) throw std::invalid_argument("vertex '" + v.id + "' has negative genus");
            if (!vids.insert(v.id).second)
                throw std::invalid_argument("duplicate vertex id '" + v.id + "'");
        }
        if (vertices_.empty()) throw std::invalid_argument("graph has no vertices");
        std::set<std::string> eids;
        for (const auto& e : edges_) {
            if (!eids.insert(e.id).second)
                throw std::invalid_argument("duplicate edge id '" + e.id + "'");
            if (!vids.count(e.end_a) || !vids.count(e.end_b))
                throw std::invalid_argument("edge '" + e.id + "' has a dangling endpoint");
        }
        std::set<std::string> lids;
        std::set<int> labels;
        for (const auto& l : legs_) {
            if (!lids.insert(l.id).second)
                throw std::invalid_argument("duplicate leg id '" + l.id + "'");
            if (!vids.count(l.vertex))
                throw std::invalid_argument("leg '" + l.id + "' has a dangling anchor");
            labels.insert(l.label);
        }
        for (int want = 1; want <= static_cast<int>(legs_.size()); ++want)
            if (!labels.count(want))
                throw std::invalid_argument("leg labels are not a permutation of 1..n");
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<Leg> legs_;
};

inline bool operator==(const Graph& a, const Graph& b) {
    return a.vertices() == b.vertices() && a.edges() == b.edges() && a.legs() == b.legs();
}

// Spanning subgraph: same vertex set, a subset of the parent's edges.
// The parent graph must outlive the subgraph.
struct SpanningSubgraph {
    const Graph* parent = nullptr;
    std::vector<std::string> kept_edges;  // sorted

    SpanningSubgraph() = default;
    SpanningSubgraph(const Graph& g, std::vector<std::string> kept) : parent(&g), kept_edges(std::move(kept)) {
        std::sort(kept_edges.begin(), kept_edges.end());
        kept_edges.erase(std::unique(kept_edges.begin(), kept_edges.end()), kept_edges.end());
        for (const auto& e : kept_edges) parent->edge(e);  // throws on unknown ids
    }
    SpanningSubgraph(Graph&&, std::vector<std::string>) = delete;  // parent must outlive the view

    bool keeps(const std::string& edge_id) const {
        return std::binary_search(kept_edges.begin(), kept_edges.end(), edge_id);
    }

    std::vector<std::string> missing_edges() const {
        std::vector<std::string> out;
        for (const auto& e : parent->edges())
            if (!keeps(e.id)) out.push_back(e.id);
        return out;
    }

    std::size_t missing_count() const { return parent->edge_count() - kept_edges.size(); }
};

inline SpanningSubgraph full_subgraph(const Graph& g) { return SpanningSubgraph(g, g.edge_ids()); }
inline SpanningSubgraph full_subgraph(Graph&&) = delete;

namespace detail {

// Union-find over vertex indices.
struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
    std::vector<std::size_t> parent;
};

}  // namespace detail

inline std::size_t component_count(const Graph& g, const std::vector<std::string>& kept) {
    detail::DisjointSets ds(g.vertex_count());
    std::size_t comps = g.vertex_count();
    for (const auto& id : kept) {
        const Edge& e = g.edge(id);
        if (ds.unite(g.vertex_index(e.end_a), g.vertex_index(e.end_b))) --comps;
    }
    return comps;
}

inline bool is_connected(const SpanningSubgraph& sub) {
    return component_count(*sub.parent, sub.kept_edges) == 1;
}

inline bool is_connected(const Graph& g) { return component_count(g, g.edge_ids()) == 1; }

// b1 = |E| - |V| + #components.
inline std::size_t first_betti(const Graph& g) {
    return g.edge_count() - g.vertex_count() + component_count(g, g.edge_ids());
}

inline std::size_t first_betti(const SpanningSubgraph& sub) {
    return sub.kept_edges.size() - sub.parent->vertex_count() +
           component_count(*sub.parent, sub.kept_edges);
}

// g(Gamma) = b1(Gamma) + sum of vertex genera; connected graphs only.
inline std::size_t graph_genus(const Graph& g) {
    if (!is_connected(g)) throw std::invalid_argument("graph_genus: graph is disconnected");
    std::size_t total = first_betti(g);
    for (const auto& v : g.vertices()) total += static_cast<std::size_t>(v.genus);
    return total;
}

struct CutPartition {
    std::vector<std::string> inside;    // edges within Gamma(V); loops at V live here
    std::vector<std::string> outside;   // edges within Gamma(V^c)
    std::vector<std::string> crossing;  // E(V, V^c); never contains loops
};

inline CutPartition cut_partition(const Graph& g, const std::set<std::string>& vertex_subset) {
    if (vertex_subset.empty() || vertex_subset.size() >= g.vertex_count())
        throw std::invalid_argument("cut_partition: vertex subset must be proper and nonempty");
    for (const auto& v : vertex_subset) g.vertex_index(v);
    CutPartition out;
    for (const auto& e : g.edges()) {
        const bool a_in = vertex_subset.count(e.end_a) > 0;
        const bool b_in = vertex_subset.count(e.end_b) > 0;
        if (a_in && b_in)
            out.inside.push_back(e.id);
        else if (!a_in && !b_in)
            out.outside.push_back(e.id);
        else
            out.crossing.push_back(e.id);
    }
    return out;
}

}  // namespace jacstab
