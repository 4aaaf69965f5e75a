#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacstab/graph.hpp"
#include "jacstab/graph_ops.hpp"
#include "jacstab/matrix.hpp"

namespace jacstab {

// Integer vector on the vertices of a fixed graph.
struct Multidegree {
    std::map<std::string, long long> values;

    long long total() const {
        long long t = 0;
        for (const auto& [v, x] : values) t += x;
        return t;
    }

    long long at(const std::string& v) const {
        auto it = values.find(v);
        if (it == values.end()) throw std::invalid_argument("multidegree misses vertex '" + v + "'");
        return it->second;
    }

    Multidegree plus_chip(const std::string& v) const {
        Multidegree out = *this;
        out.values.at(v) += 1;
        return out;
    }

    auto operator<=>(const Multidegree&) const = default;
};

inline Multidegree zero_multidegree(const Graph& g) {
    Multidegree d;
    for (const auto& v : g.vertices()) d.values[v.id] = 0;
    return d;
}

inline Multidegree make_multidegree(const Graph& g, const std::vector<long long>& by_sorted_vertex) {
    if (by_sorted_vertex.size() != g.vertex_count())
        throw std::invalid_argument("multidegree length mismatch");
    Multidegree d;
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
        d.values[g.vertices()[i].id] = by_sorted_vertex[i];
    return d;
}

inline void check_anchoring(const Graph& g, const Multidegree& d) {
    if (d.values.size() != g.vertex_count())
        throw std::invalid_argument("multidegree key set does not match the vertex set");
    for (const auto& v : g.vertices())
        if (!d.values.count(v.id))
            throw std::invalid_argument("multidegree misses vertex '" + v.id + "'");
}

inline Multidegree add(const Multidegree& a, const Multidegree& b) {
    Multidegree out = a;
    for (const auto& [v, x] : b.values) out.values.at(v) += x;
    return out;
}

inline Multidegree subtract(const Multidegree& a, const Multidegree& b) {
    Multidegree out = a;
    for (const auto& [v, x] : b.values) out.values.at(v) -= x;
    return out;
}

// Firing vector at v: loops contribute nothing.
inline Multidegree twister_vector(const SpanningSubgraph& G, const std::string& v) {
    const Graph& g = *G.parent;
    g.vertex_index(v);
    Multidegree d = zero_multidegree(g);
    for (const auto& id : G.kept_edges) {
        const Edge& e = g.edge(id);
        if (g.is_loop(e)) continue;
        if (e.end_a == v) {
            d.values[v] -= 1;
            d.values[e.end_b] += 1;
        } else if (e.end_b == v) {
            d.values[v] -= 1;
            d.values[e.end_a] += 1;
        }
    }
    return d;
}

// The finite group of degree-0 multidegrees modulo firing moves, presented
// through the Smith normal form of the reduced loop-free Laplacian. The base
// vertex is the lexicographically smallest one.
class JacobianGroup {
public:
    explicit JacobianGroup(const SpanningSubgraph& G) : graph_(G.parent) {
        if (!is_connected(G)) throw std::invalid_argument("jacobian_group: subgraph is disconnected");
        base_vertex_ = graph_->vertices().front().id;
        const std::size_t n = graph_->vertex_count();
        if (n > 1) {
            SmithForm sf = smith_normal_form(reduced_laplacian(G, 0));
            factors_ = std::move(sf.diagonal);
            left_ = std::move(sf.left);
            for (const auto& f : factors_)
                if (f == 0) throw std::logic_error("jacobian_group: singular reduced Laplacian");
        }
        order_ = 1;
        for (const auto& f : factors_) order_ *= f;
    }

    const std::string& base_vertex() const { return base_vertex_; }
    const std::vector<Int>& invariant_factors() const { return factors_; }
    Int order() const { return order_; }

    // Group coordinates of a degree-0 multidegree: drop the base coordinate,
    // apply the left Smith transform, reduce each entry mod its factor.
    std::vector<Int> coordinates(const Multidegree& degree_zero) const {
        check_anchoring(*graph_, degree_zero);
        if (degree_zero.total() != 0)
            throw std::invalid_argument("coordinates: multidegree has nonzero total");
        const std::size_t n = graph_->vertex_count();
        std::vector<Int> x;
        for (std::size_t i = 1; i < n; ++i) x.push_back(degree_zero.values.at(graph_->vertices()[i].id));
        std::vector<Int> out(factors_.size(), 0);
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < x.size(); ++j) acc += left_[i][j] * x[j];
            acc %= factors_[i];
            if (acc < 0) acc += factors_[i];
            out[i] = acc;
        }
        return out;
    }

    bool is_trivial_class(const Multidegree& degree_zero) const {
        for (const auto& c : coordinates(degree_zero))
            if (c != 0) return false;
        return true;
    }

private:
    const Graph* graph_;
    std::string base_vertex_;
    std::vector<Int> factors_;
    IntMatrix left_;
    Int order_;
};

inline JacobianGroup jacobian_group(const SpanningSubgraph& G) { return JacobianGroup(G); }

// The unique base-reduced representative of the class of `d`: non-negative
// off the base and superstable there (Dhar's burning criterion). Firing
// moves only; exact throughout.
inline Multidegree reduce(const SpanningSubgraph& G, const Multidegree& d, const std::string& base) {
    const Graph& g = *G.parent;
    check_anchoring(g, d);
    if (!is_connected(G)) throw std::invalid_argument("reduce: subgraph is disconnected");
    const std::size_t n = g.vertex_count();
    const std::size_t base_idx = g.vertex_index(base);
    if (n == 1) return d;

    // Non-loop adjacency multiplicities.
    std::vector<std::vector<long long>> adj(n, std::vector<long long>(n, 0));
    for (const auto& id : G.kept_edges) {
        const Edge& e = g.edge(id);
        if (g.is_loop(e)) continue;
        const std::size_t a = g.vertex_index(e.end_a);
        const std::size_t b = g.vertex_index(e.end_b);
        adj[a][b] += 1;
        adj[b][a] += 1;
    }
    std::vector<long long> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += adj[i][j];

    std::vector<Int> chips(n);
    for (std::size_t i = 0; i < n; ++i) chips[i] = d.values.at(g.vertices()[i].id);

    // Clear all debt off the base with a multiple of c(G) * (1,..,1,1-n),
    // a firing-lattice vector: its class has order dividing the group order.
    // The multiplicity-firing loop below then drains the pile geometrically.
    Int worst = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (i != base_idx && -chips[i] > worst) worst = -chips[i];
    if (worst > 0) {
        const Int c = complexity(G);
        Int mult = (worst + c - 1) / c;
        for (std::size_t i = 0; i < n; ++i)
            if (i != base_idx) chips[i] += mult * c;
        chips[base_idx] -= mult * c * Int(static_cast<long long>(n - 1));
    }

    // Dhar: burn from the base; fire the unburnt set with multiplicity.
    for (long long guard = 0;; ++guard) {
        if (guard > 2'000'000) throw std::logic_error("reduce: burning loop failed to converge");
        std::vector<bool> burnt(n, false);
        burnt[base_idx] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (burnt[v]) continue;
                long long incoming = 0;
                for (std::size_t w = 0; w < n; ++w)
                    if (burnt[w]) incoming += adj[v][w];
                if (chips[v] < incoming) {
                    burnt[v] = true;
                    grew = true;
                }
            }
        }
        std::vector<std::size_t> unburnt;
        for (std::size_t v = 0; v < n; ++v)
            if (!burnt[v]) unburnt.push_back(v);
        if (unburnt.empty()) break;
        Int k = 0;
        std::vector<long long> out_deg(n, 0);
        for (const auto& v : unburnt) {
            for (std::size_t w = 0; w < n; ++w)
                if (burnt[w]) out_deg[v] += adj[v][w];
            if (out_deg[v] > 0) {
                Int cand = chips[v] / out_deg[v];
                if (k == 0 || cand < k) k = cand;
            }
        }
        if (k <= 0) throw std::logic_error("reduce: burning invariant violated");
        for (const auto& v : unburnt) chips[v] -= k * out_deg[v];
        for (std::size_t w = 0; w < n; ++w) {
            if (!burnt[w]) continue;
            long long in = 0;
            for (const auto& v : unburnt) in += adj[w][v];
            chips[w] += k * in;
        }
    }

    Multidegree result;
    for (std::size_t i = 0; i < n; ++i)
        result.values[g.vertices()[i].id] = chips[i].convert_to<long long>();
    return result;
}

inline Multidegree reduce(const SpanningSubgraph& G, const Multidegree& d) {
    return reduce(G, d, G.parent->vertices().front().id);
}

// True iff d1 - d2 lies in the firing lattice of G. Two independent routes
// (Smith coordinates and reduced-representative comparison) with mandatory
// agreement; different totals are never equivalent.
inline bool equivalent(const SpanningSubgraph& G, const Multidegree& d1, const Multidegree& d2) {
    check_anchoring(*G.parent, d1);
    check_anchoring(*G.parent, d2);
    if (d1.total() != d2.total()) return false;
    const JacobianGroup jg(G);
    const bool by_class = jg.is_trivial_class(subtract(d1, d2));
    const bool by_reduction = reduce(G, d1, jg.base_vertex()) == reduce(G, d2, jg.base_vertex());
    if (by_class != by_reduction)
        throw std::logic_error("equivalent: the two equivalence routes disagree");
    return by_class;
}

// Cut-counting certificate that two equal-degree multidegrees lie in
// different firing orbits: |sum_W(d1 - d2)| < |E(W, W^c)| for every W with
// both induced sides connected. Vacuously true when d1 == d2.
inline bool separation_certificate(const Graph& g, const Multidegree& d1, const Multidegree& d2) {
    check_anchoring(g, d1);
    check_anchoring(g, d2);
    if (d1.total() != d2.total())
        throw std::invalid_argument("separation_certificate: totals differ");
    const std::size_t n = g.vertex_count();
    if (n > 25) throw std::invalid_argument("separation_certificate: graph too large");
    if (n < 2) return true;
    std::vector<long long> diff(n);
    for (std::size_t i = 0; i < n; ++i)
        diff[i] = d1.values.at(g.vertices()[i].id) - d2.values.at(g.vertices()[i].id);

    std::vector<std::pair<std::size_t, std::size_t>> ends;
    for (const auto& e : g.edges())
        ends.push_back({g.vertex_index(e.end_a), g.vertex_index(e.end_b)});

    auto side_connected = [&](unsigned long mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ul << i)) members.push_back(i);
        if (members.empty()) return false;
        detail::DisjointSets ds(n);
        std::size_t comps = members.size();
        for (const auto& [a, b] : ends) {
            if (!(mask & (1ul << a)) || !(mask & (1ul << b))) continue;
            if (ds.unite(a, b)) --comps;
        }
        return comps == 1;
    };

    const unsigned long all = (1ul << n) - 1;
    for (unsigned long mask = 1; mask < all; ++mask) {
        if (!side_connected(mask) || !side_connected(all & ~mask)) continue;
        long long sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ul << i)) sum += diff[i];
        long long cut = 0;
        for (const auto& [a, b] : ends) {
            const bool ain = mask & (1ul << a);
            const bool bin = mask & (1ul << b);
            if (ain != bin) ++cut;
        }
        if (!(std::abs(sum) < cut)) return false;
    }
    return true;
}

}  // namespace jacstab
