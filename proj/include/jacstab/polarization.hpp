#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "jacstab/assignment.hpp"
#include "jacstab/chip_firing.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/graph_ops.hpp"
#include "jacstab/numeric.hpp"

namespace jacstab {

// Exact-rational vertex weights with a fixed total.
struct Polarization {
    std::map<std::string, Rat> values;

    Rat total() const {
        Rat t = 0;
        for (const auto& [v, x] : values) t += x;
        return t;
    }
    auto operator<=>(const Polarization&) const = default;
};

inline void check_anchoring(const Graph& g, const Polarization& phi) {
    if (phi.values.size() != g.vertex_count())
        throw std::invalid_argument("polarization key set does not match the vertex set");
    for (const auto& v : g.vertices())
        if (!phi.values.count(v.id))
            throw std::invalid_argument("polarization misses vertex '" + v.id + "'");
}

enum class Verdict { stable, strictly_semistable, unstable };

struct StabilityVerdict {
    Verdict verdict = Verdict::stable;
    std::vector<std::string> witness;  // vertex subset achieving equality/violation; empty iff stable
};

namespace detail {

// Shared evaluation of the cut inequality for one (graph, phi, subgraph)
// triple, cleared of denominators: for every proper nonempty V,
//   |2 den sum_V(d) - 2 sum_V(phi_num) + den (2 mi + cm)| <= den ck
// where mi counts missing edges inside V, cm missing crossing edges and ck
// kept crossing edges. Loops sit inside their side, never in the cut.
class StabilityEvaluator {
public:
    StabilityEvaluator(const Graph& g, const Polarization& phi, const SpanningSubgraph& G)
        : graph_(&g) {
        check_anchoring(g, phi);
        if (G.parent != &g) throw std::invalid_argument("evaluator: subgraph has a different parent");
        n_ = g.vertex_count();
        if (n_ > 20) throw std::invalid_argument("evaluator: graph too large");
        den_ = 1;
        for (const auto& [v, x] : phi.values) den_ = den_ / gcd(den_, rat_den(x)) * rat_den(x);
        std::vector<Int> phi_num(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const Rat x = phi.values.at(g.vertices()[i].id);
            phi_num[i] = rat_num(x) * (den_ / rat_den(x));
        }
        const std::size_t masks = std::size_t(1) << n_;
        shift_.assign(masks, 0);
        rhs_.assign(masks, 0);
        for (std::size_t mask = 1; mask + 1 < masks; ++mask) {
            Int sum_phi = 0;
            for (std::size_t i = 0; i < n_; ++i)
                if (mask & (std::size_t(1) << i)) sum_phi += phi_num[i];
            long long mi = 0, cm = 0, ck = 0;
            for (const auto& e : g.edges()) {
                const bool kept = G.keeps(e.id);
                const bool a_in = mask & (std::size_t(1) << g.vertex_index(e.end_a));
                const bool b_in = mask & (std::size_t(1) << g.vertex_index(e.end_b));
                if (a_in && b_in) {
                    if (!kept) ++mi;
                } else if (a_in != b_in) {
                    if (kept)
                        ++ck;
                    else
                        ++cm;
                }
            }
            shift_[mask] = -2 * sum_phi + den_ * (2 * mi + cm);
            rhs_[mask] = den_ * ck;
        }
    }

    StabilityVerdict classify(const Multidegree& d) const {
        StabilityVerdict out;
        const std::size_t masks = std::size_t(1) << n_;
        std::vector<long long> dv(n_);
        for (std::size_t i = 0; i < n_; ++i) dv[i] = d.values.at(graph_->vertices()[i].id);
        std::size_t first_tie = 0;
        for (std::size_t mask = 1; mask + 1 < masks; ++mask) {
            long long sum_d = 0;
            for (std::size_t i = 0; i < n_; ++i)
                if (mask & (std::size_t(1) << i)) sum_d += dv[i];
            Int lhs = abs(2 * den_ * sum_d + shift_[mask]);
            if (lhs > rhs_[mask]) {
                out.verdict = Verdict::unstable;
                out.witness = subset_ids(mask);
                return out;
            }
            if (lhs == rhs_[mask] && first_tie == 0) first_tie = mask;
        }
        if (first_tie != 0) {
            out.verdict = Verdict::strictly_semistable;
            out.witness = subset_ids(first_tie);
        }
        return out;
    }

private:
    std::vector<std::string> subset_ids(std::size_t mask) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n_; ++i)
            if (mask & (std::size_t(1) << i)) out.push_back(graph_->vertices()[i].id);
        return out;
    }

    const Graph* graph_;
    std::size_t n_ = 0;
    Int den_;
    std::vector<Int> shift_;
    std::vector<Int> rhs_;
};

inline long long integer_total_or_throw(const Polarization& phi) {
    const Rat t = phi.total();
    if (!is_integer(t)) throw std::invalid_argument("polarization total is not an integer");
    return rat_num(t).convert_to<long long>();
}

}  // namespace detail

inline StabilityVerdict classify(const Graph& g, const Polarization& phi, const SpanningSubgraph& G,
                                 const Multidegree& d) {
    check_anchoring(g, d);
    const long long total = detail::integer_total_or_throw(phi);
    if (d.total() != total - static_cast<long long>(G.missing_count()))
        throw std::invalid_argument("classify: multidegree has the wrong total degree");
    return detail::StabilityEvaluator(g, phi, G).classify(d);
}

// All semistable multidegrees on G, enumerated inside the sound box
// [ceil(phi(v)) - val(v) - 1, floor(phi(v)) + val(v) + 1] and filtered.
inline std::vector<Multidegree> semistable_set(const Graph& g, const Polarization& phi,
                                               const SpanningSubgraph& G, long long box_margin = 1) {
    const long long total = detail::integer_total_or_throw(phi);
    const long long want = total - static_cast<long long>(G.missing_count());
    detail::StabilityEvaluator eval(g, phi, G);
    const std::size_t n = g.vertex_count();
    std::vector<long long> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& vid = g.vertices()[i].id;
        const Rat x = phi.values.at(vid);
        const long long val = g.valence(vid);
        lo[i] = ceil_rat(x).convert_to<long long>() - val - box_margin;
        hi[i] = floor_rat(x).convert_to<long long>() + val + box_margin;
    }
    std::vector<Multidegree> out;
    std::vector<long long> acc(n);
    std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long sum) {
        if (i == n) {
            if (sum != want) return;
            Multidegree d = make_multidegree(g, acc);
            if (eval.classify(d).verdict != Verdict::unstable) out.push_back(std::move(d));
            return;
        }
        long long rest_lo = 0, rest_hi = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            rest_lo += lo[j];
            rest_hi += hi[j];
        }
        for (long long v = lo[i]; v <= hi[i]; ++v) {
            const long long rest = want - sum - v;
            if (rest < rest_lo || rest > rest_hi) continue;
            acc[i] = v;
            rec(i + 1, sum + v);
        }
    };
    rec(0, 0);
    return out;
}

struct NondegeneracyWitness {
    std::vector<std::string> subgraph;  // kept edges
    Multidegree degree;
    std::vector<std::string> subset;
};

struct NondegeneracyResult {
    bool nondegenerate = true;
    std::optional<NondegeneracyWitness> witness;
};

// Nondegenerate <=> no strictly semistable multidegree on any spanning
// subgraph, disconnected ones included. Subgraphs are scanned from the full
// graph downwards so a witness sits on the largest degenerate stratum.
inline NondegeneracyResult is_nondegenerate(const Graph& g, const Polarization& phi) {
    detail::integer_total_or_throw(phi);
    auto subgraphs = spanning_subgraphs(g, false);
    std::stable_sort(subgraphs.begin(), subgraphs.end(),
                     [](const SpanningSubgraph& a, const SpanningSubgraph& b) {
                         return a.kept_edges.size() > b.kept_edges.size();
                     });
    for (const auto& sub : subgraphs) {
        detail::StabilityEvaluator eval(g, phi, sub);
        for (const auto& d : semistable_set(g, phi, sub)) {
            const auto verdict = eval.classify(d);
            if (verdict.verdict == Verdict::strictly_semistable)
                return {false, NondegeneracyWitness{sub.kept_edges, d, verdict.witness}};
        }
    }
    return {true, std::nullopt};
}

// The induced stability assignment of a nondegenerate polarization: the
// semistable sets over the connected spanning subgraphs.
inline StabilityAssignment assignment_from_polarization(const Graph& g, const Polarization& phi) {
    const auto check = is_nondegenerate(g, phi);
    if (!check.nondegenerate)
        throw std::invalid_argument("assignment_from_polarization: degenerate polarization (witness on " +
                                    show_edges(check.witness->subgraph) + " at " +
                                    show(check.witness->degree) + ")");
    const long long total = detail::integer_total_or_throw(phi);
    std::set<AssignmentEntry> entries;
    for (const auto& sub : spanning_subgraphs(g, true))
        for (const auto& d : semistable_set(g, phi, sub)) entries.insert({sub.kept_edges, d});
    return StabilityAssignment(g, total, std::move(entries));
}

// d/(2g-2) * (2 genus(v) - 2 + valence(v)); defined for graph genus >= 2.
inline Polarization canonical_polarization(const Graph& g, long long degree) {
    const std::size_t genus = graph_genus(g);
    if (genus < 2) throw std::invalid_argument("canonical_polarization: graph genus must be >= 2");
    const Rat scale(Int(degree), Int(2 * static_cast<long long>(genus) - 2));
    Polarization phi;
    for (const auto& v : g.vertices())
        phi.values[v.id] = scale * Rat(2 * v.genus - 2 + g.valence(v.id));
    if (phi.total() != Rat(degree))
        throw std::logic_error("canonical_polarization: total check failed");
    return phi;
}

// (g + |V|)/(2(g + |V|) - 2) * (2 genus(v) + valence(v)) - 1; total = g.
inline Polarization break_divisor_polarization(const Graph& g) {
    if (!is_connected(g)) throw std::invalid_argument("break_divisor_polarization: graph is disconnected");
    const long long genus = static_cast<long long>(graph_genus(g));
    const long long nv = static_cast<long long>(g.vertex_count());
    if (2 * (genus + nv) - 2 == 0)
        throw std::invalid_argument("break_divisor_polarization: undefined for a single genus-0 vertex");
    const Rat scale(Int(genus + nv), Int(2 * (genus + nv) - 2));
    Polarization phi;
    for (const auto& v : g.vertices())
        phi.values[v.id] = scale * Rat(2 * v.genus + g.valence(v.id)) - 1;
    if (phi.total() != Rat(genus))
        throw std::logic_error("break_divisor_polarization: total check failed");
    return phi;
}

// Multidegrees genus(v) + one chip per surplus edge of G at a chosen
// endpoint, over all spanning trees of G and all orientations.
inline std::set<Multidegree> break_divisors(const Graph& g, const SpanningSubgraph& G) {
    if (!is_connected(G)) throw std::invalid_argument("break_divisors: subgraph is disconnected");
    std::set<Multidegree> out;
    Multidegree genus_part;
    for (const auto& v : g.vertices()) genus_part.values[v.id] = v.genus;
    std::vector<std::string> nonloop;
    for (const auto& id : G.kept_edges)
        if (!g.is_loop(g.edge(id))) nonloop.push_back(id);
    const std::size_t n = g.vertex_count();
    std::vector<std::string> pick;
    std::function<void(std::size_t)> trees = [&](std::size_t from) {
        if (pick.size() == n - 1) {
            if (component_count(g, pick) != 1) return;
            std::set<std::string> tree_edges(pick.begin(), pick.end());
            std::vector<std::string> surplus;
            for (const auto& id : G.kept_edges)
                if (!tree_edges.count(id)) surplus.push_back(id);
            std::function<void(std::size_t, Multidegree)> orient = [&](std::size_t i, Multidegree acc) {
                if (i == surplus.size()) {
                    out.insert(std::move(acc));
                    return;
                }
                const Edge& e = g.edge(surplus[i]);
                orient(i + 1, acc.plus_chip(e.end_a));
                if (e.end_a != e.end_b) orient(i + 1, acc.plus_chip(e.end_b));
            };
            orient(0, genus_part);
            return;
        }
        for (std::size_t i = from; i < nonloop.size(); ++i) {
            if (nonloop.size() - i < (n - 1) - pick.size()) break;
            pick.push_back(nonloop[i]);
            trees(i + 1);
            pick.pop_back();
        }
    };
    trees(0);
    return out;
}

// The break-divisor assignment of degree g(Gamma).
inline StabilityAssignment break_divisor_assignment(const Graph& g) {
    const long long genus = static_cast<long long>(graph_genus(g));
    std::set<AssignmentEntry> entries;
    for (const auto& sub : spanning_subgraphs(g, true))
        for (const auto& d : break_divisors(g, sub)) entries.insert({sub.kept_edges, d});
    return StabilityAssignment(g, genus, std::move(entries));
}

// Seeded rational polarization with denominator 2|E|p for a seeded prime p,
// retried until nondegenerate; deterministic per seed, explicit error when
// the retry budget runs out.
inline Polarization random_nondegenerate(const Graph& g, long long degree, unsigned long long seed,
                                         int budget = 64) {
    static const long long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                       59, 61, 67, 71, 73, 79, 83, 89, 97};
    constexpr std::size_t num_primes = sizeof(primes) / sizeof(primes[0]);
    std::mt19937_64 rng(seed);
    const long long edges = std::max<long long>(1, static_cast<long long>(g.edge_count()));
    const long long spread = 2 + std::abs(degree);
    for (int attempt = 0; attempt < budget; ++attempt) {
        const long long p = primes[(seed + static_cast<unsigned long long>(attempt)) % num_primes];
        const long long den = 2 * edges * p;
        std::uniform_int_distribution<long long> draw(-spread * den, spread * den);
        Polarization phi;
        long long sum = 0;
        const auto ids = g.vertex_ids();
        for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
            const long long num = draw(rng);
            sum += num;
            phi.values[ids[i]] = Rat(Int(num), Int(den));
        }
        phi.values[ids.back()] = Rat(Int(degree * den - sum), Int(den));
        if (is_nondegenerate(g, phi).nondegenerate) return phi;
    }
    throw std::runtime_error("random_nondegenerate: retry budget of " + std::to_string(budget) +
                             " attempts exhausted");
}

}  // namespace jacstab
