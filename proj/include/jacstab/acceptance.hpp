#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "jacstab/assignment.hpp"
#include "jacstab/chip_firing.hpp"
#include "jacstab/corpus.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/graph_ops.hpp"
#include "jacstab/io.hpp"
#include "jacstab/parallel.hpp"
#include "jacstab/polarization.hpp"
#include "jacstab/report.hpp"
#include "jacstab/universal.hpp"

namespace jacstab {

struct CriterionResult {
    int index = 0;
    std::string name;
    double seconds = 0.0;
    double budget_seconds = 0.0;  // 0 = no budget
    std::vector<Finding> findings;

    bool pass() const {
        if (!findings.empty()) return false;
        return budget_seconds == 0.0 || seconds < budget_seconds;
    }
};

using CorpusGraphs = std::vector<std::pair<std::string, Graph>>;

inline CorpusGraphs load_corpus_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path graphs = fs::path(dir) / "graphs";
    if (!fs::is_directory(graphs))
        throw std::runtime_error("corpus directory '" + dir + "' has no graphs/ subdirectory");
    CorpusGraphs out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(graphs))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back({f.stem().string(), graph_from_json(load_json_file(f.string()))});
    return out;
}

// The shipped fixtures must match the in-tree builders exactly.
inline VerifyReport verify_corpus_dir(const std::string& dir) {
    VerifyReport report;
    CorpusGraphs loaded;
    try {
        loaded = load_corpus_dir(dir);
    } catch (const std::exception& err) {
        report.fail("corpus-io", err.what());
        return report;
    }
    const CorpusGraphs expected = corpus_graphs();
    for (const auto& [name, g] : expected) {
        bool found = false;
        for (const auto& [lname, lg] : loaded)
            if (lname == name) {
                found = true;
                if (!(lg == g)) report.fail("corpus-drift", "fixture '" + name + "' differs from the builder");
            }
        if (!found) report.fail("corpus-missing", "fixture '" + name + "' is absent");
    }
    return report;
}

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// 1. Smith order = matrix-tree determinant = brute-force spanning-tree count
//    on every connected multigraph with <= 4 vertices and <= 6 edges.
inline CriterionResult criterion_kirchhoff() {
    detail::Stopwatch clock;
    CriterionResult r{1, "Kirchhoff cross-check", 0.0, 60.0, {}};
    long long checked = 0;
    for (int k = 1; k <= 4; ++k) {
        std::vector<Vertex> vertices;
        for (int i = 0; i < k; ++i) vertices.push_back({"v" + std::to_string(i + 1), 0});
        std::vector<std::pair<int, int>> slots;
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) slots.push_back({a, b});
        std::vector<int> counts(slots.size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t si, int left) {
            if (si == slots.size()) {
                std::vector<Edge> edges;
                for (std::size_t s = 0; s < slots.size(); ++s)
                    for (int c = 0; c < counts[s]; ++c)
                        edges.push_back({"e" + std::to_string(edges.size() + 1),
                                         vertices[slots[s].first].id, vertices[slots[s].second].id});
                Graph g(vertices, edges);
                if (!is_connected(g)) return;
                ++checked;
                const SpanningSubgraph whole = full_subgraph(g);
                const Int det = complexity(whole);
                const Int brute = complexity_by_enumeration(whole);
                const Int order = JacobianGroup(whole).order();
                if (det != brute || det != order)
                    r.findings.push_back({"kirchhoff", "mismatch on |V|=" + std::to_string(k) + ", |E|=" +
                                                           std::to_string(edges.size()) + ": det=" +
                                                           det.str() + " brute=" + brute.str() +
                                                           " order=" + order.str()});
                return;
            }
            for (int c = 0; c <= left; ++c) {
                counts[si] = c;
                rec(si + 1, left - c);
            }
            counts[si] = 0;
        };
        rec(0, 6);
    }
    if (checked < 100) r.findings.push_back({"kirchhoff", "suspiciously few graphs enumerated"});
    r.seconds = clock.seconds();
    return r;
}

// 2. >= 100 seeded nondegenerate polarizations across the corpus: the induced
//    assignment verifies and every connected fiber has exactly c(G) elements.
inline CriterionResult criterion_polarization_soundness(const CorpusGraphs& corpus) {
    detail::Stopwatch clock;
    CriterionResult r{2, "polarization soundness", 0.0, 120.0, {}};
    struct Job {
        std::string name;
        const Graph* graph;
        long long degree;
        unsigned long long seed;
    };
    std::vector<Job> jobs;
    for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
        const auto& [name, g] = corpus[gi];
        const long long genus = static_cast<long long>(graph_genus(g));
        for (int which = 0; which < 2; ++which) {
            const long long d = which == 0 ? 0 : genus;
            for (unsigned long long s = 1; s <= 3; ++s)
                jobs.push_back({name, &g, d, 1000 * (gi + 1) + 100 * which + s});
        }
    }
    if (jobs.size() < 100)
        r.findings.push_back({"soundness", "only " + std::to_string(jobs.size()) + " polarizations"});
    std::vector<std::vector<Finding>> found(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        const Polarization phi = random_nondegenerate(*job.graph, job.degree, job.seed);
        const StabilityAssignment a = assignment_from_polarization(*job.graph, phi);
        auto describe = [&](const char* what) {
            return std::string(what) + " fails on " + job.name + " (d=" + std::to_string(job.degree) +
                   ", seed=" + std::to_string(job.seed) + ")";
        };
        if (!verify_chip_adding(a).pass()) found[i].push_back({"soundness", describe("chip-adding")});
        if (!verify_minimal_complete(a).pass())
            found[i].push_back({"soundness", describe("minimal completeness")});
        for (const auto& sub : spanning_subgraphs(*job.graph, true))
            if (Int(a.fiber(sub.kept_edges).size()) != complexity(sub))
                found[i].push_back({"soundness", describe("fiber count")});
    });
    for (auto& f : found) r.findings.insert(r.findings.end(), f.begin(), f.end());
    r.seconds = clock.seconds();
    return r;
}

// 3. Exhaustive enumeration on banana(t) matches the lambda-indexed family.
inline CriterionResult criterion_vine_classification() {
    detail::Stopwatch clock;
    CriterionResult r{3, "vine classification", 0.0, 0.0, {}};
    const long long window = 10;
    for (int t = 1; t <= 5; ++t) {
        const Graph g = banana_graph(t);
        for (long long d = 0; d <= 1; ++d) {
            const auto found = enumerate_assignments(g, d, window);
            const long long centre = d + 1 - t;
            const long long lo = std::max(-window, centre - window);
            const long long hi = std::min(window, centre + window);
            std::set<long long> expected;
            for (long long l = lo; l <= hi; ++l) expected.insert(l);
            std::set<long long> got;
            for (const auto& a : found) {
                const auto tree_fiber = a.fiber({"e1"});
                if (tree_fiber.size() != 1) {
                    r.findings.push_back({"vine", "tree fiber not a singleton on banana" + std::to_string(t)});
                    continue;
                }
                const long long lambda = tree_fiber.front().values.at("v1");
                got.insert(lambda);
                bool shape_ok = tree_fiber.front().values.at("v2") == d + 1 - lambda - t;
                for (int i = 2; i <= t && shape_ok; ++i)
                    shape_ok = a.fiber({"e" + std::to_string(i)}) == tree_fiber;
                std::vector<Multidegree> top;
                for (long long k = 0; k < t; ++k)
                    top.push_back(make_multidegree(g, {lambda + k, d - lambda - k}));
                std::sort(top.begin(), top.end());
                if (a.fiber(g.edge_ids()) != top) shape_ok = false;
                if (!shape_ok)
                    r.findings.push_back({"vine", "banana" + std::to_string(t) + " d=" + std::to_string(d) +
                                                      " lambda=" + std::to_string(lambda) +
                                                      " has the wrong shape"});
            }
            if (got != expected)
                r.findings.push_back({"vine", "banana" + std::to_string(t) + " d=" + std::to_string(d) +
                                                  ": found " + std::to_string(got.size()) +
                                                  " lambdas, expected " + std::to_string(expected.size())});
        }
    }
    r.seconds = clock.seconds();
    return r;
}

// 4. Break divisors: counts equal complexities, the assignment verifies, and
//    it equals the induced assignment of the break-divisor polarization.
inline CriterionResult criterion_break_divisors(const CorpusGraphs& corpus) {
    detail::Stopwatch clock;
    CriterionResult r{4, "break divisors", 0.0, 0.0, {}};
    std::vector<std::vector<Finding>> found(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t gi) {
        const auto& [name, g] = corpus[gi];
        for (const auto& sub : spanning_subgraphs(g, true)) {
            if (Int(break_divisors(g, sub).size()) != complexity(sub))
                found[gi].push_back({"break", name + ": |break divisors| != c on " +
                                                  show_edges(sub.kept_edges)});
        }
        const StabilityAssignment ibd = break_divisor_assignment(g);
        if (!is_stability_assignment(ibd))
            found[gi].push_back({"break", name + ": break-divisor assignment fails verification"});
        const StabilityAssignment induced =
            assignment_from_polarization(g, break_divisor_polarization(g));
        if (!(ibd == induced))
            found[gi].push_back({"break", name + ": break divisors differ from the induced assignment"});
    });
    for (auto& f : found) r.findings.insert(r.findings.end(), f.begin(), f.end());
    r.seconds = clock.seconds();
    return r;
}

// 5. Lifts to subdivisions: for all m in {0,1,2}^E the lift count equals the
//    subdivided complexity (determinant and weighted-sum routes) and the
//    lifted classes are pairwise distinct.
inline CriterionResult criterion_lift(const CorpusGraphs& corpus) {
    detail::Stopwatch clock;
    CriterionResult r{5, "lift to subdivisions", 0.0, 300.0, {}};
    for (const auto& [name, g] : corpus) {
        const StabilityAssignment sigma = break_divisor_assignment(g);
        const auto subs = spanning_subgraphs(g, true);
        std::vector<std::pair<std::vector<std::string>, Int>> complexities;
        for (const auto& sub : subs) complexities.push_back({sub.missing_edges(), complexity(sub)});
        const auto edge_ids = g.edge_ids();
        std::size_t total = 1;
        for (std::size_t i = 0; i < edge_ids.size(); ++i) total *= 3;
        std::vector<std::vector<Finding>> found(total);
        const std::string graph_name = name;
        parallel_for(total, [&](std::size_t index) {
            std::map<std::string, int> m;
            std::size_t rest = index;
            for (const auto& e : edge_ids) {
                m[e] = static_cast<int>(rest % 3);
                rest /= 3;
            }
            const SubdividedGraph sub = subdivide(g, m);
            auto report = verify_lifted_classes(sigma, sub);
            for (auto& f : report.findings)
                found[index].push_back({"lift", graph_name + " m#" + std::to_string(index) + ": " +
                                                    f.detail});
            Int weighted = 0;
            for (const auto& [missing, c] : complexities) {
                Int factor = 1;
                for (const auto& e : missing) factor *= m.at(e);
                weighted += factor * c;
            }
            if (weighted != complexity(full_subgraph(sub.result)))
                found[index].push_back({"lift", graph_name + " m#" + std::to_string(index) +
                                                    ": weighted complexity sum mismatch"});
        });
        for (auto& f : found) r.findings.insert(r.findings.end(), f.begin(), f.end());
    }
    r.seconds = clock.seconds();
    return r;
}

// 6. Universal assignments of type (2,0): exist exactly for even d, and agree
//    with the canonical polarization on the objects without separating edges.
inline CriterionResult criterion_universal_genus2() {
    detail::Stopwatch clock;
    CriterionResult r{6, "genus-2 universal classification", 0.0, 600.0, {}};
    const StableGraphCategory cat = enumerate_stable_graphs(2, 0);
    for (long long d = 0; d <= 3; ++d) {
        const auto results = universal_search(cat, d, 6);
        const bool obstructed = is_degree_obstructed(2, d);
        if (results.empty() != obstructed) {
            r.findings.push_back({"universal", "d=" + std::to_string(d) + ": found " +
                                                   std::to_string(results.size()) +
                                                   " families, obstructed=" + (obstructed ? "yes" : "no")});
            continue;
        }
        if (obstructed) continue;
        for (std::size_t i = 0; i < cat.objects.size(); ++i) {
            if (has_separating_edge(cat.objects[i])) continue;
            const StabilityAssignment canonical =
                assignment_from_polarization(cat.objects[i], canonical_polarization(cat.objects[i], d));
            for (const auto& u : results)
                if (!(u.per_object[i] == canonical))
                    r.findings.push_back({"universal", "d=" + std::to_string(d) + ": object " +
                                                           std::to_string(i) +
                                                           " disagrees with the canonical assignment"});
        }
    }
    r.seconds = clock.seconds();
    return r;
}

// 7. The canonical polarization is nondegenerate exactly when d-g+1 and
//    2g-2 are coprime, on the four trivalent corpus graphs.
inline CriterionResult criterion_canonical_gcd(const CorpusGraphs& corpus) {
    detail::Stopwatch clock;
    CriterionResult r{7, "canonical nondegeneracy <=> gcd", 0.0, 0.0, {}};
    for (const auto& [name, g] : corpus) {
        if (name != "symtri2" && name != "symtri3" && name != "theta" && name != "dumbbell") continue;
        const long long genus = static_cast<long long>(graph_genus(g));
        for (long long d = 0; d <= 5; ++d) {
            const bool coprime = std::gcd(d - genus + 1, 2 * genus - 2) == 1;
            const bool nondeg = is_nondegenerate(g, canonical_polarization(g, d)).nondegenerate;
            if (coprime != nondeg)
                r.findings.push_back({"gcd", name + " d=" + std::to_string(d) + ": nondegenerate=" +
                                                 (nondeg ? "yes" : "no") + " but coprime=" +
                                                 (coprime ? "yes" : "no")});
        }
    }
    r.seconds = clock.seconds();
    return r;
}

// 8. Seeded closures of full spanning-tree seeds obey the counting bounds.
inline CriterionResult criterion_count_bounds(const CorpusGraphs& corpus) {
    detail::Stopwatch clock;
    CriterionResult r{8, "closure counting bounds", 0.0, 0.0, {}};
    std::vector<std::vector<Finding>> found(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t gi) {
        const auto& [name, g] = corpus[gi];
        const auto trees = spanning_trees(g);
        const auto ids = g.vertex_ids();
        for (unsigned long long seed = 1; seed <= 50; ++seed) {
            std::mt19937_64 rng(7919 * seed + gi);
            std::uniform_int_distribution<long long> draw(-3, 3);
            std::set<AssignmentEntry> seeds;
            for (const auto& tree : trees) {
                const long long want = -static_cast<long long>(tree.missing_count());
                Multidegree d;
                long long sum = 0;
                for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
                    d.values[ids[i]] = draw(rng);
                    sum += d.values[ids[i]];
                }
                d.values[ids.back()] = want - sum;
                seeds.insert({tree.kept_edges, d});
            }
            const StabilityAssignment closure =
                chip_adding_closure(StabilityAssignment(g, 0, std::move(seeds)));
            const auto report = check_complexity_bounds(closure);
            if (!report.pass())
                found[gi].push_back({"bounds", name + " seed=" + std::to_string(seed) + ": " +
                                                   report.findings.front().detail});
        }
    });
    for (auto& f : found) r.findings.insert(r.findings.end(), f.begin(), f.end());
    r.seconds = clock.seconds();
    return r;
}

inline std::vector<CriterionResult> run_acceptance(
    const CorpusGraphs& corpus, const std::function<void(const CriterionResult&)>& on_done = {}) {
    std::vector<CriterionResult> out;
    auto push = [&](CriterionResult r) {
        if (on_done) on_done(r);
        out.push_back(std::move(r));
    };
    push(criterion_kirchhoff());
    push(criterion_polarization_soundness(corpus));
    push(criterion_vine_classification());
    push(criterion_break_divisors(corpus));
    push(criterion_lift(corpus));
    push(criterion_universal_genus2());
    push(criterion_canonical_gcd(corpus));
    push(criterion_count_bounds(corpus));
    return out;
}

}  // namespace jacstab
