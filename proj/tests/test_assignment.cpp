#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "jacstab/assignment.hpp"
#include "jacstab/corpus.hpp"
#include "jacstab/polarization.hpp"

using namespace jacstab;

namespace {

StabilityAssignment irreducible_assignment(int loops, long long degree) {
    std::vector<Edge> edges;
    for (int i = 1; i <= loops; ++i) edges.push_back({"e" + std::to_string(i), "v1", "v1"});
    Graph g({{"v1", 0}}, std::move(edges));
    std::set<AssignmentEntry> entries;
    for (const auto& sub : spanning_subgraphs(g, true))
        entries.insert({sub.kept_edges,
                        make_multidegree(g, {degree - static_cast<long long>(sub.missing_count())})});
    return StabilityAssignment(std::move(g), degree, std::move(entries));
}

StabilityAssignment theta_lambda(long long lambda, long long degree) {
    Graph th = theta_graph();
    std::map<std::vector<std::string>, Multidegree> tree_values;
    for (const auto& tree : spanning_trees(th))
        tree_values[tree.kept_edges] = make_multidegree(th, {lambda, degree - 2 - lambda});
    auto out = extend_from_trees(th, degree, tree_values);
    REQUIRE(out.has_value());
    return *out;
}

}  // namespace

TEST_CASE("assignment type invariants") {
    Graph b2 = banana_graph(2);
    // Wrong total degree for the subgraph.
    CHECK_THROWS_AS(StabilityAssignment(b2, 0, {{{"e1"}, make_multidegree(b2, {0, 0})}}),
                    std::invalid_argument);
    // Disconnected support.
    CHECK_THROWS_AS(StabilityAssignment(b2, 0, {{{}, make_multidegree(b2, {-1, -1})}}),
                    std::invalid_argument);
    CHECK_NOTHROW(StabilityAssignment(b2, 0, {{{"e1"}, make_multidegree(b2, {0, -1})}}));
}

TEST_CASE("chip-adding condition") {
    const StabilityAssignment vine = vine_lambda0_assignment();
    CHECK(verify_chip_adding(vine).pass());

    // Removing (full, (1,-1)) breaks the chip addition at v1 from both trees.
    Graph b2 = banana_graph(2);
    std::set<AssignmentEntry> entries;
    entries.insert({{"e1", "e2"}, make_multidegree(b2, {0, 0})});
    entries.insert({{"e1"}, make_multidegree(b2, {0, -1})});
    entries.insert({{"e2"}, make_multidegree(b2, {0, -1})});
    const auto report = verify_chip_adding(StabilityAssignment(b2, 0, entries));
    CHECK_FALSE(report.pass());
    CHECK(report.findings.size() == 2);
    for (const auto& f : report.findings) CHECK(f.code == "chip-adding");

    // Entries only on the full graph: no missing edges, vacuous pass.
    std::set<AssignmentEntry> top_only;
    top_only.insert({{"e1", "e2"}, make_multidegree(b2, {0, 0})});
    top_only.insert({{"e1", "e2"}, make_multidegree(b2, {1, -1})});
    CHECK(verify_chip_adding(StabilityAssignment(b2, 0, top_only)).pass());
}

TEST_CASE("minimal completeness condition") {
    CHECK(verify_minimal_complete(vine_lambda0_assignment()).pass());

    Graph b2 = banana_graph(2);
    // (2,-2) and (0,0) differ by a firing vector: minimality fails.
    std::set<AssignmentEntry> entries;
    entries.insert({{"e1", "e2"}, make_multidegree(b2, {0, 0})});
    entries.insert({{"e1", "e2"}, make_multidegree(b2, {2, -2})});
    entries.insert({{"e1"}, make_multidegree(b2, {0, -1})});
    entries.insert({{"e2"}, make_multidegree(b2, {0, -1})});
    const auto report = verify_minimal_complete(StabilityAssignment(b2, 0, entries));
    CHECK_FALSE(report.pass());
    bool saw_minimality = false;
    for (const auto& f : report.findings) saw_minimality = saw_minimality || f.code == "minimality";
    CHECK(saw_minimality);
}

TEST_CASE("stability assignment predicate") {
    CHECK(is_stability_assignment(vine_lambda0_assignment()));
    CHECK_FALSE(is_stability_assignment(StabilityAssignment(banana_graph(2), 0, {})));
    CHECK(is_stability_assignment(irreducible_assignment(3, 0)));
    CHECK(is_stability_assignment(irreducible_assignment(2, 5)));
}

TEST_CASE("chip-adding closure") {
    Graph b2 = banana_graph(2);
    std::set<AssignmentEntry> seed;
    seed.insert({{"e1"}, make_multidegree(b2, {0, -1})});
    seed.insert({{"e2"}, make_multidegree(b2, {0, -1})});
    const auto closed = chip_adding_closure(StabilityAssignment(b2, 0, seed));
    CHECK(closed == vine_lambda0_assignment());

    // A closed assignment is a fixed point.
    CHECK(chip_adding_closure(closed) == closed);

    // Closure of a single theta tree seed, frozen by hand.
    Graph th = theta_graph();
    std::set<AssignmentEntry> one;
    one.insert({{"e1"}, make_multidegree(th, {0, -2})});
    const auto grown = chip_adding_closure(StabilityAssignment(th, 0, one));
    std::set<AssignmentEntry> expected;
    expected.insert({{"e1"}, make_multidegree(th, {0, -2})});
    expected.insert({{"e1", "e2"}, make_multidegree(th, {1, -2})});
    expected.insert({{"e1", "e2"}, make_multidegree(th, {0, -1})});
    expected.insert({{"e1", "e3"}, make_multidegree(th, {1, -2})});
    expected.insert({{"e1", "e3"}, make_multidegree(th, {0, -1})});
    expected.insert({{"e1", "e2", "e3"}, make_multidegree(th, {2, -2})});
    expected.insert({{"e1", "e2", "e3"}, make_multidegree(th, {1, -1})});
    expected.insert({{"e1", "e2", "e3"}, make_multidegree(th, {0, 0})});
    CHECK(grown.entries() == expected);
}

TEST_CASE("closure is monotone") {
    Graph th = theta_graph();
    std::set<AssignmentEntry> small, large;
    small.insert({{"e1"}, make_multidegree(th, {0, -2})});
    large = small;
    large.insert({{"e2"}, make_multidegree(th, {-1, -1})});
    const auto closed_small = chip_adding_closure(StabilityAssignment(th, 0, small));
    const auto closed_large = chip_adding_closure(StabilityAssignment(th, 0, large));
    for (const auto& e : closed_small.entries()) CHECK(closed_large.entries().count(e) == 1);
}

TEST_CASE("extension from spanning trees") {
    Graph b2 = banana_graph(2);
    std::map<std::vector<std::string>, Multidegree> values;
    values[{"e1"}] = make_multidegree(b2, {0, -1});
    values[{"e2"}] = make_multidegree(b2, {0, -1});
    const auto good = extend_from_trees(b2, 0, values);
    REQUIRE(good.has_value());
    CHECK(*good == vine_lambda0_assignment());

    values[{"e2"}] = make_multidegree(b2, {5, -6});
    CHECK_FALSE(extend_from_trees(b2, 0, values).has_value());

    values[{"e2"}] = make_multidegree(b2, {0, 0});  // wrong total
    CHECK_THROWS_AS(extend_from_trees(b2, 0, values), std::invalid_argument);

    // A tree graph: the singleton assignment.
    Graph p3 = path3_graph();
    std::map<std::vector<std::string>, Multidegree> single;
    single[{"e1", "e2"}] = make_multidegree(p3, {1, 0, 2});
    const auto tree_case = extend_from_trees(p3, 3, single);
    REQUIRE(tree_case.has_value());
    CHECK(tree_case->entries().size() == 1);
}

TEST_CASE("counting bounds") {
    // Vine of type 3: counts (3,1,1,1) match complexities exactly.
    Graph b3 = banana_graph(3);
    std::map<std::vector<std::string>, Multidegree> values;
    for (const auto& tree : spanning_trees(b3)) values[tree.kept_edges] = make_multidegree(b3, {0, -2});
    const auto vine3 = extend_from_trees(b3, 0, values);
    REQUIRE(vine3.has_value());
    CHECK(check_complexity_bounds(*vine3).pass());
    CHECK(vine3->fiber(b3.edge_ids()).size() == 3);

    // Tree graph: 1 >= 1.
    Graph p3 = path3_graph();
    std::map<std::vector<std::string>, Multidegree> single;
    single[{"e1", "e2"}] = make_multidegree(p3, {0, 0, 0});
    CHECK(check_complexity_bounds(*extend_from_trees(p3, 0, single)).pass());

    // Closure of a single theta tree seed: two trees stay empty, which is a
    // precondition violation; above the seeded tree the bounds hold.
    Graph th = theta_graph();
    std::set<AssignmentEntry> one;
    one.insert({{"e1"}, make_multidegree(th, {0, -2})});
    const auto grown = chip_adding_closure(StabilityAssignment(th, 0, one));
    const auto report = check_complexity_bounds(grown);
    CHECK_FALSE(report.pass());
    for (const auto& f : report.findings) CHECK(f.code == "precondition");
    CHECK(report.findings.size() == 2);  // empty fibers over {e2} and {e3}
    for (const auto& sub : spanning_subgraphs(th, true))
        if (sub.keeps("e1")) CHECK(Int(grown.fiber(sub.kept_edges).size()) >= complexity(sub));
}

TEST_CASE("perturbations") {
    const Graph th = theta_graph();
    CHECK(perturbations(th, full_subgraph(th)) == std::set<Multidegree>{zero_multidegree(th)});

    const Graph b2 = banana_graph(2);
    CHECK(perturbations(b2, SpanningSubgraph(b2, {"e1"})) ==
          std::set<Multidegree>{make_multidegree(b2, {1, 0}), make_multidegree(b2, {0, 1})});

    CHECK(perturbations(th, SpanningSubgraph(th, {"e1"})) ==
          std::set<Multidegree>{make_multidegree(th, {2, 0}), make_multidegree(th, {1, 1}),
                                make_multidegree(th, {0, 2})});

    // A missing loop has a forced orientation.
    const Graph bell = dumbbell_graph();
    CHECK(perturbations(bell, SpanningSubgraph(bell, {"e1"})) ==
          std::set<Multidegree>{make_multidegree(bell, {1, 1})});
}

TEST_CASE("lifts to subdivisions") {
    const StabilityAssignment vine = vine_lambda0_assignment();
    const Graph& b2 = vine.graph();
    const SubdividedGraph ones = subdivide(b2, {{"e1", 1}, {"e2", 1}});
    const auto lifted = lift_to_subdivision(vine, ones);
    REQUIRE(lifted.size() == 4);
    auto lifted_degree = [&](long long v1, long long v2, long long x1, long long x2) {
        Multidegree d = zero_multidegree(ones.result);
        d.values.at("v1") = v1;
        d.values.at("v2") = v2;
        d.values.at("e1@1") = x1;
        d.values.at("e2@1") = x2;
        return d;
    };
    std::set<Multidegree> expected{lifted_degree(0, 0, 0, 0), lifted_degree(1, -1, 0, 0),
                                   lifted_degree(0, -1, 1, 0), lifted_degree(0, -1, 0, 1)};
    CHECK(std::set<Multidegree>(lifted.begin(), lifted.end()) == expected);

    // Unsubdivided edges admit no lifts for entries missing them.
    const SubdividedGraph zeros = subdivide(b2, {});
    const auto top_lifts = lift_to_subdivision(vine, zeros);
    CHECK(top_lifts.size() == 2);  // only the two entries on the full graph survive
}

TEST_CASE("lift counting identity") {
    std::mt19937 rng(3);
    for (const auto& g : {theta_graph(), banana_graph(3), dumbbell_graph()}) {
        const StabilityAssignment sigma = break_divisor_assignment(g);
        for (int round = 0; round < 6; ++round) {
            std::map<std::string, int> m;
            for (const auto& e : g.edges()) m[e.id] = static_cast<int>(rng() % 3);
            const SubdividedGraph sub = subdivide(g, m);
            long long expected = 0;
            for (const auto& entry : sigma.entries()) {
                long long factor = 1;
                for (const auto& e : SpanningSubgraph(g, entry.kept_edges).missing_edges())
                    factor *= m.at(e);
                expected += factor;
            }
            CHECK(Int(lift_to_subdivision(sigma, sub).size()) == expected);
        }
    }
}

TEST_CASE("lifted classes are minimal complete") {
    const StabilityAssignment vine = vine_lambda0_assignment();
    const SubdividedGraph ones = subdivide(vine.graph(), {{"e1", 1}, {"e2", 1}});
    CHECK(complexity(ones.result) == 4);
    CHECK(verify_lifted_classes(vine, ones).pass());

    const StabilityAssignment theta0 = theta_lambda(0, 0);
    const Graph& th = theta0.graph();
    const SubdividedGraph theta_ones = subdivide(th, {{"e1", 1}, {"e2", 1}, {"e3", 1}});
    CHECK(Int(lift_to_subdivision(theta0, theta_ones).size()) == 12);
    CHECK(complexity(theta_ones.result) == 12);
    CHECK(verify_lifted_classes(theta0, theta_ones).pass());

    // Tree graph with nothing subdivided: trivial pass.
    Graph p3 = path3_graph();
    std::map<std::vector<std::string>, Multidegree> single;
    single[{"e1", "e2"}] = make_multidegree(p3, {0, 0, 0});
    CHECK(verify_lifted_classes(*extend_from_trees(p3, 0, single), subdivide(p3, {})).pass());
}

TEST_CASE("pushforward compatibility") {
    const StabilityAssignment vine = vine_lambda0_assignment();
    const Graph& b2 = vine.graph();
    const auto con = contract(b2, {"e1"});
    const Graph& loop_graph = con.graph;

    std::set<AssignmentEntry> loop_entries;
    loop_entries.insert({{"e2"}, make_multidegree(loop_graph, {0})});
    loop_entries.insert({{}, make_multidegree(loop_graph, {-1})});
    const StabilityAssignment loop_target(loop_graph, 0, loop_entries);
    CHECK(is_stability_assignment(loop_target));
    CHECK(pushforward_compatible(vine, loop_target, con.morphism).pass());

    // Identity morphism: compatible exactly when the source is contained.
    const auto id = contract(b2, {});
    CHECK(pushforward_compatible(vine, vine, id.morphism).pass());
    std::set<AssignmentEntry> partial = vine.entries();
    partial.erase({{"e1"}, make_multidegree(b2, {0, -1})});
    const StabilityAssignment smaller(b2, 0, partial);
    CHECK_FALSE(pushforward_compatible(vine, smaller, id.morphism).pass());
    CHECK(pushforward_compatible(smaller, vine, id.morphism).pass());

    // Target missing the image of a tree entry.
    const StabilityAssignment truncated(loop_graph, 0,
                                        {{{"e2"}, make_multidegree(loop_graph, {0})}});
    CHECK_FALSE(pushforward_compatible(vine, truncated, con.morphism).pass());

    // Degree mismatch is an error, not a verdict.
    const StabilityAssignment degree1(loop_graph, 1,
                                      {{{"e2"}, make_multidegree(loop_graph, {1})},
                                       {{}, make_multidegree(loop_graph, {0})}});
    CHECK_THROWS_AS(pushforward_compatible(vine, degree1, con.morphism), std::invalid_argument);
}

TEST_CASE("enumeration inside a window") {
    const Graph b2 = banana_graph(2);
    const auto found = enumerate_assignments(b2, 0, 3);
    CHECK(found.size() == 6);
    std::set<long long> lambdas;
    for (const auto& a : found) {
        const auto tree = a.fiber({"e1"});
        REQUIRE(tree.size() == 1);
        lambdas.insert(tree.front().values.at("v1"));
        CHECK(a.fiber({"e2"}) == tree);
        CHECK(is_stability_assignment(a));
    }
    CHECK(lambdas == std::set<long long>{-3, -2, -1, 0, 1, 2});

    // One vertex with loops: exactly one assignment whatever the window.
    Graph loops({{"v1", 0}}, {{"e1", "v1", "v1"}, {"e2", "v1", "v1"}, {"e3", "v1", "v1"}});
    CHECK(enumerate_assignments(loops, 0, 2).size() == 1);
    CHECK(enumerate_assignments(loops, 4, 5).size() == 1);

    // On a cycle every found assignment covers all connected spanning
    // subgraphs (their fibers are nonempty).
    Graph c3({{"v1", 0}, {"v2", 0}, {"v3", 0}},
             {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}, {"e3", "v1", "v3"}});
    const auto on_cycle = enumerate_assignments(c3, 0, 2);
    CHECK_FALSE(on_cycle.empty());
    for (const auto& a : on_cycle)
        for (const auto& sub : spanning_subgraphs(c3, true))
            CHECK_FALSE(a.fiber(sub.kept_edges).empty());
}

TEST_CASE("enumerated fibers have exactly the complexity size") {
    for (const auto& g : {banana_graph(2), theta_graph(), dumbbell_graph()}) {
        for (const auto& a : enumerate_assignments(g, 0, 2))
            for (const auto& sub : spanning_subgraphs(g, true))
                CHECK(Int(a.fiber(sub.kept_edges).size()) == complexity(sub));
    }
}
