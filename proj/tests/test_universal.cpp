#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "jacstab/corpus.hpp"
#include "jacstab/universal.hpp"

using namespace jacstab;

namespace {

std::size_t find_object(const StableGraphCategory& cat, const Graph& shape) {
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        if (isomorphic(cat.objects[i], shape)) return i;
    FAIL("object not found in the category");
    return 0;
}

}  // namespace

TEST_CASE("stable graph categories at small (g,n)") {
    const auto g20 = enumerate_stable_graphs(2, 0);
    CHECK(g20.objects.size() == 7);
    for (const auto& [name, shape] : genus2_objects()) CHECK_NOTHROW(find_object(g20, shape));

    const auto g11 = enumerate_stable_graphs(1, 1);
    CHECK(g11.objects.size() == 2);

    const auto g03 = enumerate_stable_graphs(0, 3);
    CHECK(g03.objects.size() == 1);
    CHECK(g03.objects[0].legs().size() == 3);

    CHECK_THROWS_AS(enumerate_stable_graphs(1, 0), std::invalid_argument);  // 2g-2+n = 0
    CHECK_THROWS_AS(enumerate_stable_graphs(5, 0), std::invalid_argument);
}

TEST_CASE("category objects are stable, correct-genus, pairwise distinct") {
    for (const auto& [g, n] : std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {1, 2}, {0, 4}}) {
        const auto cat = enumerate_stable_graphs(g, n);
        for (std::size_t i = 0; i < cat.objects.size(); ++i) {
            const Graph& obj = cat.objects[i];
            CHECK(graph_genus(obj) == static_cast<std::size_t>(g));
            CHECK(obj.legs().size() == static_cast<std::size_t>(n));
            for (const auto& v : obj.vertices())
                CHECK(2 * v.genus - 2 + obj.valence(v.id) + obj.leg_count(v.id) > 0);
            for (std::size_t j = i + 1; j < cat.objects.size(); ++j)
                CHECK_FALSE(isomorphic(cat.objects[i], cat.objects[j]));
        }
    }
}

TEST_CASE("morphisms are valid and closed under composition") {
    const auto cat = enumerate_stable_graphs(2, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        for (std::size_t j = 0; j < cat.objects.size(); ++j)
            for (const auto& f : cat.morphisms[i][j]) {
                ++total;
                CHECK(morphism_error(cat.objects[i], cat.objects[j], f).empty());
            }
    CHECK(total > 0);
    // Spot-check composition closure.
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
        for (std::size_t j = 0; j < cat.objects.size(); ++j)
            for (const auto& f : cat.morphisms[i][j])
                for (std::size_t k = 0; k < cat.objects.size(); ++k)
                    for (const auto& h : cat.morphisms[j][k]) {
                        const GraphMorphism fh = compose(f, h);
                        bool present = false;
                        for (const auto& m : cat.morphisms[i][k]) present = present || m == fh;
                        CHECK(present);
                    }
}

TEST_CASE("vine subsets") {
    const auto g20 = enumerate_stable_graphs(2, 0);
    const auto v20 = vine_subsets(g20);
    CHECK(v20.two_vertex.size() == 2);  // the two-vertex vine and theta
    CHECK(v20.asymmetric.empty());      // both admit the swap
    CHECK(v20.one_edge.size() == 1);

    const auto g30 = enumerate_stable_graphs(3, 0);
    const auto v30 = vine_subsets(g30);
    const std::size_t vine12 = find_object(g30, Graph({{"a", 1}, {"b", 2}}, {{"e", "a", "b"}}));
    CHECK(std::count(v30.asymmetric.begin(), v30.asymmetric.end(), vine12) == 1);

    const auto g12 = enumerate_stable_graphs(1, 2);
    const auto v12 = vine_subsets(g12);
    const std::size_t split = find_object(
        g12, Graph({{"a", 0}, {"b", 0}}, {{"e1", "a", "b"}, {"e2", "a", "b"}},
                   {{"p1", "a", 1}, {"p2", "b", 2}}));
    // The swap would exchange the leg anchors, so the object sits in T'.
    CHECK(std::count(v12.asymmetric.begin(), v12.asymmetric.end(), split) == 1);
}

TEST_CASE("symmetric trivalent graphs") {
    const auto s2 = symmetric_trivalent_graph(2);
    CHECK(isomorphic(s2.graph, theta_graph()));
    CHECK(s2.cycle_edges.size() == 2);

    const auto s3 = symmetric_trivalent_graph(3);
    CHECK(s3.graph.vertex_count() == 4);
    CHECK(s3.graph.edge_count() == 6);
    for (const auto& v : s3.graph.vertices()) CHECK(s3.graph.valence(v.id) == 3);
    CHECK(isomorphic(s3.graph, complete4_graph()));

    for (int g = 2; g <= 4; ++g)
        CHECK(graph_genus(symmetric_trivalent_graph(g).graph) == static_cast<std::size_t>(g));
    CHECK_THROWS_AS(symmetric_trivalent_graph(1), std::invalid_argument);
}

TEST_CASE("tree values from vine data") {
    // Three genus-1 vertices in a path, constant prescription a: (a, d-2a, a).
    const Graph p3 = path3_graph();
    const SpanningSubgraph tree = full_subgraph(p3);
    const VineDatum datum{Graph({{"a", 1}, {"b", 2}}, {{"e", "a", "b"}}), 2};
    const auto solved = solve_tree_values(p3, tree, {datum}, 5);
    REQUIRE(solved.value.has_value());
    CHECK(*solved.value == make_multidegree(p3, {2, 1, 2}));

    // A two-vertex asymmetric vine with its own edge as the tree.
    const Graph vine(Graph({{"v1", 1}, {"v2", 2}}, {{"e1", "v1", "v2"}, {"e2", "v1", "v2"}}));
    const VineDatum self{vine, -1};
    const auto direct = solve_tree_values(vine, SpanningSubgraph(vine, {"e1"}), {self}, 0);
    REQUIRE(direct.value.has_value());
    CHECK(*direct.value == make_multidegree(vine, {-1, 0}));

    // All-symmetric contractions at odd degree: parity blocks the solve.
    const Graph th = theta_graph();
    const auto blocked = solve_tree_values(th, SpanningSubgraph(th, {"e1"}), {}, 1);
    CHECK_FALSE(blocked.value.has_value());
    CHECK(blocked.diagnostic.find("no integer solution") != std::string::npos);

    // The same system at even degree solves.
    const auto fine = solve_tree_values(th, SpanningSubgraph(th, {"e1"}), {}, 2);
    REQUIRE(fine.value.has_value());
    CHECK(*fine.value == make_multidegree(th, {0, 0}));
}

TEST_CASE("tree values round-trip through contraction sums") {
    const Graph p3 = path3_graph();
    const VineDatum datum{Graph({{"a", 1}, {"b", 2}}, {{"e", "a", "b"}}), 1};
    const auto solved = solve_tree_values(p3, full_subgraph(p3), {datum}, 4);
    REQUIRE(solved.value.has_value());
    std::map<std::vector<std::string>, Multidegree> tree_values;
    tree_values[p3.edge_ids()] = *solved.value;
    const auto extended = extend_from_trees(p3, 4, tree_values);
    REQUIRE(extended.has_value());
    // Contract either tree edge: the sum over the preimage of the genus-1
    // vertex reproduces the prescribed value.
    for (const auto& split : p3.edge_ids()) {
        std::set<std::string> others;
        for (const auto& e : p3.edge_ids())
            if (e != split) others.insert(e);
        const auto con = contract(p3, others);
        const auto isos = isomorphisms(con.graph, datum.graph);
        REQUIRE_FALSE(isos.empty());
        const std::string target_first = first_vine_vertex(datum.graph);
        long long sum = 0;
        for (const auto& [v, merged] : con.morphism.vertex_map)
            if (isos.front().vertex_map.at(merged) == target_first)
                sum += solved.value->values.at(v);
        CHECK(sum == datum.alpha);
    }
}

TEST_CASE("universal search in genus 2") {
    const auto cat = enumerate_stable_graphs(2, 0);

    const auto found0 = universal_search(cat, 0, 4);
    CHECK_FALSE(found0.empty());
    const std::size_t theta_index = find_object(cat, theta_graph());
    for (const auto& u : found0) {
        const Graph& th = cat.objects[theta_index];
        const auto trees = spanning_trees(th);
        for (const auto& tree : trees) {
            const auto fiber = u.per_object[theta_index].fiber(tree.kept_edges);
            REQUIRE(fiber.size() == 1);
            CHECK(fiber.front() == make_multidegree(th, {-1, -1}));  // lambda = -1 family
        }
    }

    CHECK(universal_search(cat, 1, 4).empty());
    CHECK(universal_search(cat, 1, 6).empty());
}

TEST_CASE("universal families are automorphism-invariant") {
    const auto cat = enumerate_stable_graphs(2, 0);
    for (const auto& u : universal_search(cat, 2, 5))
        for (std::size_t i = 0; i < cat.objects.size(); ++i)
            for (const auto& a : cat.morphisms[i][i])
                CHECK(pushforward_compatible(u.per_object[i], u.per_object[i], a).pass());
}

TEST_CASE("universal search in genus 1 with one marking") {
    const auto cat = enumerate_stable_graphs(1, 1);
    const auto found = universal_search(cat, 0, 2);
    REQUIRE(found.size() == 1);
    // Both objects carry their unique assignment, which is induced by the
    // unique degree-0 polarization on each.
    for (std::size_t i = 0; i < cat.objects.size(); ++i) {
        Polarization phi;
        const Rat share = Rat(0);
        for (const auto& v : cat.objects[i].vertices()) phi.values[v.id] = share;
        CHECK(found[0].per_object[i] == assignment_from_polarization(cat.objects[i], phi));
    }
}

TEST_CASE("degree obstruction") {
    CHECK_FALSE(is_degree_obstructed(2, 0));  // gcd(-1, 2) = 1
    CHECK(is_degree_obstructed(2, 1));        // gcd(0, 2) = 2
    CHECK_FALSE(is_degree_obstructed(2, 2));
    CHECK(is_degree_obstructed(3, 2));  // gcd(0, 4) = 4, cross-validated on the 4-cycle
    CHECK_FALSE(is_degree_obstructed(3, 1));
    CHECK_THROWS_AS(is_degree_obstructed(1, 0), std::invalid_argument);
}

TEST_CASE("strong and weak compatibility of polarization families") {
    const auto cat = enumerate_stable_graphs(2, 0);
    std::vector<Polarization> canonical;
    for (const auto& obj : cat.objects) canonical.push_back(canonical_polarization(obj, 0));
    const auto report = check_polarization_family(canonical, cat);
    CHECK(report.strong);
    CHECK(report.weak);

    // Skewing theta's weight breaks both directions and the report says where.
    std::vector<Polarization> skewed = canonical;
    const std::size_t theta_index = find_object(cat, theta_graph());
    skewed[theta_index].values.begin()->second += 1;
    skewed[theta_index].values.rbegin()->second -= 1;
    const auto broken = check_polarization_family(skewed, cat);
    CHECK_FALSE(broken.strong);
    CHECK_FALSE(broken.weak);
    CHECK_FALSE(broken.report.findings.empty());

    // A single-object category is trivially compatible both ways.
    const auto g03 = enumerate_stable_graphs(0, 3);
    std::vector<Polarization> lone;
    Polarization phi;
    for (const auto& v : g03.objects[0].vertices()) phi.values[v.id] = Rat(1);
    lone.push_back(phi);
    const auto trivial = check_polarization_family(lone, g03);
    CHECK(trivial.strong);
    CHECK(trivial.weak);
}
