#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "jacstab/corpus.hpp"
#include "jacstab/graph.hpp"
#include "jacstab/graph_ops.hpp"

using namespace jacstab;

namespace {

Graph four_cycle() {
    return Graph({{"v1", 0}, {"v2", 0}, {"v3", 0}, {"v4", 0}},
                 {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}, {"e3", "v3", "v4"}, {"e4", "v1", "v4"}});
}

Graph loop_vertex(int loops, int genus = 0) {
    std::vector<Edge> edges;
    for (int i = 1; i <= loops; ++i) edges.push_back({"e" + std::to_string(i), "v1", "v1"});
    return Graph({{"v1", genus}}, std::move(edges));
}

Graph disconnected_pair() {
    return Graph({{"v1", 0}, {"v2", 0}}, {});
}

}  // namespace

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(Graph({{"v1", 0}, {"v1", 1}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Graph({{"v1", 0}}, {{"e1", "v1", "vX"}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph({{"v1", 0}}, {}, {{"p1", "v1", 2}}), std::invalid_argument);
    CHECK_NOTHROW(Graph({{"v1", 0}}, {{"e1", "v1", "v1"}}, {{"p1", "v1", 1}}));
}

TEST_CASE("first betti number") {
    CHECK(first_betti(Graph({{"v1", 0}}, {})) == 0);
    CHECK(first_betti(theta_graph()) == 2);
    CHECK(first_betti(four_cycle()) == 1);
}

TEST_CASE("graph genus") {
    CHECK(graph_genus(Graph({{"v1", 2}}, {})) == 2);
    CHECK(graph_genus(theta_graph()) == 2);
    CHECK(graph_genus(dumbbell_graph()) == 2);
    CHECK_THROWS_AS(graph_genus(disconnected_pair()), std::invalid_argument);
}

TEST_CASE("spanning subgraph enumeration") {
    // banana(2): the edgeless subset is disconnected, three survive.
    CHECK(spanning_subgraphs(banana_graph(2), true).size() == 3);
    // Loops never disconnect.
    CHECK(spanning_subgraphs(loop_vertex(1), true).size() == 2);
    // theta: 2^3 subsets minus the edgeless one.
    const auto subs = spanning_subgraphs(theta_graph(), true);
    CHECK(subs.size() == 7);
    std::vector<std::vector<std::string>> order;
    for (const auto& s : subs) order.push_back(s.kept_edges);
    const std::vector<std::vector<std::string>> expected = {
        {"e1"}, {"e1", "e2"}, {"e1", "e2", "e3"}, {"e1", "e3"}, {"e2"}, {"e2", "e3"}, {"e3"}};
    CHECK(order == expected);
}

TEST_CASE("complexity") {
    const Graph b2 = banana_graph(2);
    SpanningSubgraph disconnected(b2, {});
    CHECK(complexity(disconnected) == 0);
    CHECK(complexity_by_enumeration(disconnected) == 0);
    CHECK(complexity(theta_graph()) == 3);
    const Graph k4 = complete4_graph();
    CHECK(complexity(k4) == 16);
    CHECK(complexity_by_enumeration(full_subgraph(k4)) == 16);
    // Loops are dropped, not rejected.
    CHECK(complexity(dumbbell_graph()) == 1);
}

TEST_CASE("determinant and enumeration agree on random subgraphs") {
    std::mt19937 rng(42);
    for (const auto& [name, g] : corpus_graphs()) {
        const auto ids = g.edge_ids();
        for (int round = 0; round < 10; ++round) {
            std::vector<std::string> kept;
            for (const auto& e : ids)
                if (rng() % 2) kept.push_back(e);
            SpanningSubgraph sub(g, kept);
            CHECK(complexity(sub) == complexity_by_enumeration(sub));
        }
    }
}

TEST_CASE("subdivision") {
    const Graph b2 = banana_graph(2);
    std::map<std::string, int> ones{{"e1", 1}, {"e2", 1}};
    const SubdividedGraph sub = subdivide(b2, ones);
    CHECK(sub.result.vertex_count() == 4);
    CHECK(sub.result.edge_count() == 4);
    CHECK(isomorphic(sub.result, four_cycle()));
    CHECK(sub.exceptional.size() == 2);
    CHECK(sub.interior_vertices("e1") == std::vector<std::string>{"e1@1"});

    const SubdividedGraph trivial = subdivide(theta_graph(), {});
    CHECK(trivial.result == theta_graph());

    const SubdividedGraph looped = subdivide(loop_vertex(1), {{"e1", 2}});
    Graph triangle({{"a", 0}, {"b", 0}, {"c", 0}}, {{"x", "a", "b"}, {"y", "b", "c"}, {"z", "a", "c"}});
    CHECK(isomorphic(looped.result, triangle));
}

TEST_CASE("subdivision counts") {
    for (const auto& [name, g] : corpus_graphs()) {
        std::map<std::string, int> ones;
        for (const auto& e : g.edges()) ones[e.id] = 1;
        const SubdividedGraph sub = subdivide(g, ones);
        CHECK(sub.result.edge_count() == 2 * g.edge_count());
        CHECK(sub.result.vertex_count() == g.vertex_count() + g.edge_count());
    }
}

TEST_CASE("contraction") {
    const Graph b2 = banana_graph(2);
    const auto con = contract(b2, {"e1"});
    CHECK(con.graph.vertex_count() == 1);
    CHECK(con.graph.edge_count() == 1);
    CHECK(con.graph.is_loop(con.graph.edge("e2")));
    CHECK(con.graph.genus_of("v1") == 0);
    CHECK(morphism_error(b2, con.graph, con.morphism).empty());

    const auto identity = contract(b2, {});
    CHECK(identity.graph == b2);
    CHECK(identity.morphism.contracted_edges.empty());
    for (const auto& [v, w] : identity.morphism.vertex_map) CHECK(v == w);

    Graph triangle({{"v1", 0}, {"v2", 0}, {"v3", 0}},
                   {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}, {"e3", "v1", "v3"}});
    const auto twice = contract(triangle, {"e1", "e2"});
    CHECK(twice.graph.vertex_count() == 1);
    CHECK(twice.graph.edge_count() == 1);
    CHECK(twice.graph.is_loop(twice.graph.edge("e3")));

    // A contracted loop bumps the genus.
    const auto loop_con = contract(dumbbell_graph(), {"e2"});
    CHECK(loop_con.graph.genus_of("v1") == 1);
    CHECK(morphism_error(dumbbell_graph(), loop_con.graph, loop_con.morphism).empty());
}

TEST_CASE("betti additivity and genus preservation under contraction") {
    std::mt19937 rng(7);
    for (const auto& [name, g] : corpus_graphs()) {
        const auto ids = g.edge_ids();
        for (int round = 0; round < 8; ++round) {
            std::set<std::string> subset;
            for (const auto& e : ids)
                if (rng() % 2) subset.insert(e);
            const auto con = contract(g, subset);
            const std::size_t b1_contracted =
                subset.size() + component_count(g, {subset.begin(), subset.end()}) - g.vertex_count();
            CHECK(first_betti(g) == first_betti(con.graph) + b1_contracted);
            CHECK(graph_genus(g) == graph_genus(con.graph));
            CHECK(morphism_error(g, con.graph, con.morphism).empty());
        }
    }
}

TEST_CASE("cut partition") {
    const auto theta_cut = cut_partition(theta_graph(), {"v1"});
    CHECK(theta_cut.inside.empty());
    CHECK(theta_cut.outside.empty());
    CHECK(theta_cut.crossing.size() == 3);

    const auto bell = cut_partition(dumbbell_graph(), {"v1"});
    CHECK(bell.inside == std::vector<std::string>{"e2"});
    CHECK(bell.outside == std::vector<std::string>{"e3"});
    CHECK(bell.crossing == std::vector<std::string>{"e1"});

    const auto cyc = cut_partition(four_cycle(), {"v1", "v2"});
    CHECK(cyc.inside.size() == 1);
    CHECK(cyc.outside.size() == 1);
    CHECK(cyc.crossing.size() == 2);

    CHECK_THROWS_AS(cut_partition(theta_graph(), {}), std::invalid_argument);
    CHECK_THROWS_AS(cut_partition(theta_graph(), {"v1", "v2"}), std::invalid_argument);
}

TEST_CASE("isomorphisms") {
    const auto autos = automorphisms(theta_graph());
    std::set<std::map<std::string, std::string>> vertex_maps;
    for (const auto& a : autos) {
        vertex_maps.insert(a.vertex_map);
        CHECK(morphism_error(theta_graph(), theta_graph(), a).empty());
    }
    CHECK(vertex_maps.size() == 2);
    CHECK(autos.size() == 12);  // 2 vertex maps x 3! edge matchings

    Graph vine12({{"v1", 1}, {"v2", 2}}, {{"e1", "v1", "v2"}});
    const auto only_id = automorphisms(vine12);
    for (const auto& a : only_id)
        for (const auto& [v, w] : a.vertex_map) CHECK(v == w);
    CHECK(only_id.size() == 1);

    CHECK(isomorphisms(banana_graph(2), path3_graph()).empty());
}

TEST_CASE("leg-respecting isomorphisms") {
    Graph two_legs({{"v1", 0}, {"v2", 0}},
                   {{"e1", "v1", "v2"}, {"e2", "v1", "v2"}},
                   {{"p1", "v1", 1}, {"p2", "v2", 2}});
    // The vertex swap would move leg 1 to the wrong anchor.
    for (const auto& a : automorphisms(two_legs))
        for (const auto& [v, w] : a.vertex_map) CHECK(v == w);
    CHECK(automorphisms(two_legs).size() == 2);  // identity on vertices, e1/e2 may swap
}

TEST_CASE("separating edges") {
    CHECK(has_separating_edge(dumbbell_graph()));
    CHECK_FALSE(has_separating_edge(theta_graph()));
    CHECK_FALSE(has_separating_edge(loop_vertex(2)));
}
