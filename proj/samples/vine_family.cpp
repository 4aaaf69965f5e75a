// Enumerate the stability assignments of a two-vertex graph with t parallel
// edges and print the family, indexed by the spanning-tree value.

#include <cstdio>

#include "jacstab/assignment.hpp"
#include "jacstab/corpus.hpp"

int main() {
    using namespace jacstab;
    const Graph vine = banana_graph(3);
    for (const auto& a : enumerate_assignments(vine, 0, 2)) {
        const auto tree = a.fiber({"e1"});
        std::printf("tree value %s, %zu entries, top fiber:", show(tree.front()).c_str(),
                    a.entries().size());
        for (const auto& d : a.fiber(vine.edge_ids())) std::printf(" %s", show(d).c_str());
        std::printf("\n");
    }
    return 0;
}
