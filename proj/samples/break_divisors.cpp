// Break divisors on the complete graph K4: one orbit representative per
// spanning tree on every connected spanning subgraph, and the induced
// assignment coincides with the one cut out by the break-divisor weights.

#include <cstdio>

#include "jacstab/corpus.hpp"
#include "jacstab/polarization.hpp"

int main() {
    using namespace jacstab;
    const Graph k4 = complete4_graph();
    for (const auto& sub : spanning_subgraphs(k4, true)) {
        const auto divisors = break_divisors(k4, sub);
        std::printf("%-40s c=%-4s |break|=%zu\n", show_edges(sub.kept_edges).c_str(),
                    complexity(sub).str().c_str(), divisors.size());
    }
    const StabilityAssignment ibd = break_divisor_assignment(k4);
    const StabilityAssignment induced = assignment_from_polarization(k4, break_divisor_polarization(k4));
    std::printf("assignment verifies: %s, matches weights: %s\n",
                is_stability_assignment(ibd) ? "yes" : "no", ibd == induced ? "yes" : "no");
    return 0;
}
