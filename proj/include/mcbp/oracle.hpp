#pragma once

#include <vector>

#include "mcbp/model.hpp"

namespace mcbp {

// Exhaustive ground truth for tiny instances. Enumerates every feasible route
// (all elementary visit sequences, all break-flag combinations, earliest
// reachable windows) accepted by the independent validator and loading
// checker, then solves the route-selection problem exactly by dynamic
// programming over client subsets.

// Throws std::invalid_argument when the instance exceeds 10 clients and
// std::runtime_error when the search tree exceeds the node cap (no silent
// truncation).
std::vector<Route> enumerate_routes(const Instance& inst, int max_len,
                                    long node_cap = 10'000'000);

struct PartitionResult {
    bool feasible = false;
    Milli objective = 0;
    std::vector<int> selected;  // indices into the route list
};

PartitionResult optimal_partition(const std::vector<Route>& routes, int n_clients);

Solution solve_oracle(const Instance& inst);

}  // namespace mcbp
