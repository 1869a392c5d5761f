#pragma once

#include <string>
#include <vector>

#include "mcbp/model.hpp"

namespace mcbp {

// Constructive labeling heuristic: grows one route at a time from the depot,
// always taking the cheapest feasible extension, fixes the route when nothing
// fits, and repeats on the remaining clients.
struct LhOutcome {
    bool feasible = true;
    std::vector<Route> routes;
    std::string unassignable;  // client id when infeasible
};

LhOutcome lh_routes(const Instance& inst);

Solution solve_lh(const Instance& inst);

}  // namespace mcbp
