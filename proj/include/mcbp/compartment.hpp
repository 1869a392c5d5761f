#pragma once

#include <optional>
#include <vector>

#include "mcbp/model.hpp"

namespace mcbp {

// Client-to-compartment feasibility for one route: every client in exactly one
// compartment, item-compartment compatibility, per-compartment capacity and
// optional client cap, pairwise item-item compatibility inside a compartment.
// Solved exactly by backtracking.
struct AssignmentProblem {
    // client array indices (0-based), demands pulled from the instance
    std::vector<int> clients;
    const Instance* inst = nullptr;
};

// Returned assignment is aligned with p.clients: assignment[k] is the
// compartment of p.clients[k]. nullopt iff exhaustive search finds nothing.
std::optional<std::vector<int>> check_feasible(const AssignmentProblem& p);

// Convenience wrapper for a route's visit list (node indices). The returned
// loading is aligned with `visits`.
std::optional<std::vector<int>> check_route_loading(const Instance& inst,
                                                    const std::vector<int>& visits);

// Selective-check trigger: a route needs an explicit loading check when its
// total demand comes within kappa of the vehicle capacity, when it carries an
// incompatible client pair, or when any client is barred from some compartment.
bool needs_check(const Instance& inst, const std::vector<int>& visits, Milli kappa);

// Groups compartments with identical capacity, client cap and compatibility
// column; members of a class are interchangeable while equally loaded.
std::vector<int> compartment_classes(const VehicleType& veh);

}  // namespace mcbp
