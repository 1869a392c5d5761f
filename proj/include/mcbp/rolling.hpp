#pragma once

#include <vector>

#include "mcbp/config.hpp"
#include "mcbp/model.hpp"

namespace mcbp {

// Overlapping client cluster produced by the angular sweep around the depot.
struct Cluster {
    std::vector<int> clients;  // client node ids
    double angle_from = 0.0;   // radians
    double angle_to = 0.0;
};

// Sorts clients by polar angle around the depot and slides a window of
// max_size clients, advancing ceil(step_fraction * max_size) positions per
// step with wrap-around, so every client lands in several clusters.
std::vector<Cluster> build_clusters(const Instance& inst, int min_size, int max_size,
                                    double step_fraction);

// Rolling-space branch-and-price: per-cluster pricing in aggregate-compartment
// mode against a shared dual snapshot, selective loading checks before pool
// insertion, and a search tree over the pooled columns. The result is a
// feasible upper bound; the reported bound is pool-restricted.
Solution solve_rs_bnp(const Instance& inst, const SolverConfig& cfg);

}  // namespace mcbp
