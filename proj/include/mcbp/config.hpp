#pragma once

#include <string>

#include "mcbp/fixed.hpp"
#include "mcbp/pricing.hpp"

namespace mcbp {

struct SolverConfig {
    // master problem
    bool covering = true;

    // column generation
    int cg_iter_cap = 500;
    int topk = 30;
    int disjoint_k = 10;
    int pricing_limit = 200;
    bool use_aggressive = true;
    double aggr_improve_frac = 0.001;  // relative RMP improvement that counts as progress
    int aggr_streak = 3;               // stalled iterations before switching to exact dominance
    bool stabilize = true;
    double stab_alpha = 0.8;           // weight of the current duals in the smoothed vector
    EpsTolerances eps;                 // zeros mean "derive the 1% defaults from the instance"
    long max_labels = 2'000'000;

    // branch and bound
    double fathom_tol_milli = 1e-3;    // 1e-6 cost units
    double int_tol = 1e-6;
    int dive_every = 5;                // primal dive at the root and every k-th node
    long max_nodes = 1'000'000;

    // rolling-space variant
    int cluster_min = 20;
    int cluster_max = 25;
    double cluster_step = 0.5;
    double kappa_frac = 0.15;          // fraction of vehicle capacity
    Milli kappa_abs = -1;              // absolute override when >= 0
    bool rs_relaxed = true;            // aggregate-compartment cluster pricing
    long rs_max_nodes = 150;
    long rs_label_budget = 400'000;    // per cluster pricing run

    // run control
    double time_limit = 1e18;  // seconds
    int threads = 1;
    bool seed_lh = true;
    std::string log_path;

    Milli kappa_for(Milli total_capacity) const {
        if (kappa_abs >= 0) return kappa_abs;
        return static_cast<Milli>(kappa_frac * static_cast<double>(total_capacity));
    }
};

// 1% defaults when no explicit tolerances are configured.
EpsTolerances default_eps(const Instance& inst);

}  // namespace mcbp
