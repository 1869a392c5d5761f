#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mcbp/branch.hpp"
#include "mcbp/config.hpp"
#include "mcbp/lp.hpp"
#include "mcbp/model.hpp"
#include "mcbp/pricing.hpp"

namespace mcbp {

// Whether a pool route may appear in the RMP of a node. A route must avoid
// forbidden arcs; when it touches a client endpoint of a forced arc it must
// use that arc.
bool route_compatible(const Route& r, const BranchState& branch, const Instance& inst);

// Arc flows of a fractional RMP solution and the paper-standard branching pick:
// the arc with flow nearest one half, ties by larger arc cost then by arc id.
// Returns {-1,-1} when every flow is integral.
Arc select_branching_arc(const Instance& inst, const ColumnPool& pool,
                         const std::vector<int>& active, const std::vector<double>& y,
                         double int_tol);

// Keep the k most negative candidates (stable on ties).
std::vector<int> column_select_topk(const std::vector<PricedRoute>& cands, int k);
// Greedy scan in ascending reduced cost; accept only client-disjoint routes.
std::vector<int> column_select_disjoint(const std::vector<PricedRoute>& cands, int k,
                                        int n_clients);

// One pricing round as seen by the column-generation loop. Backends differ:
// the exact solver prices the full client set with per-compartment labels, the
// rolling-space solver prices clusters in relaxed mode and loading-checks the
// candidates before handing them over.
struct PricingRound {
    std::vector<PricedRoute> candidates;  // loading verified or exact
    double min_rcost = std::numeric_limits<double>::infinity();
    long labels = 0;
    bool exact_proof = false;     // empty round proves LP optimality over all routes
    bool node_infeasible = false; // contradictory branching state
};
using PricingFn = std::function<PricingRound(const DualVector&, const BranchState&, bool aggressive)>;

struct CgOutcome {
    double bound = 0.0;       // valid node lower bound (milli)
    bool proven = false;      // pricing exhausted; bound equals the node LP value
    bool infeasible = false;
    double rmp_objective = 0.0;
    std::vector<int> active;  // pool indices in the final RMP
    std::vector<double> y;    // aligned with active
    DualVector duals;
    long iterations = 0;
    long labels = 0;
};

// Alternates RMP solves and pricing until no candidate survives: aggressive
// dominance and dual smoothing first, then an exact pass that proves the bound.
// With pool_bound_ok the final RMP value is used as the node bound even without
// a pricing proof (the rolling-space tree works with pool-restricted bounds);
// otherwise an unproven node falls back to the best Lagrangian bound seen.
CgOutcome column_generation(const Instance& inst, ColumnPool& pool, const BranchState& branch,
                            const SolverConfig& cfg, const PricingFn& pricer,
                            bool pool_bound_ok = false);

// Depth-first fixing of near-integral columns over the current pool; returns a
// validated partition or nothing.
std::optional<std::vector<Route>> primal_dive(const Instance& inst, const ColumnPool& pool,
                                              const std::vector<int>& active,
                                              const std::vector<double>& y,
                                              const SolverConfig& cfg);

// Exact branch-and-price over the full client set (at most 64 clients).
Solution solve_bnp(const Instance& inst, const SolverConfig& cfg);

// Shared search driver; the rolling-space solver plugs in its own pricer.
Solution run_branch_and_price(const Instance& inst, const SolverConfig& cfg,
                              const PricingFn& pricer, BoundKind bound_kind, long node_cap);

// Feasible singleton route for one client, or nothing if none exists.
std::optional<Route> make_singleton(const Instance& inst, int client_node);

// Greedy first-fit loading for routes that skip the full checker.
std::optional<std::vector<int>> first_fit_loading(const Instance& inst,
                                                  const std::vector<int>& visits);

}  // namespace mcbp
