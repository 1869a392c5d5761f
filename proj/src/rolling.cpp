#include "mcbp/rolling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mcbp/bnb.hpp"
#include "mcbp/compartment.hpp"

namespace mcbp {

std::vector<Cluster> build_clusters(const Instance& inst, int min_size, int max_size,
                                    double step_fraction) {
    const int n = inst.num_clients();
    std::vector<Cluster> out;

    std::vector<int> order;
    for (int j = 1; j <= n; ++j) order.push_back(j);
    std::vector<double> angle(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        const Client& c = inst.clients[j - 1];
        angle[j] = std::atan2(c.y - inst.depot_y, c.x - inst.depot_x);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (angle[a] != angle[b]) return angle[a] < angle[b];
        return a < b;
    });

    if (n <= max_size || n < min_size) {
        Cluster c;
        c.clients = order;
        std::sort(c.clients.begin(), c.clients.end());
        c.angle_from = -M_PI;
        c.angle_to = M_PI;
        out.push_back(std::move(c));
        return out;
    }

    const int step = std::max(1, static_cast<int>(std::ceil(step_fraction * max_size)));
    for (int start = 0; start < n; start += step) {
        Cluster c;
        for (int k = 0; k < max_size; ++k) c.clients.push_back(order[(start + k) % n]);
        c.angle_from = angle[order[start]];
        c.angle_to = angle[order[(start + max_size - 1) % n]];
        std::sort(c.clients.begin(), c.clients.end());
        out.push_back(std::move(c));
    }
    return out;
}

Solution solve_rs_bnp(const Instance& inst, const SolverConfig& cfg_in) {
    SolverConfig cfg = cfg_in;
    if (cfg.eps.time == 0 && cfg.eps.cost == 0.0) cfg.eps = default_eps(inst);
    const int cluster_max = std::min({cfg.cluster_max, 64, std::max(1, inst.num_clients())});
    const int cluster_min = std::min(cfg.cluster_min, cluster_max);

    const std::vector<Cluster> clusters =
        build_clusters(inst, cluster_min, cluster_max, cfg.cluster_step);
    const std::vector<std::uint8_t> static_mask = arc_filter(inst);
    const Milli kappa = cfg.kappa_for(inst.vehicle.total_capacity);
    const int threads = std::max(1, cfg.threads);

    PricingFn pricer = [&inst, &cfg, &clusters, &static_mask, kappa, threads](
                           const DualVector& duals, const BranchState& branch, bool aggressive) {
        PricingRound round;
        PricingGraph graph = build_pricing_graph(inst, duals, branch, static_mask);
        if (graph.infeasible) {
            round.node_infeasible = true;
            return round;
        }

        PricingOptions opt;
        opt.compartments = cfg.rs_relaxed ? CompartmentMode::Relaxed : CompartmentMode::Exact;
        opt.dominance = DominanceMode::Both;
        opt.aggressive = aggressive;
        opt.eps = cfg.eps;
        opt.max_columns = cfg.pricing_limit;
        // Per-cluster label budget: cluster pricing is a column generator for a
        // pool-restricted search, not a proof device, so it may stop early.
        opt.max_labels = std::min(cfg.max_labels, cfg.rs_label_budget);
        opt.stop_after_negatives = 4L * cfg.pricing_limit;

        std::vector<PricingResult> results(clusters.size());
        auto worker = [&](size_t from, size_t to) {
            for (size_t c = from; c < to; ++c)
                results[c] = solve_pricing(inst, graph, clusters[c].clients, opt);
        };
        if (threads == 1 || clusters.size() <= 1) {
            worker(0, clusters.size());
        } else {
            std::vector<std::thread> pool_threads;
            const size_t per = (clusters.size() + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                size_t from = t * per;
                size_t to = std::min(clusters.size(), from + per);
                if (from >= to) break;
                pool_threads.emplace_back(worker, from, to);
            }
            for (auto& th : pool_threads) th.join();
        }

        // Deterministic merge in cluster order, loading-checking candidates
        // before they may enter the pool.
        for (size_t c = 0; c < results.size(); ++c) {
            round.labels += results[c].labels_created;
            round.min_rcost = std::min(round.min_rcost, results[c].min_rcost);
            for (PricedRoute& pr : results[c].routes) {
                if (!pr.loading_known) {
                    if (needs_check(inst, pr.route.visits, kappa)) {
                        auto loading = check_route_loading(inst, pr.route.visits);
                        if (!loading) continue;  // discard, never repaired
                        pr.route.loading = *loading;
                    } else {
                        auto loading = first_fit_loading(inst, pr.route.visits);
                        if (!loading) loading = check_route_loading(inst, pr.route.visits);
                        if (!loading) continue;
                        pr.route.loading = *loading;
                    }
                    pr.loading_known = true;
                }
                round.candidates.push_back(std::move(pr));
            }
        }
        round.exact_proof = false;  // clusters restrict the route space
        return round;
    };

    Solution sol = run_branch_and_price(inst, cfg, pricer, BoundKind::PoolRestricted,
                                        cfg.rs_max_nodes);
    if (sol.status == SolveStatus::Optimal) sol.status = SolveStatus::Feasible;
    return sol;
}

}  // namespace mcbp
