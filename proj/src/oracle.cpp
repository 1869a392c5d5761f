#include "mcbp/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "mcbp/compartment.hpp"

namespace mcbp {

namespace {

struct Enumerator {
    const Instance& inst;
    int max_len;
    long node_cap;
    long nodes = 0;
    std::vector<int> visits;
    std::vector<std::uint8_t> breaks;
    std::vector<char> used;
    std::vector<Route>* out;

    void tick() {
        if (++nodes > node_cap)
            throw std::runtime_error("route enumeration exceeded its node cap");
    }

    // Try to finish the current prefix with a final leg to delta.
    void close() {
        for (int br = 0; br <= 1; ++br) {
            tick();
            breaks.push_back(static_cast<std::uint8_t>(br));
            ReplayResult rep = replay_schedule(inst, visits, breaks);
            if (rep.ok) {
                auto loading = check_route_loading(inst, visits);
                if (loading) {
                    Route r;
                    r.visits = visits;
                    r.breaks = breaks;
                    r.schedule = rep.schedule;
                    r.loading = *loading;
                    r.cost = route_cost(inst, visits);
                    r.incidence = incidence_of(inst, visits);
                    if (validate_route(inst, r))
                        out->push_back(std::move(r));
                }
            }
            breaks.pop_back();
        }
    }

    void dfs() {
        if (!visits.empty()) close();
        if (static_cast<int>(visits.size()) >= max_len) return;
        Milli total = 0;
        for (int v : visits) total += inst.clients[v - 1].demand;
        for (int j = 1; j <= inst.num_clients(); ++j) {
            if (used[j - 1]) continue;
            if (total + inst.clients[j - 1].demand > inst.vehicle.total_capacity) continue;
            for (int br = 0; br <= 1; ++br) {
                tick();
                visits.push_back(j);
                breaks.push_back(static_cast<std::uint8_t>(br));
                if (replay_schedule(inst, visits, breaks).ok) {
                    used[j - 1] = 1;
                    dfs();
                    used[j - 1] = 0;
                }
                breaks.pop_back();
                visits.pop_back();
            }
        }
    }
};

}  // namespace

std::vector<Route> enumerate_routes(const Instance& inst, int max_len, long node_cap) {
    if (inst.num_clients() > 10)
        throw std::invalid_argument("route enumeration is restricted to 10 clients");
    std::vector<Route> routes;
    Enumerator e{inst, max_len < 0 ? inst.num_clients() : max_len, node_cap, 0, {}, {}, {}, &routes};
    e.used.assign(inst.num_clients(), 0);
    e.dfs();
    return routes;
}

PartitionResult optimal_partition(const std::vector<Route>& routes, int n_clients) {
    if (n_clients > 20)
        throw std::invalid_argument("subset dynamic program is restricted to small client counts");
    PartitionResult res;
    const std::uint64_t full = (1ULL << n_clients) - 1;
    constexpr Milli kInf = std::numeric_limits<Milli>::max() / 4;

    std::vector<std::uint64_t> inc(routes.size(), 0);
    for (size_t r = 0; r < routes.size(); ++r)
        for (int v : routes[r].visits) inc[r] |= 1ULL << (v - 1);

    std::vector<Milli> best(full + 1, kInf);
    std::vector<int> pick(full + 1, -1);
    best[0] = 0;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
        const std::uint64_t low = mask & (~mask + 1);
        for (size_t r = 0; r < routes.size(); ++r) {
            if (!(inc[r] & low)) continue;            // canonical: cover the lowest client
            if (inc[r] & ~mask) continue;             // route must stay inside the mask
            const std::uint64_t rest = mask ^ inc[r];
            if (best[rest] >= kInf) continue;
            Milli cand = best[rest] + routes[r].cost;
            if (cand < best[mask]) {
                best[mask] = cand;
                pick[mask] = static_cast<int>(r);
            }
        }
    }
    if (best[full] >= kInf) return res;
    res.feasible = true;
    res.objective = best[full];
    for (std::uint64_t mask = full; mask;) {
        int r = pick[mask];
        res.selected.push_back(r);
        mask ^= inc[r];
    }
    std::reverse(res.selected.begin(), res.selected.end());
    return res;
}

Solution solve_oracle(const Instance& inst) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Route> routes = enumerate_routes(inst, inst.num_clients());
    PartitionResult part = optimal_partition(routes, inst.num_clients());
    Solution sol;
    if (!part.feasible) {
        sol.status = SolveStatus::Infeasible;
        sol.message = "some client is not covered by any feasible route";
        return sol;
    }
    for (int r : part.selected) sol.routes.push_back(routes[r]);
    sol.objective = part.objective;
    sol.lower_bound = static_cast<double>(part.objective);
    sol.status = SolveStatus::Optimal;
    sol.stats.columns = static_cast<long>(routes.size());
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace mcbp
