#include "mcbp/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace mcbp {

namespace {

// Running state of the route under construction.
struct BuildState {
    Milli time = 0, work = 0, drive = 0, total_work = 0;
    int day = 0;
    int node = 0;
    Milli total_load = 0;
    std::vector<Milli> load;
    std::vector<std::vector<int>> members;  // client array indices per compartment

    explicit BuildState(const Instance& inst)
        : load(inst.vehicle.num_compartments(), 0), members(inst.vehicle.num_compartments()) {}
};

struct Step {
    int client = 0;  // node id
    bool take_break = false;
    int window = 0;
    Milli service_start = 0;
    int compartment = 0;
    Milli arc_cost = 0;
};

// Smallest-index compartment that fits: capacity, client cap, item-compartment
// and item-item compatibility against the current members.
int first_fit_compartment(const Instance& inst, const BuildState& s, int client_node) {
    const int ci = client_node - 1;
    const Milli q = inst.clients[ci].demand;
    for (int m = 0; m < inst.vehicle.num_compartments(); ++m) {
        if (!inst.vehicle.item_compartment[ci][m]) continue;
        const auto& spec = inst.vehicle.compartments[m];
        if (s.load[m] + q > spec.capacity) continue;
        if (spec.client_cap >= 0 && static_cast<int>(s.members[m].size()) >= spec.client_cap)
            continue;
        bool ok = true;
        for (int other : s.members[m])
            if (!inst.item_item[ci][other]) { ok = false; break; }
        if (ok) return m;
    }
    return -1;
}

// Whether the route can still return to the destination depot from this state.
bool closable(const Instance& inst, const BuildState& s, bool* needs_final_break) {
    const DriverRules& r = inst.rules;
    const Milli travel = inst.time.at(s.node, inst.delta());
    const Milli dist = inst.distance.at(s.node, inst.delta());
    const Milli inc = travel + inst.service_at(s.node);
    if (r.max_total_work >= 0 && s.total_work + inc > r.max_total_work) return false;
    if (s.work + inc <= r.max_daily_work && s.drive + dist <= r.max_daily_distance) {
        *needs_final_break = false;
        return true;
    }
    if (s.day + 1 > r.horizon_days - 1) return false;
    Milli w = r.count_postbreak_leg ? inc : 0;
    Milli d = r.count_postbreak_leg ? dist : 0;
    if (w <= r.max_daily_work && d <= r.max_daily_distance) {
        *needs_final_break = true;
        return true;
    }
    return false;
}

// Cheapest feasible extension from the current state over the given clients,
// ties broken by earliest achievable service start, then by client id.
bool best_step(const Instance& inst, const BuildState& s, const std::vector<int>& pool, Step* out) {
    const DriverRules& r = inst.rules;
    bool found = false;
    for (int j : pool) {
        const Client& cj = inst.clients[j - 1];
        const int comp = first_fit_compartment(inst, s, j);
        if (comp < 0) continue;
        if (s.total_load + cj.demand > inst.vehicle.total_capacity) continue;

        const Milli travel = inst.time.at(s.node, j);
        const Milli dist = inst.distance.at(s.node, j);
        const Milli inc = travel + inst.service_at(s.node);
        for (int br = 0; br <= 1; ++br) {
            if (br && s.day + 1 > r.horizon_days - 1) continue;
            Milli arrival = s.time + inc + (br ? r.break_length : 0);
            Milli work = br ? (r.count_postbreak_leg ? inc : 0) : s.work + inc;
            Milli drive = br ? (r.count_postbreak_leg ? dist : 0) : s.drive + dist;
            if (work > r.max_daily_work || drive > r.max_daily_distance) continue;
            if (r.max_total_work >= 0 && s.total_work + inc > r.max_total_work) continue;
            int win = -1;
            for (size_t w = 0; w < cj.windows.size(); ++w)
                if (arrival <= cj.windows[w].end) { win = static_cast<int>(w); break; }
            if (win < 0) continue;
            Milli start = std::max(arrival, cj.windows[win].start);

            BuildState next = s;
            next.time = start;
            next.work = work;
            next.drive = drive;
            next.total_work = s.total_work + inc;
            next.day = s.day + br;
            next.node = j;
            next.total_load += cj.demand;
            next.load[comp] += cj.demand;
            next.members[comp].push_back(j - 1);
            bool final_break = false;
            if (!closable(inst, next, &final_break)) continue;

            Step cand{j, br != 0, win, start, comp, inst.cost.at(s.node, j)};
            if (!found || cand.arc_cost < out->arc_cost ||
                (cand.arc_cost == out->arc_cost &&
                 (cand.service_start < out->service_start ||
                  (cand.service_start == out->service_start && cand.client < out->client)))) {
                *out = cand;
                found = true;
            }
        }
    }
    return found;
}

}  // namespace

LhOutcome lh_routes(const Instance& inst) {
    LhOutcome res;
    std::vector<int> unassigned;
    for (int j = 1; j <= inst.num_clients(); ++j) unassigned.push_back(j);

    while (!unassigned.empty()) {
        BuildState s(inst);
        s.node = inst.sigma();
        Route route;
        route.incidence = ClientSet(inst.num_clients());

        Step step;
        while (best_step(inst, s, unassigned, &step)) {
            const Client& cj = inst.clients[step.client - 1];
            const Milli inc = inst.time.at(s.node, step.client) + inst.service_at(s.node);
            s.work = step.take_break ? (inst.rules.count_postbreak_leg ? inc : 0) : s.work + inc;
            s.drive = step.take_break
                          ? (inst.rules.count_postbreak_leg ? inst.distance.at(s.node, step.client) : 0)
                          : s.drive + inst.distance.at(s.node, step.client);
            s.total_work += inc;
            s.time = step.service_start;
            s.day += step.take_break ? 1 : 0;
            s.node = step.client;
            s.total_load += cj.demand;
            s.load[step.compartment] += cj.demand;
            s.members[step.compartment].push_back(step.client - 1);

            route.visits.push_back(step.client);
            route.breaks.push_back(step.take_break ? 1 : 0);
            route.schedule.push_back({step.client, step.service_start, step.window, s.day});
            route.loading.push_back(step.compartment);
            route.incidence.set(step.client - 1);
            unassigned.erase(std::find(unassigned.begin(), unassigned.end(), step.client));
        }

        if (route.visits.empty()) {
            res.feasible = false;
            res.unassignable = std::to_string(unassigned.front());
            return res;
        }
        bool final_break = false;
        if (!closable(inst, s, &final_break))
            throw std::logic_error("route accepted but no return leg exists");
        route.breaks.push_back(final_break ? 1 : 0);
        route.cost = route_cost(inst, route.visits);
        if (RouteCheck check = validate_route(inst, route); !check) {
            res.feasible = false;
            res.unassignable = "internal: " + check.what;
            return res;
        }
        res.routes.push_back(std::move(route));
    }
    return res;
}

Solution solve_lh(const Instance& inst) {
    auto t0 = std::chrono::steady_clock::now();
    LhOutcome lh = lh_routes(inst);
    Solution sol;
    sol.bound_kind = BoundKind::PoolRestricted;
    if (!lh.feasible) {
        sol.status = SolveStatus::Infeasible;
        sol.message = "unassignable client " + lh.unassignable;
        return sol;
    }
    sol.routes = lh.routes;
    sol.objective = 0;
    for (const Route& r : sol.routes) sol.objective += r.cost;
    sol.lower_bound = 0.0;  // the heuristic proves no bound
    sol.status = SolveStatus::Feasible;
    sol.stats.columns = static_cast<long>(sol.routes.size());
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace mcbp
