#include "mcbp/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mcbp {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::TimeLimit: return "time_limit";
    }
    return "unknown";
}

Client normalize_time_windows(const Client& c) {
    if (c.windows.empty())
        throw std::invalid_argument("client " + std::to_string(c.id) + " has no time windows");
    std::vector<int> order(c.windows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto &wa = c.windows[a], &wb = c.windows[b];
        if (wa.start != wb.start) return wa.start < wb.start;
        return wa.end < wb.end;
    });

    Client out = c;
    out.windows.clear();
    out.window_origin.clear();
    for (int idx : order) {
        const TimeWindow& w = c.windows[idx];
        if (w.start > w.end)
            throw std::invalid_argument("client " + std::to_string(c.id) + " window start > end");
        if (!out.windows.empty() && w.start <= out.windows.back().end) {
            out.windows.back().end = std::max(out.windows.back().end, w.end);
            out.window_origin.back().push_back(idx);
        } else {
            out.windows.push_back(w);
            out.window_origin.push_back({idx});
        }
    }
    return out;
}

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    const int n = inst.num_clients();
    const int nodes = inst.num_nodes();

    auto check_triangle = [&](const Matrix& m, const std::string& name) {
        if (m.n != nodes) {
            out.push_back({name + " matrix size", name + " matrix is not (n+2)x(n+2)"});
            return;
        }
        for (int i = 0; i < nodes; ++i)
            for (int j = 0; j < nodes; ++j)
                for (int k = 0; k < nodes; ++k)
                    if (m.at(i, k) > m.at(i, j) + m.at(j, k)) {
                        out.push_back({"triangle inequality",
                                       name + "(" + std::to_string(i) + "," + std::to_string(k) +
                                           ") > via " + std::to_string(j)});
                        return;  // one witness per matrix is enough to flag it
                    }
    };
    check_triangle(inst.cost, "cost");
    check_triangle(inst.time, "time");

    if (static_cast<int>(inst.item_item.size()) != n) {
        out.push_back({"item_item size", "item compatibility matrix is not n x n"});
    } else {
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(inst.item_item[i].size()) != n) {
                out.push_back({"item_item size", "row " + std::to_string(i) + " malformed"});
                break;
            }
            if (inst.item_item[i][i] != 1)
                out.push_back({"item_item diagonal", "f[" + std::to_string(i) + "][" + std::to_string(i) + "] != 1"});
            for (int j = i + 1; j < n; ++j)
                if (inst.item_item[i][j] != inst.item_item[j][i]) {
                    out.push_back({"asymmetric compatibility",
                                   "f[" + std::to_string(i) + "][" + std::to_string(j) + "] != f[" +
                                       std::to_string(j) + "][" + std::to_string(i) + "]"});
                }
        }
    }

    for (int ci = 0; ci < n; ++ci) {
        const Client& c = inst.clients[ci];
        if (c.demand <= 0)
            out.push_back({"nonpositive demand", "client " + std::to_string(c.id)});
        if (c.service_time < 0)
            out.push_back({"negative service time", "client " + std::to_string(c.id)});
        if (c.windows.empty()) {
            out.push_back({"no windows", "client " + std::to_string(c.id)});
            continue;
        }
        for (size_t w = 0; w < c.windows.size(); ++w) {
            if (c.windows[w].start > c.windows[w].end || c.windows[w].start < 0 || c.windows[w].day < 0)
                out.push_back({"bad window", "client " + std::to_string(c.id) + " window " + std::to_string(w)});
            if (w > 0 && c.windows[w].start <= c.windows[w - 1].end)
                out.push_back({"windows not normalized",
                               "client " + std::to_string(c.id) + " windows " + std::to_string(w - 1) +
                                   "," + std::to_string(w) + " overlap or are unsorted"});
        }
    }

    if (inst.vehicle.compartments.empty())
        out.push_back({"no compartments", "vehicle has no compartments"});
    Milli cap_sum_check = 0;
    for (size_t m = 0; m < inst.vehicle.compartments.size(); ++m) {
        const auto& cs = inst.vehicle.compartments[m];
        if (cs.capacity < 0 || cs.capacity > inst.vehicle.total_capacity)
            out.push_back({"compartment capacity", "compartment " + std::to_string(m)});
        cap_sum_check += cs.capacity;
    }
    (void)cap_sum_check;  // compartment capacities may sum above total; total is checked separately

    if (static_cast<int>(inst.vehicle.item_compartment.size()) != n)
        out.push_back({"item_compartment size", "b matrix is not n x M"});

    if (inst.rules.max_daily_work < 0 || inst.rules.max_daily_distance < 0 ||
        inst.rules.break_length < 0 || inst.rules.horizon_days < 1)
        out.push_back({"driver rules", "negative limit or empty horizon"});

    return out;
}

ClientSet incidence_of(const Instance& inst, const std::vector<int>& visits) {
    ClientSet s(inst.num_clients());
    for (int v : visits) s.set(v - 1);
    return s;
}

Milli route_cost(const Instance& inst, const std::vector<int>& visits) {
    Milli c = inst.vehicle.fixed_cost;
    int prev = inst.sigma();
    for (int v : visits) {
        c += inst.cost.at(prev, v);
        prev = v;
    }
    c += inst.cost.at(prev, inst.delta());
    return c;
}

ReplayResult replay_schedule(const Instance& inst, const std::vector<int>& visits,
                             const std::vector<std::uint8_t>& breaks) {
    ReplayResult res;
    // breaks == visits + 1: full route ending at delta.
    // breaks == visits:     open prefix, replay stops at the last client.
    const bool full = breaks.size() == visits.size() + 1;
    if (!full && breaks.size() != visits.size()) {
        res.ok = false;
        res.what = "break flags do not match leg count";
        return res;
    }
    const DriverRules& rules = inst.rules;
    Milli t = 0, work = 0, drive = 0, total_work = 0;
    int day = 0;
    int prev = inst.sigma();

    for (size_t leg = 0; leg < breaks.size(); ++leg) {
        const bool br = breaks[leg] != 0;
        const int to = (leg == visits.size()) ? inst.delta() : visits[leg];
        if (br && day + 1 > rules.horizon_days - 1) {
            res.ok = false;
            res.what = "break exceeds planning horizon";
            res.visit_index = static_cast<int>(leg);
            return res;
        }
        const Milli travel = inst.time.at(prev, to);
        const Milli dist = inst.distance.at(prev, to);
        const Milli serv = inst.service_at(prev);
        Milli arrival = t + travel + serv + (br ? rules.break_length : 0);
        Milli inc_work = travel + serv;

        Milli new_work = br ? (rules.count_postbreak_leg ? inc_work : 0) : work + inc_work;
        Milli new_drive = br ? (rules.count_postbreak_leg ? dist : 0) : drive + dist;
        total_work += inc_work;
        if (new_work > rules.max_daily_work) {
            res.ok = false;
            res.what = "daily working time";
            res.visit_index = static_cast<int>(leg);
            return res;
        }
        if (new_drive > rules.max_daily_distance) {
            res.ok = false;
            res.what = "daily driving distance";
            res.visit_index = static_cast<int>(leg);
            return res;
        }
        if (rules.max_total_work >= 0 && total_work > rules.max_total_work) {
            res.ok = false;
            res.what = "total working time";
            res.visit_index = static_cast<int>(leg);
            return res;
        }
        day += br ? 1 : 0;

        if (to == inst.delta()) {
            t = arrival;
            work = new_work;
            drive = new_drive;
            break;
        }
        const Client& cl = inst.client_at_node(to);
        int chosen = -1;
        for (size_t w = 0; w < cl.windows.size(); ++w) {
            if (arrival <= cl.windows[w].end) {
                chosen = static_cast<int>(w);
                break;
            }
        }
        if (chosen < 0) {
            res.ok = false;
            res.what = "time window";
            res.visit_index = static_cast<int>(leg);
            return res;
        }
        t = std::max(arrival, cl.windows[chosen].start);
        work = new_work;
        drive = new_drive;
        res.schedule.push_back({to, t, chosen, day});
        prev = to;
    }
    res.final_time = t;
    res.final_day = day;
    return res;
}

RouteCheck validate_route(const Instance& inst, const Route& r) {
    auto fail = [](std::string what, int idx) {
        RouteCheck c;
        c.ok = false;
        c.what = std::move(what);
        c.visit_index = idx;
        return c;
    };

    const int n = inst.num_clients();
    std::vector<char> seen(n, 0);
    for (size_t i = 0; i < r.visits.size(); ++i) {
        int v = r.visits[i];
        if (!inst.is_client_node(v)) return fail("unknown client node", static_cast<int>(i));
        if (seen[v - 1]) return fail("repeated client", static_cast<int>(i));
        seen[v - 1] = 1;
    }
    if (r.breaks.size() != r.visits.size() + 1) return fail("break flags malformed", -1);
    if (r.schedule.size() != r.visits.size()) return fail("schedule malformed", -1);
    if (r.loading.size() != r.visits.size()) return fail("loading malformed", -1);

    ReplayResult rep = replay_schedule(inst, r.visits, r.breaks);
    if (!rep.ok) return fail(rep.what, rep.visit_index);
    for (size_t i = 0; i < r.visits.size(); ++i) {
        if (rep.schedule[i].service_start != r.schedule[i].service_start)
            return fail("stored schedule time mismatch", static_cast<int>(i));
        if (rep.schedule[i].window_index != r.schedule[i].window_index)
            return fail("stored window is not the earliest reachable", static_cast<int>(i));
        if (rep.schedule[i].day != r.schedule[i].day)
            return fail("stored day mismatch", static_cast<int>(i));
    }

    // Loading: the stored assignment itself must satisfy the compartment model.
    const VehicleType& veh = inst.vehicle;
    const int M = veh.num_compartments();
    std::vector<Milli> load(M, 0);
    std::vector<int> occupants(M, 0);
    std::vector<std::vector<int>> members(M);
    Milli total = 0;
    for (size_t i = 0; i < r.visits.size(); ++i) {
        const int v = r.visits[i];
        const int ci = v - 1;
        const int m = r.loading[i];
        if (m < 0 || m >= M) return fail("loading: bad compartment index", static_cast<int>(i));
        if (!veh.item_compartment[ci][m]) return fail("loading: item-compartment compatibility", static_cast<int>(i));
        for (int other : members[m])
            if (!inst.item_item[ci][other]) return fail("loading: item-item compatibility", static_cast<int>(i));
        load[m] += inst.clients[ci].demand;
        total += inst.clients[ci].demand;
        occupants[m] += 1;
        members[m].push_back(ci);
        if (load[m] > veh.compartments[m].capacity)
            return fail("loading: compartment capacity", static_cast<int>(i));
        if (veh.compartments[m].client_cap >= 0 && occupants[m] > veh.compartments[m].client_cap)
            return fail("loading: compartment client cap", static_cast<int>(i));
    }
    if (total > veh.total_capacity) return fail("loading: vehicle capacity", -1);

    if (route_cost(inst, r.visits) != r.cost) return fail("stored cost mismatch", -1);
    if (!(incidence_of(inst, r.visits) == r.incidence)) return fail("incidence mismatch", -1);
    return RouteCheck{};
}

}  // namespace mcbp
