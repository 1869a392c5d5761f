#include "mcbp/io.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace mcbp {

using json = nlohmann::ordered_json;

namespace {

Milli milli_of(const json& v) { return to_milli(v.get<double>()); }
double dec(Milli v) { return from_milli(v); }

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.n; ++i) {
        json row = json::array();
        for (int j = 0; j < m.n; ++j) row.push_back(dec(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& rows) {
    Matrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) m.at(i, j) = milli_of(rows[i][j]);
    return m;
}

}  // namespace

void write_instance(const Instance& inst, const std::string& path) {
    json j;
    j["depot"] = {{"x", inst.depot_x}, {"y", inst.depot_y}};
    json clients = json::array();
    for (const Client& c : inst.clients) {
        json jc;
        jc["id"] = c.id;
        jc["demand"] = dec(c.demand);
        jc["service_time"] = dec(c.service_time);
        jc["category"] = c.category;
        jc["x"] = c.x;
        jc["y"] = c.y;
        json ws = json::array();
        for (const TimeWindow& w : c.windows)
            ws.push_back({{"start", dec(w.start)}, {"end", dec(w.end)}, {"day", w.day}});
        jc["windows"] = std::move(ws);
        clients.push_back(std::move(jc));
    }
    j["clients"] = std::move(clients);
    j["matrices"] = {{"cost", matrix_to_json(inst.cost)},
                     {"time", matrix_to_json(inst.time)},
                     {"distance", matrix_to_json(inst.distance)}};
    json veh;
    veh["total_capacity"] = dec(inst.vehicle.total_capacity);
    veh["fixed_cost"] = dec(inst.vehicle.fixed_cost);
    json comps = json::array();
    for (const CompartmentSpec& cs : inst.vehicle.compartments) {
        json jc;
        jc["capacity"] = dec(cs.capacity);
        if (cs.client_cap >= 0) jc["client_cap"] = cs.client_cap;
        comps.push_back(std::move(jc));
    }
    veh["compartments"] = std::move(comps);
    veh["item_compartment"] = inst.vehicle.item_compartment;
    j["vehicle"] = std::move(veh);
    json rules;
    rules["max_daily_work"] = dec(inst.rules.max_daily_work);
    rules["max_daily_distance"] = dec(inst.rules.max_daily_distance);
    rules["break_length"] = dec(inst.rules.break_length);
    rules["horizon_days"] = inst.rules.horizon_days;
    if (inst.rules.max_total_work >= 0)
        rules["max_total_work"] = dec(inst.rules.max_total_work);
    if (inst.rules.count_postbreak_leg) rules["count_postbreak_leg"] = true;
    j["driver_rules"] = std::move(rules);
    j["item_item"] = inst.item_item;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(1) << '\n';
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;

    Instance inst;
    inst.depot_x = j.value("depot", json::object()).value("x", 0.0);
    inst.depot_y = j.value("depot", json::object()).value("y", 0.0);
    for (const json& jc : j.at("clients")) {
        Client c;
        c.id = jc.at("id").get<int>();
        c.demand = milli_of(jc.at("demand"));
        c.service_time = milli_of(jc.at("service_time"));
        c.category = jc.value("category", 1);
        c.x = jc.value("x", 0.0);
        c.y = jc.value("y", 0.0);
        for (const json& jw : jc.at("windows")) {
            TimeWindow w;
            w.start = milli_of(jw.at("start"));
            w.end = milli_of(jw.at("end"));
            w.day = jw.value("day", 0);
            c.windows.push_back(w);
        }
        inst.clients.push_back(normalize_time_windows(c));
    }
    const json& mats = j.at("matrices");
    inst.cost = matrix_from_json(mats.at("cost"));
    inst.time = matrix_from_json(mats.at("time"));
    inst.distance = matrix_from_json(mats.at("distance"));

    const json& veh = j.at("vehicle");
    inst.vehicle.total_capacity = milli_of(veh.at("total_capacity"));
    inst.vehicle.fixed_cost = milli_of(veh.at("fixed_cost"));
    for (const json& jc : veh.at("compartments")) {
        CompartmentSpec cs;
        cs.capacity = milli_of(jc.at("capacity"));
        cs.client_cap = jc.value("client_cap", -1);
        inst.vehicle.compartments.push_back(cs);
    }
    inst.vehicle.item_compartment =
        veh.at("item_compartment").get<std::vector<std::vector<std::uint8_t>>>();

    const json& rules = j.at("driver_rules");
    inst.rules.max_daily_work = milli_of(rules.at("max_daily_work"));
    inst.rules.max_daily_distance = milli_of(rules.at("max_daily_distance"));
    inst.rules.break_length = milli_of(rules.at("break_length"));
    inst.rules.horizon_days = rules.at("horizon_days").get<int>();
    if (rules.contains("max_total_work") && !rules.at("max_total_work").is_null())
        inst.rules.max_total_work = milli_of(rules.at("max_total_work"));
    inst.rules.count_postbreak_leg = rules.value("count_postbreak_leg", false);

    inst.item_item = j.at("item_item").get<std::vector<std::vector<std::uint8_t>>>();
    return inst;
}

void write_solution(const Solution& sol, const std::string& path) {
    json j;
    j["status"] = to_string(sol.status);
    j["objective"] = dec(sol.objective);
    j["lower_bound"] = sol.lower_bound / static_cast<double>(kMilliScale);
    j["bound_kind"] = sol.bound_kind == BoundKind::Global ? "global" : "pool_restricted";
    j["wall_seconds"] = sol.wall_seconds;
    j["stats"] = {{"columns", sol.stats.columns},
                  {"nodes", sol.stats.nodes},
                  {"pricing_labels", sol.stats.pricing_labels}};
    if (!sol.message.empty()) j["message"] = sol.message;
    json routes = json::array();
    for (const Route& r : sol.routes) {
        json jr;
        jr["visits"] = r.visits;
        jr["cost"] = dec(r.cost);
        json sched = json::array();
        for (const VisitStop& s : r.schedule)
            sched.push_back({{"client", s.client},
                             {"service_start", dec(s.service_start)},
                             {"window", s.window_index},
                             {"day", s.day}});
        jr["schedule"] = std::move(sched);
        jr["breaks"] = r.breaks;
        jr["loading"] = r.loading;
        routes.push_back(std::move(jr));
    }
    j["routes"] = std::move(routes);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(1) << '\n';
}

Solution read_solution(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;

    Solution sol;
    std::string st = j.at("status").get<std::string>();
    if (st == "optimal") sol.status = SolveStatus::Optimal;
    else if (st == "feasible") sol.status = SolveStatus::Feasible;
    else if (st == "time_limit") sol.status = SolveStatus::TimeLimit;
    else sol.status = SolveStatus::Infeasible;
    sol.objective = milli_of(j.at("objective"));
    sol.lower_bound = j.at("lower_bound").get<double>() * kMilliScale;
    sol.bound_kind = j.value("bound_kind", std::string("global")) == "global"
                         ? BoundKind::Global
                         : BoundKind::PoolRestricted;
    sol.wall_seconds = j.value("wall_seconds", 0.0);
    sol.message = j.value("message", std::string());
    if (j.contains("stats")) {
        sol.stats.columns = j["stats"].value("columns", 0L);
        sol.stats.nodes = j["stats"].value("nodes", 0L);
        sol.stats.pricing_labels = j["stats"].value("pricing_labels", 0L);
    }
    for (const json& jr : j.at("routes")) {
        Route r;
        r.visits = jr.at("visits").get<std::vector<int>>();
        r.cost = milli_of(jr.at("cost"));
        for (const json& js : jr.at("schedule"))
            r.schedule.push_back({js.at("client").get<int>(), milli_of(js.at("service_start")),
                                  js.at("window").get<int>(), js.at("day").get<int>()});
        r.breaks = jr.at("breaks").get<std::vector<std::uint8_t>>();
        r.loading = jr.at("loading").get<std::vector<int>>();
        r.incidence = incidence_of(inst, r.visits);
        sol.routes.push_back(std::move(r));
    }
    return sol;
}

// ---- generator ----

namespace {

// Portable deterministic helpers; the standard distributions are not
// implementation-stable.
std::uint64_t rng_next(std::mt19937_64& g) { return g(); }
long randint(std::mt19937_64& g, long lo, long hi) {
    return lo + static_cast<long>(rng_next(g) % static_cast<std::uint64_t>(hi - lo + 1));
}
double randreal(std::mt19937_64& g) {
    return static_cast<double>(rng_next(g) >> 11) * (1.0 / 9007199254740992.0);
}

void metric_closure(Matrix& m) {
    const int n = m.n;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (m.at(i, k) + m.at(k, j) < m.at(i, j)) m.at(i, j) = m.at(i, k) + m.at(k, j);
}

}  // namespace

std::vector<int> preset_compartments_for(int n_compartments, int category) {
    auto all = [&] {
        std::vector<int> v(n_compartments);
        for (int m = 0; m < n_compartments; ++m) v[m] = m;
        return v;
    };
    auto ids = [](std::initializer_list<int> one_based) {
        std::vector<int> v;
        for (int m : one_based) v.push_back(m - 1);
        return v;
    };
    switch (n_compartments) {
        case 2:
            if (category <= 2) return all();
            if (category <= 5) return ids({1});
            return ids({2});
        case 4:
            if (category <= 2) return all();
            if (category <= 5) return ids({1, 2});
            return ids({3, 4});
        case 6:
            if (category == 1) return all();
            if (category == 2) return ids({1, 2});
            if (category <= 6) return ids({1, 2, 3, 4});
            return ids({3, 4, 5, 6});
        case 8:
            if (category == 1) return all();
            if (category == 2) return ids({1, 2});
            if (category <= 6) return ids({1, 2, 3, 4, 5, 6});
            return ids({5, 6, 7, 8});
        default:
            throw std::invalid_argument("unsupported compartment count " +
                                        std::to_string(n_compartments));
    }
}

bool preset_categories_compatible(int a, int b) {
    // Categories 1 and 2 go with everything. The remaining categories list the
    // *other* categories of matching parity, so two distinct clients of the
    // same category from 3..8 do not share a compartment.
    auto row_allows = [](int cat, int other) {
        if (cat <= 2) return true;
        return other != cat && other % 2 == cat % 2;
    };
    return row_allows(a, b) || row_allows(b, a);
}

Instance generate(const GeneratorConfig& cfg) {
    if (cfg.n_clients < 1) throw std::invalid_argument("need at least one client");
    if (cfg.n_compartments != 2 && cfg.n_compartments != 4 && cfg.n_compartments != 6 &&
        cfg.n_compartments != 8)
        throw std::invalid_argument("compartment presets exist for 2, 4, 6 or 8");
    if (cfg.horizon_days < 1) throw std::invalid_argument("empty planning horizon");

    std::mt19937_64 rng(cfg.seed);
    Instance inst;
    inst.depot_x = 0.0;
    inst.depot_y = 0.0;

    const int n = cfg.n_clients;
    const Milli day_hours = 24 * kMilliScale;
    const Milli span_from = 7 * kMilliScale, span_to = 19 * kMilliScale;

    for (int i = 1; i <= n; ++i) {
        Client c;
        c.id = i;
        double r = cfg.disc_radius_miles * std::sqrt(randreal(rng));
        double a = randreal(rng) * 2.0 * M_PI;
        c.x = r * std::cos(a);
        c.y = r * std::sin(a);
        c.demand = randint(rng, cfg.demand_min, cfg.demand_max);
        c.service_time = randint(rng, 250, 750);  // 15 to 45 minutes
        c.category = static_cast<int>(randint(rng, 1, 8));

        // Primary window first, extra days after it, so a single-window variant
        // generated from the same seed shares every draw and keeps the primary.
        const int days_with_windows =
            static_cast<int>(randint(rng, 1, std::min(cfg.active_days, cfg.horizon_days)));
        std::vector<int> days;
        while (static_cast<int>(days.size()) < days_with_windows) {
            int d = static_cast<int>(randint(rng, 0, cfg.horizon_days - 1));
            if (std::find(days.begin(), days.end(), d) == days.end()) days.push_back(d);
        }
        for (size_t k = 0; k < days.size(); ++k) {
            for (int w = 0; w < cfg.windows_per_day; ++w) {
                Milli len = randint(rng, 2 * kMilliScale, 5 * kMilliScale);
                Milli start = randint(rng, span_from, span_to - len);
                TimeWindow tw;
                tw.day = days[k];
                tw.start = days[k] * day_hours + start;
                tw.end = tw.start + len;
                if (k == 0 || cfg.multi_window) c.windows.push_back(tw);
            }
        }
        inst.clients.push_back(normalize_time_windows(c));
    }

    const int nodes = n + 2;
    inst.distance = Matrix(nodes);
    auto coord = [&](int node) -> std::pair<double, double> {
        if (node == 0 || node == nodes - 1) return {inst.depot_x, inst.depot_y};
        return {inst.clients[node - 1].x, inst.clients[node - 1].y};
    };
    for (int i = 0; i < nodes; ++i) {
        for (int j = 0; j < nodes; ++j) {
            auto [xi, yi] = coord(i);
            auto [xj, yj] = coord(j);
            inst.distance.at(i, j) = to_milli(std::hypot(xi - xj, yi - yj));
        }
    }
    metric_closure(inst.distance);
    inst.cost = inst.distance;
    inst.time = Matrix(nodes);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j)
            inst.time.at(i, j) =
                static_cast<Milli>(std::llround(inst.distance.at(i, j) / cfg.speed_mph));
    metric_closure(inst.time);

    inst.vehicle.total_capacity = cfg.total_capacity;
    const Milli comp_cap = cfg.total_capacity / cfg.n_compartments;
    for (int m = 0; m < cfg.n_compartments; ++m)
        inst.vehicle.compartments.push_back({comp_cap, -1});
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint8_t> row(cfg.n_compartments, 0);
        for (int m : preset_compartments_for(cfg.n_compartments, inst.clients[i].category))
            row[m] = 1;
        inst.vehicle.item_compartment.push_back(std::move(row));
    }
    Milli max_singleton = 0;
    for (int j = 1; j <= n; ++j)
        max_singleton =
            std::max(max_singleton, inst.cost.at(0, j) + inst.cost.at(j, nodes - 1));
    inst.vehicle.fixed_cost = 10 * max_singleton;

    inst.rules.max_daily_work = cfg.max_daily_work;
    inst.rules.max_daily_distance = cfg.max_daily_distance;
    inst.rules.break_length = cfg.break_length;
    inst.rules.horizon_days = cfg.horizon_days;

    inst.item_item.assign(n, std::vector<std::uint8_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inst.item_item[i][j] =
                (i == j) ? 1
                         : static_cast<std::uint8_t>(preset_categories_compatible(
                               inst.clients[i].category, inst.clients[j].category));
    return inst;
}

}  // namespace mcbp
