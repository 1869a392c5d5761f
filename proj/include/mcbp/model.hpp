#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcbp/bitset.hpp"
#include "mcbp/fixed.hpp"

namespace mcbp {

// A service-start window on a specific day of the planning horizon.
// Times are absolute horizon times (milli time-units).
struct TimeWindow {
    Milli start = 0;
    Milli end = 0;
    int day = 0;
};

struct Client {
    int id = 0;             // node index in V; clients occupy 1..n
    Milli demand = 0;
    Milli service_time = 0;
    int category = 1;       // item category, 1..8 in the generated presets
    std::vector<TimeWindow> windows;  // disjoint, sorted by start after normalization
    // Back-map from merged window index to the original window indices it
    // absorbed. Report-only; feasibility always works on merged windows.
    std::vector<std::vector<int>> window_origin;
    double x = 0.0, y = 0.0;  // planar coordinates, used by sweep clustering
};

struct CompartmentSpec {
    Milli capacity = 0;
    int client_cap = -1;  // max clients served from this compartment; -1 = unbounded
};

struct VehicleType {
    Milli total_capacity = 0;
    Milli fixed_cost = 0;
    std::vector<CompartmentSpec> compartments;
    // item_compartment[c][m] == 1 iff client with array index c may be loaded
    // into compartment m. Rows are derived from the client's category preset.
    std::vector<std::vector<std::uint8_t>> item_compartment;

    int num_compartments() const { return static_cast<int>(compartments.size()); }
};

struct DriverRules {
    Milli max_daily_work = 0;      // travel + service per day
    Milli max_daily_distance = 0;
    Milli break_length = 0;        // mandatory rest between daily shifts
    int horizon_days = 1;
    Milli max_total_work = -1;     // optional horizon-wide cap; -1 = disabled
    // When true, the leg driven right after a break counts into the new day's
    // work/distance totals instead of being zeroed. Default follows the
    // reset-to-zero update rule; the alternative exists for sensitivity runs.
    bool count_postbreak_leg = false;
};

// Dense (n+2)x(n+2) matrix over V = {sigma} u N u {delta}; sigma at row 0,
// delta at row n+1.
struct Matrix {
    int n = 0;  // node count = clients + 2
    std::vector<Milli> v;

    Matrix() = default;
    explicit Matrix(int nodes) : n(nodes), v(static_cast<size_t>(nodes) * nodes, 0) {}
    Milli& at(int i, int j) { return v[static_cast<size_t>(i) * n + j]; }
    Milli at(int i, int j) const { return v[static_cast<size_t>(i) * n + j]; }
};

struct Instance {
    std::vector<Client> clients;
    Matrix cost, time, distance;
    VehicleType vehicle;
    DriverRules rules;
    // item_item[a][b] == 1 iff clients with array indices a and b may share a
    // compartment. Symmetric with unit diagonal.
    std::vector<std::vector<std::uint8_t>> item_item;
    double depot_x = 0.0, depot_y = 0.0;

    int num_clients() const { return static_cast<int>(clients.size()); }
    int num_nodes() const { return num_clients() + 2; }
    int sigma() const { return 0; }
    int delta() const { return num_clients() + 1; }
    bool is_client_node(int node) const { return node >= 1 && node <= num_clients(); }
    const Client& client_at_node(int node) const { return clients[node - 1]; }

    Milli service_at(int node) const {
        return is_client_node(node) ? clients[node - 1].service_time : 0;
    }
};

// One serviced visit: when service starts, which merged window was chosen,
// and the shift (day) counter at that point.
struct VisitStop {
    int client = 0;       // node index
    Milli service_start = 0;
    int window_index = 0;
    int day = 0;
};

struct Route {
    std::vector<int> visits;          // client node indices, elementary
    std::vector<VisitStop> schedule;  // one entry per visit
    std::vector<std::uint8_t> breaks; // per leg; legs = visits+1 (sigma->..->delta)
    std::vector<int> loading;         // per visit: compartment index
    Milli cost = 0;                   // fixed cost + sum of arc costs
    ClientSet incidence;              // over client array indices

    int num_legs() const { return static_cast<int>(visits.size()) + 1; }
};

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeLimit };

std::string to_string(SolveStatus s);

enum class BoundKind { Global, PoolRestricted };

struct SolveStats {
    long columns = 0;
    long nodes = 0;
    long pricing_labels = 0;
};

struct Solution {
    std::vector<Route> routes;
    Milli objective = 0;
    double lower_bound = 0.0;  // milli units; fractional LP bounds
    SolveStatus status = SolveStatus::Infeasible;
    BoundKind bound_kind = BoundKind::Global;
    double wall_seconds = 0.0;
    SolveStats stats;
    std::string message;  // e.g. name of an unservable client
};

// ---- validation ----

struct Violation {
    std::string what;    // short machine-friendly tag
    std::string detail;  // human-readable context
};

struct RouteCheck {
    bool ok = true;
    std::string what;
    int visit_index = -1;  // offending visit position, -1 for route-level issues

    explicit operator bool() const { return ok; }
};

// Merges overlapping windows, sorts ascending, keeps a back-map to the
// original indices. Throws std::invalid_argument on an empty window list.
Client normalize_time_windows(const Client& c);

// Structural instance checks; returns every violation found, not just the first.
std::vector<Violation> validate_instance(const Instance& inst);

// Independent full-constraint replay of a route: schedule recomputation leg by
// leg with the stored window/break choices, driver-rule checks, loading checks
// against the stored compartment assignment, and exact cost match. This is the
// trust anchor; it shares no code with the pricing engine.
RouteCheck validate_route(const Instance& inst, const Route& r);

// fixed cost + sum of arc costs along sigma, visits..., delta.
Milli route_cost(const Instance& inst, const std::vector<int>& visits);

// Schedule replay used by validate_route and the enumeration oracle. Walks the
// legs with given break flags, always selecting the earliest reachable window,
// and reports the first infeasibility. Does not look at compartments.
struct ReplayResult {
    bool ok = true;
    std::string what;
    int visit_index = -1;
    std::vector<VisitStop> schedule;
    Milli final_time = 0;
    int final_day = 0;
};

ReplayResult replay_schedule(const Instance& inst, const std::vector<int>& visits,
                             const std::vector<std::uint8_t>& breaks);

ClientSet incidence_of(const Instance& inst, const std::vector<int>& visits);

}  // namespace mcbp
