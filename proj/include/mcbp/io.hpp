#pragma once

#include <string>

#include "mcbp/model.hpp"

namespace mcbp {

// Instance and solution files are UTF-8 JSON with plain decimals; all numbers
// are converted to milliunit integers on read.
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

Solution read_solution(const std::string& path, const Instance& inst);
void write_solution(const Solution& sol, const std::string& path);

struct GeneratorConfig {
    int n_clients = 10;
    int n_compartments = 6;  // one of 2, 4, 6, 8
    std::uint64_t seed = 1;
    int horizon_days = 5;
    int active_days = 3;      // distinct days that may carry a window
    int windows_per_day = 1;
    bool multi_window = true;  // false keeps only the primary window per client
    double disc_radius_miles = 120.0;
    double speed_mph = 45.0;
    Milli demand_min = 800 * kMilliScale;
    Milli demand_max = 3000 * kMilliScale;
    Milli total_capacity = 40000 * kMilliScale;
    Milli max_daily_work = 12 * kMilliScale;       // hours
    Milli max_daily_distance = 580 * kMilliScale;  // miles
    Milli break_length = 10 * kMilliScale;         // hours
};

// Category presets for the supported compartment counts: which compartments a
// category may use and which categories may share a compartment.
// compartment_sets[m][cat-1] lists 0-based compartment indices; empty = all.
std::vector<int> preset_compartments_for(int n_compartments, int category);
bool preset_categories_compatible(int cat_a, int cat_b);

Instance generate(const GeneratorConfig& cfg);

}  // namespace mcbp
