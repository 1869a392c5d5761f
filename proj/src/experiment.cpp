#include "mcbp/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mcbp/bnb.hpp"
#include "mcbp/heuristic.hpp"
#include "mcbp/io.hpp"
#include "mcbp/oracle.hpp"
#include "mcbp/rolling.hpp"

namespace mcbp {

using json = nlohmann::ordered_json;

Solution dispatch_solve(const Instance& inst, const std::string& mode, const SolverConfig& cfg) {
    if (mode == "bnp") return solve_bnp(inst, cfg);
    if (mode == "rsbnp") return solve_rs_bnp(inst, cfg);
    if (mode == "lh") return solve_lh(inst);
    if (mode == "oracle") return solve_oracle(inst);
    throw std::invalid_argument("unknown mode " + mode);
}

namespace {

struct RunResult {
    std::string name, mode, status;
    int n = 0, compartments = 0;
    long long seed = 0;
    double objective = 0.0;
    int vehicles = 0;
    long columns = 0, nodes = 0;
    double seconds = 0.0;
    std::string baseline;
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::string group;
    double x = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    std::string error;
};

GeneratorConfig gen_config_from(const json& jg) {
    GeneratorConfig g;
    g.n_clients = jg.value("n", 10);
    g.n_compartments = jg.value("compartments", 6);
    g.seed = jg.value("seed", 1ULL);
    g.horizon_days = jg.value("horizon_days", 5);
    g.active_days = jg.value("active_days", 3);
    g.windows_per_day = jg.value("windows_per_day", 1);
    g.multi_window = jg.value("mtw", true);
    if (jg.contains("demand_min")) g.demand_min = to_milli(jg["demand_min"].get<double>());
    if (jg.contains("demand_max")) g.demand_max = to_milli(jg["demand_max"].get<double>());
    return g;
}

SolverConfig solver_config_from(const json& jr) {
    SolverConfig cfg;
    cfg.time_limit = jr.value("time_limit", 1e18);
    cfg.threads = jr.value("threads", 1);
    if (jr.contains("kappa")) cfg.kappa_abs = to_milli(jr["kappa"].get<double>());
    cfg.covering = jr.value("covering", true);
    cfg.cluster_min = jr.value("cluster_min", cfg.cluster_min);
    cfg.cluster_max = jr.value("cluster_max", cfg.cluster_max);
    cfg.cluster_step = jr.value("cluster_step", cfg.cluster_step);
    cfg.rs_relaxed = jr.value("rs_relaxed", true);
    return cfg;
}

void write_svg_plot(const std::string& path, const std::string& x_label,
                    const std::string& y_label,
                    const std::map<std::string, std::vector<std::pair<double, double>>>& series) {
    const int W = 640, H = 440, ML = 70, MR = 150, MT = 20, MB = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [label, pts] : series)
        for (auto [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) { xmin = 0; xmax = 1; }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto X = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto Y = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    out << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    for (int t = 0; t <= 4; ++t) {
        double xv = xmin + (xmax - xmin) * t / 4.0;
        double yv = ymin + (ymax - ymin) * t / 4.0;
        out << "<text x='" << X(xv) << "' y='" << H - MB + 18
            << "' font-size='11' text-anchor='middle'>" << std::fixed << std::setprecision(1)
            << xv << "</text>\n";
        out << "<text x='" << ML - 8 << "' y='" << Y(yv) + 4
            << "' font-size='11' text-anchor='end'>" << std::setprecision(0) << yv
            << "</text>\n";
    }
    out << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 12
        << "' font-size='13' text-anchor='middle'>" << x_label << "</text>\n";
    out << "<text x='16' y='" << (MT + H - MB) / 2
        << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
        << (MT + H - MB) / 2 << ")'>" << y_label << "</text>\n";

    int ci = 0;
    for (const auto& [label, pts_in] : series) {
        auto pts = pts_in;
        std::sort(pts.begin(), pts.end());
        const char* col = colors[ci % 8];
        out << "<polyline fill='none' stroke='" << col << "' stroke-width='2' points='";
        for (auto [x, y] : pts) out << X(x) << ',' << Y(y) << ' ';
        out << "'/>\n";
        for (auto [x, y] : pts)
            out << "<circle cx='" << X(x) << "' cy='" << Y(y) << "' r='3' fill='" << col
                << "'/>\n";
        out << "<text x='" << W - MR + 10 << "' y='" << MT + 16 + 16 * ci
            << "' font-size='12' fill='" << col << "'>" << label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace

int run_experiment(const std::string& spec_path, const std::string& out_dir, int jobs,
                   bool plots) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot read " + spec_path);
    json spec;
    in >> spec;
    std::filesystem::create_directories(out_dir);

    const json runs = spec.value("runs", json::array());
    std::vector<RunResult> results(runs.size());

    std::mutex mtx;
    size_t cursor = 0;
    auto worker = [&] {
        while (true) {
            size_t i;
            {
                std::lock_guard<std::mutex> lock(mtx);
                if (cursor >= runs.size()) return;
                i = cursor++;
            }
            const json& jr = runs[i];
            RunResult& rr = results[i];
            rr.name = jr.value("name", "run" + std::to_string(i));
            rr.mode = jr.value("mode", "rsbnp");
            rr.baseline = jr.value("baseline", "");
            rr.group = jr.value("group", "");
            if (jr.contains("x")) rr.x = jr["x"].get<double>();
            try {
                Instance inst;
                if (jr.contains("instance")) {
                    inst = read_instance(jr["instance"].get<std::string>());
                } else {
                    GeneratorConfig g = gen_config_from(jr.at("gen"));
                    rr.seed = static_cast<long long>(g.seed);
                    rr.compartments = g.n_compartments;
                    inst = generate(g);
                }
                rr.n = inst.num_clients();
                if (!rr.compartments) rr.compartments = inst.vehicle.num_compartments();
                SolverConfig cfg = solver_config_from(jr);
                Solution sol = dispatch_solve(inst, rr.mode, cfg);
                rr.status = to_string(sol.status);
                rr.objective = from_milli(sol.objective);
                rr.vehicles = static_cast<int>(sol.routes.size());
                rr.columns = sol.stats.columns;
                rr.nodes = sol.stats.nodes;
                rr.seconds = sol.wall_seconds;
            } catch (const std::exception& e) {
                rr.failed = true;
                rr.error = e.what();
                rr.status = "error";
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (RunResult& rr : results) {
        if (rr.baseline.empty() || rr.failed) continue;
        for (const RunResult& other : results)
            if (other.name == rr.baseline && !other.failed && other.objective > 0.0)
                rr.gap = (rr.objective - other.objective) / other.objective;
    }

    std::ofstream csv(out_dir + "/report.csv");
    csv << "name,mode,n,compartments,seed,status,Obj,Veh,Col,Nod,Time,Gap\n";
    for (const RunResult& rr : results) {
        csv << rr.name << ',' << rr.mode << ',' << rr.n << ',' << rr.compartments << ','
            << rr.seed << ',' << rr.status << ',';
        if (rr.failed) csv << ",,,,,";
        else {
            csv << std::fixed << std::setprecision(3) << rr.objective << ',' << rr.vehicles
                << ',' << rr.columns << ',' << rr.nodes << ',' << std::setprecision(2)
                << rr.seconds << ',';
            if (!std::isnan(rr.gap)) csv << std::setprecision(4) << rr.gap * 100.0 << '%';
        }
        csv << '\n';
    }

    std::ofstream txt(out_dir + "/report.txt");
    txt << std::left << std::setw(18) << "name" << std::setw(8) << "mode" << std::setw(5) << "n"
        << std::setw(6) << "comp" << std::setw(11) << "status" << std::right << std::setw(12)
        << "Obj" << std::setw(6) << "#Veh" << std::setw(8) << "#Col" << std::setw(7) << "#Nod"
        << std::setw(9) << "Time" << std::setw(9) << "Gap" << '\n';
    for (const RunResult& rr : results) {
        txt << std::left << std::setw(18) << rr.name << std::setw(8) << rr.mode << std::setw(5)
            << rr.n << std::setw(6) << rr.compartments << std::setw(11) << rr.status
            << std::right;
        if (rr.failed) {
            txt << "  " << rr.error << '\n';
            continue;
        }
        txt << std::setw(12) << std::fixed << std::setprecision(2) << rr.objective
            << std::setw(6) << rr.vehicles << std::setw(8) << rr.columns << std::setw(7)
            << rr.nodes << std::setw(9) << std::setprecision(2) << rr.seconds;
        if (!std::isnan(rr.gap))
            txt << std::setw(8) << std::setprecision(2) << rr.gap * 100.0 << '%';
        txt << '\n';
    }

    if (plots) {
        std::map<std::string, std::vector<std::pair<double, double>>> obj_series, time_series;
        for (const RunResult& rr : results) {
            if (rr.failed || rr.group.empty() || std::isnan(rr.x)) continue;
            obj_series[rr.group].push_back({rr.x, rr.objective});
            time_series[rr.group].push_back({rr.x, rr.seconds});
        }
        if (!obj_series.empty()) {
            write_svg_plot(out_dir + "/objective.svg", "compartments", "objective", obj_series);
            write_svg_plot(out_dir + "/time.svg", "compartments", "seconds", time_series);
        }
    }

    return 0;
}

}  // namespace mcbp
