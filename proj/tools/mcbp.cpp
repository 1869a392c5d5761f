#include <CLI11.hpp>
#include <iostream>

#include "mcbp/bnb.hpp"
#include "mcbp/experiment.hpp"
#include "mcbp/heuristic.hpp"
#include "mcbp/io.hpp"
#include "mcbp/oracle.hpp"
#include "mcbp/rolling.hpp"

using namespace mcbp;

namespace {
constexpr int kExitSolved = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitInputError = 4;
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mcbp - branch-and-price solver for multi-compartment routing "
                 "with multiple time windows"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve an instance file");
    std::string mode = "bnp", instance_path, out_path, log_path;
    double time_limit = 1e18, kappa = -1.0;
    double eps_t = -1.0, eps_c = -1.0, eps_g = -1.0, eps_o = -1.0;
    int threads = 1, cluster_min = 20, cluster_max = 25;
    double cluster_step = 0.5;
    bool partitioning = false, covering = false, no_rs_relaxed = false;
    solve->add_option("--mode", mode, "bnp | rsbnp | lh | oracle")->required();
    solve->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
    solve->add_option("--out", out_path, "solution JSON path")->required();
    solve->add_option("--time-limit", time_limit, "seconds");
    solve->add_option("--threads", threads, "parallel cluster pricing threads");
    solve->add_option("--kappa", kappa, "loading-check slack in load units");
    solve->add_option("--eps-t", eps_t, "aggressive dominance slack on time");
    solve->add_option("--eps-c", eps_c, "aggressive dominance slack on cost");
    solve->add_option("--eps-g", eps_g, "aggressive dominance slack on daily work");
    solve->add_option("--eps-o", eps_o, "aggressive dominance slack on daily distance");
    solve->add_option("--cluster-min", cluster_min);
    solve->add_option("--cluster-max", cluster_max);
    solve->add_option("--cluster-step", cluster_step, "step as a fraction of the window");
    solve->add_option("--log", log_path, "search log path");
    solve->add_flag("--partitioning", partitioning, "equality master rows");
    solve->add_flag("--covering", covering, "covering master rows (default)");
    solve->add_flag("--exact-compartments", no_rs_relaxed,
                    "track compartments exactly in cluster pricing");

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance");
    GeneratorConfig gcfg;
    std::string gen_out;
    bool stw = false;
    double demand_min = -1.0, demand_max = -1.0;
    gen->add_option("--n", gcfg.n_clients, "number of clients")->required();
    gen->add_option("--compartments", gcfg.n_compartments, "2, 4, 6 or 8");
    gen->add_option("--seed", gcfg.seed)->required();
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--horizon-days", gcfg.horizon_days);
    gen->add_option("--active-days", gcfg.active_days, "days that may carry a window");
    gen->add_option("--windows-per-day", gcfg.windows_per_day);
    gen->add_flag("--stw", stw, "keep only the primary window per client");
    gen->add_option("--demand-min", demand_min, "load units");
    gen->add_option("--demand-max", demand_max, "load units");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a batch of solves");
    std::string spec_path, exp_out = "report";
    int jobs = 1;
    bool plots = false;
    exp->add_option("--spec", spec_path)->required()->check(CLI::ExistingFile);
    exp->add_option("--out", exp_out, "output directory");
    exp->add_option("--jobs", jobs, "parallel runs");
    exp->add_flag("--plots", plots, "emit SVG plots");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            Instance inst = read_instance(instance_path);
            std::vector<Violation> bad = validate_instance(inst);
            if (!bad.empty()) {
                for (const Violation& v : bad)
                    std::cerr << "invalid instance: " << v.what << " (" << v.detail << ")\n";
                return kExitInputError;
            }
            SolverConfig cfg;
            cfg.time_limit = time_limit;
            cfg.threads = threads;
            cfg.covering = !partitioning;
            cfg.cluster_min = cluster_min;
            cfg.cluster_max = cluster_max;
            cfg.cluster_step = cluster_step;
            cfg.rs_relaxed = !no_rs_relaxed;
            cfg.log_path = log_path;
            if (kappa >= 0.0) cfg.kappa_abs = to_milli(kappa);
            if (eps_t >= 0.0) cfg.eps.time = to_milli(eps_t);
            if (eps_c >= 0.0) cfg.eps.cost = to_milli(eps_c);
            if (eps_g >= 0.0) cfg.eps.work = to_milli(eps_g);
            if (eps_o >= 0.0) cfg.eps.drive = to_milli(eps_o);

            Solution sol = dispatch_solve(inst, mode, cfg);
            write_solution(sol, out_path);
            std::cout << "status=" << to_string(sol.status)
                      << " objective=" << milli_to_string(sol.objective)
                      << " lower_bound=" << sol.lower_bound / 1000.0
                      << " routes=" << sol.routes.size() << " columns=" << sol.stats.columns
                      << " nodes=" << sol.stats.nodes << " wall=" << sol.wall_seconds << "s\n";
            switch (sol.status) {
                case SolveStatus::Optimal:
                case SolveStatus::Feasible: return kExitSolved;
                case SolveStatus::Infeasible: return kExitInfeasible;
                case SolveStatus::TimeLimit: return kExitTimeLimit;
            }
            return kExitSolved;
        }
        if (gen->parsed()) {
            gcfg.multi_window = !stw;
            if (demand_min >= 0.0) gcfg.demand_min = to_milli(demand_min);
            if (demand_max >= 0.0) gcfg.demand_max = to_milli(demand_max);
            Instance inst = generate(gcfg);
            write_instance(inst, gen_out);
            std::cout << "wrote " << gen_out << " (" << inst.num_clients() << " clients, "
                      << inst.vehicle.num_compartments() << " compartments)\n";
            return kExitSolved;
        }
        if (exp->parsed()) return run_experiment(spec_path, exp_out, jobs, plots);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
