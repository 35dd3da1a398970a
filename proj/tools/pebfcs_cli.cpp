// Command-line front end: window solves, closed-loop simulations, parameter
// sweeps, strategy comparisons, MPS export and scenario generation.
//
// Exit codes: 0 success; 2 invalid input; 3 infeasible; 4 solver limit hit
// (incumbent still written); 5 external solver unavailable.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pebfcs/controller.hpp"
#include "pebfcs/json_io.hpp"
#include "pebfcs/milp/mps.hpp"
#include "pebfcs/models.hpp"
#include "pebfcs/report.hpp"
#include "pebfcs/scenario.hpp"

namespace fs = std::filesystem;
using namespace pebfcs;

namespace {

constexpr int kOk = 0;
constexpr int kInvalidInput = 2;
constexpr int kInfeasible = 3;
constexpr int kLimitHit = 4;
constexpr int kExternalUnavailable = 5;

struct CommonOptions {
    std::string scenario_file;
    std::string strategy = "coordinated-with-ess";
    std::uint64_t seed = 1;
    std::string solver = "builtin";
    std::string out_dir;
    int dt_min = 0;
    int intervals = 0;
    double gap = 0.02;
    double time_limit = 60.0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--scenario", o.scenario_file, "Scenario JSON file (default: generated)");
    cmd->add_option("--strategy", o.strategy,
                    "coordinated-no-ess | coordinated-with-ess | "
                    "coordinated-with-ess-heuristic | uncoordinated-with-ess");
    cmd->add_option("--seed", o.seed, "Seed for generated scenarios");
    cmd->add_option("--solver", o.solver, "builtin or external:<command>");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--dt-min", o.dt_min, "Interval length in minutes for generated scenarios");
    cmd->add_option("--intervals", o.intervals, "Interval count for generated scenarios");
    cmd->add_option("--gap", o.gap, "Relative optimality gap (default 0.02)");
    cmd->add_option("--time-limit", o.time_limit, "Per-solve time limit in seconds (default 60; 0 = unlimited)");
}

Scenario make_scenario(const CommonOptions& o) {
    if (!o.scenario_file.empty()) {
        Scenario s = load_scenario_file(o.scenario_file);
        validate(s);
        return s;
    }
    CaseStudyParams p = paper_case_params();
    p.seed = o.seed;
    if (o.dt_min > 0) p.grid.interval_minutes = o.dt_min;
    if (o.intervals > 0) p.grid.interval_count = o.intervals;
    return generate(p);
}

ControllerConfig make_config(const CommonOptions& o) {
    ControllerConfig cfg;
    cfg.solver.relative_gap = o.gap;
    cfg.solver.time_limit_seconds = o.time_limit;
    cfg.use_forecasts = false;
    if (o.solver.rfind("external:", 0) == 0)
        cfg.external_solver = o.solver.substr(std::string("external:").size());
    else if (o.solver != "builtin")
        throw CLI::ValidationError("--solver must be builtin or external:<command>");
    return cfg;
}

fs::path ensure_out(const CommonOptions& o, const char* fallback) {
    fs::path dir = o.out_dir.empty() ? fs::path(fallback) : fs::path(o.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_schedule_json(const ChargeSchedule& s, const CostBreakdown& costs,
                         const std::string& status, const fs::path& file) {
    nlohmann::json j;
    j["solver_status"] = status;
    j["peb_on_charge"] = s.peb_on_charge;
    j["pile_state"] = s.pile_state;
    j["ess_charge_kw"] = s.ess_charge_kw;
    j["ess_discharge_kw"] = s.ess_discharge_kw;
    j["ess_soc"] = s.ess_soc;
    j["costs"] = {{"epc", costs.epc},         {"essc", costs.essc},
                  {"ecc", costs.ecc},         {"peak_kw", costs.peak_kw},
                  {"window_total", costs.window_total}, {"annualized_total", costs.annualized_total}};
    std::ofstream f(file);
    f << j.dump(2) << "\n";
}

int cmd_solve(const CommonOptions& o) {
    Scenario sc = make_scenario(o);
    WindowInput win = WindowInput::from_scenario(sc);
    ControllerConfig cfg = make_config(o);
    StrategyKind strat = strategy_from_string(o.strategy);
    std::string status;
    ChargeSchedule plan;
    try {
        plan = plan_window_schedule(win, strat, cfg, &status);
    } catch (const std::exception& e) {
        std::string what = e.what();
        std::cerr << "no plan: " << what << "\n";
        return what.find("infeasible") != std::string::npos ? kInfeasible : kLimitHit;
    }
    CostBreakdown costs = cost_breakdown(plan, sc);
    std::printf("status            %s\n", status.c_str());
    std::printf("purchase cost     %.4f\n", costs.epc);
    std::printf("storage life cost %.4f\n", costs.essc);
    std::printf("capacity charge   %.4f\n", costs.ecc);
    std::printf("peak load (kW)    %.4f\n", costs.peak_kw);
    std::printf("window total      %.4f\n", costs.window_total);
    std::printf("annualized        %.4f\n", costs.annualized_total);
    fs::path dir = ensure_out(o, "out");
    write_schedule_json(plan, costs, status, dir / "schedule.json");
    std::printf("schedule written to %s\n", (dir / "schedule.json").c_str());
    bool limit = status == "gap_limit" || status == "node_limit";
    return limit ? kLimitHit : kOk;
}

int cmd_simulate(const CommonOptions& o) {
    Scenario sc = make_scenario(o);
    ControllerConfig cfg = make_config(o);
    EpisodeResult r = run_episode(sc, strategy_from_string(o.strategy), cfg);
    fs::path dir = ensure_out(o, "out");
    write_episode_files(r, sc, dir.string());
    emit_plot_data(r, sc, dir.string());
    std::printf("strategy          %s\n", to_string(r.strategy));
    std::printf("annualized cost   %.2f\n", r.costs.annualized_total);
    std::printf("peak load (kW)    %.2f\n", r.costs.peak_kw);
    std::printf("unmet departures  %d\n", r.unmet_demand_events);
    std::printf("fallback steps    %d\n", r.fallback_count);
    std::printf("mean solve (s)    %.3f\n", r.mean_solve_seconds);
    std::printf("outputs in %s\n", dir.c_str());
    return kOk;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::string field;
    std::istringstream is(csv);
    while (std::getline(is, field, ',')) out.push_back(std::stod(field));
    if (out.empty()) throw CLI::ValidationError("--values must list at least one number");
    return out;
}

int cmd_sweep(const CommonOptions& o, const std::string& values_csv, bool capacity) {
    Scenario sc = make_scenario(o);
    ControllerConfig cfg = make_config(o);
    StrategyKind strat = strategy_from_string(o.strategy);
    std::vector<double> xs = parse_values(values_csv);
    SweepResult r = capacity ? sweep_capacity(sc, xs, strat, cfg)
                             : sweep_price(sc, xs, strat, cfg);
    std::string csv = sweep_to_csv(r, capacity ? "capacity_kwh" : "ess_unit_price");
    fs::path dir = ensure_out(o, "out");
    fs::path file = dir / (capacity ? "sweep_capacity.csv" : "sweep_price.csv");
    std::ofstream(file) << csv;
    std::cout << csv;
    return kOk;
}

int cmd_compare(const CommonOptions& o) {
    Scenario sc = make_scenario(o);
    ControllerConfig cfg = make_config(o);
    std::vector<LabeledRun> runs;
    for (StrategyKind k :
         {StrategyKind::uncoordinated_with_ess, StrategyKind::coordinated_no_ess,
          StrategyKind::coordinated_with_ess, StrategyKind::coordinated_with_ess_heuristic})
        runs.push_back({to_string(k), sc, run_episode(sc, k, cfg)});
    ComparisonTable t = compare_runs(runs);
    std::string csv = t.to_csv();
    fs::path dir = ensure_out(o, "out");
    std::ofstream(dir / "comparison.csv") << csv;
    std::cout << csv;
    return kOk;
}

int cmd_export_mps(const CommonOptions& o) {
    Scenario sc = make_scenario(o);
    WindowInput win = WindowInput::from_scenario(sc);
    StrategyKind strat = strategy_from_string(o.strategy);
    BuiltModel model;
    switch (strat) {
        case StrategyKind::coordinated_no_ess: {
            WindowInput w = win;
            w.ess = EssSpec{};
            model = build_model_a(w);
            break;
        }
        case StrategyKind::uncoordinated_with_ess: {
            ChargeSchedule fixed = uncoordinated_profile(sc);
            std::vector<double> load(sc.grid.interval_count, 0.0);
            for (int k = 1; k <= sc.grid.interval_count; ++k)
                load[k - 1] = fixed.on_charge_count(k) * sc.fleet.rated_charge_power_kw;
            model = build_model_c(win, load);
            break;
        }
        default:
            model = win.ess.present() ? build_model_b(win) : build_model_a(win);
    }
    fs::path dir = ensure_out(o, "out");
    fs::path file = dir / "model.mps";
    std::ofstream(file) << milp::write_mps(model.instance);
    std::printf("%zu variables, %zu constraints written to %s\n", model.instance.vars.size(),
                model.instance.cons.size(), file.c_str());
    return kOk;
}

int cmd_paper_case(const CommonOptions& o) {
    CaseStudyParams p = paper_case_params();
    p.seed = o.seed;
    if (o.dt_min > 0) p.grid.interval_minutes = o.dt_min;
    if (o.intervals > 0) p.grid.interval_count = o.intervals;
    Scenario sc = generate(p);
    std::string text = scenario_to_json(sc);
    if (o.out_dir.empty()) {
        std::cout << text << "\n";
    } else {
        fs::path dir = ensure_out(o, "out");
        std::ofstream(dir / "scenario.json") << text << "\n";
        std::printf("scenario written to %s\n", (dir / "scenario.json").c_str());
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Charging-station scheduling: MILP models, dispatch heuristic and "
                 "rolling-horizon controller"};
    app.require_subcommand(1);

    CommonOptions o;
    std::string values;

    CLI::App* solve = app.add_subcommand("solve", "Optimize one day-ahead window");
    add_common(solve, o);
    CLI::App* simulate = app.add_subcommand("simulate", "Run a closed-loop episode");
    add_common(simulate, o);
    CLI::App* sweep_cap =
        app.add_subcommand("sweep-capacity", "Episodes across storage capacities");
    add_common(sweep_cap, o);
    sweep_cap->add_option("--values", values, "Comma-separated capacities in kWh")
        ->default_val("0,200,400,800,1600");
    CLI::App* sweep_pr = app.add_subcommand("sweep-price", "Episodes across storage prices");
    add_common(sweep_pr, o);
    sweep_pr->add_option("--values", values, "Comma-separated storage unit prices")
        ->default_val("8000,6000,4000,2000");
    CLI::App* compare = app.add_subcommand("compare", "All strategies on one scenario");
    add_common(compare, o);
    CLI::App* export_mps = app.add_subcommand("export-mps", "Write the window model as MPS");
    add_common(export_mps, o);
    CLI::App* paper = app.add_subcommand("paper-case", "Emit the default scenario as JSON");
    add_common(paper, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalidInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(o);
        if (simulate->parsed()) return cmd_simulate(o);
        if (sweep_cap->parsed()) return cmd_sweep(o, values, /*capacity=*/true);
        if (sweep_pr->parsed()) return cmd_sweep(o, values, /*capacity=*/false);
        if (compare->parsed()) return cmd_compare(o);
        if (export_mps->parsed()) return cmd_export_mps(o);
        if (paper->parsed()) return cmd_paper_case(o);
    } catch (const milp::ExternalSolverUnavailable& e) {
        std::cerr << "external solver unavailable: " << e.what() << "\n";
        return kExternalUnavailable;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kInvalidInput;
}
