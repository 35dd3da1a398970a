// Acceptance suite: ten end-to-end checks on the optimisation models, the
// dispatch heuristic, the rolling-horizon controller and the reporting layer.
// Prints one PASS/FAIL line per criterion; exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pebfcs/controller.hpp"
#include "pebfcs/heuristic.hpp"
#include "pebfcs/milp/solver.hpp"
#include "pebfcs/models.hpp"
#include "pebfcs/report.hpp"
#include "pebfcs/scenario.hpp"

using namespace pebfcs;

namespace {

int failures = 0;
std::string detail;  // populated by each check for the FAIL line

void report(int number, const char* title, bool ok) {
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number, title,
                ok || detail.empty() ? "" : " -- ", ok ? "" : detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
    detail.clear();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---- shared scenario builders -------------------------------------------

ParkingEvent ev(int bus, int a, int l, double delta, bool open = false) {
    ParkingEvent e;
    e.bus_id = bus;
    e.arrival_interval = a;
    e.departure_interval = l;
    e.arrival_soc = 0.5;
    e.next_trip_delta_soc = delta;
    e.open_ended = open;
    return e;
}

/// Randomized hand-sized window: hourly grid, 100 kWh batteries charged at
/// 25 kW (0.25 SOC per interval), one short stay per bus. Small enough for
/// exhaustive enumeration.
WindowInput random_tiny_window(std::mt19937_64& rng, bool with_ess) {
    std::uniform_int_distribution<int> buses_d(1, 3), K_d(6, 10), span_d(2, 4);
    std::uniform_real_distribution<double> price_d(0.3, 1.5), load_d(0.0, 8.0);
    int buses = buses_d(rng);
    int K = K_d(rng);
    WindowInput w;
    w.grid = {K, 60.0, 0};
    w.tariff.price_per_interval.resize(K);
    for (double& p : w.tariff.price_per_interval) p = price_d(rng);
    w.cost = {4000.0, 14847.0, 15000, 0.05, 50};
    w.fleet.battery_capacity_kwh.assign(buses, 100.0);
    w.fleet.rated_charge_power_kw = 25.0;
    w.fleet.charge_efficiency = 1.0;
    w.fleet.soc_min = 0.1;
    w.station.pile_count = std::max(1, buses - 1);
    w.station.other_loads_kw.resize(K);
    for (double& p : w.station.other_loads_kw) p = load_d(rng);
    w.timetable.by_bus.assign(buses, {});
    w.prev_on_charge.assign(buses, 0);
    w.blocks_started.assign(buses, 0);
    w.first_arrival_soc.assign(buses, 0.35);
    w.delivered_before_kwh.assign(buses, 0.0);
    for (int n = 0; n < buses; ++n) {
        int span = span_d(rng);
        std::uniform_int_distribution<int> a_d(1, K - span);
        int a = a_d(rng);
        // Demand sized so one or two charging intervals always suffice.
        double delta = 0.25 * std::uniform_int_distribution<int>(0, 2)(rng);
        w.timetable.by_bus[n].push_back(ev(n, a, a + span, delta));
    }
    if (with_ess) {
        w.ess = {60.0, 20.0, 20.0, 0.92, 0.92, 0.2, 0.5};
        w.ess_initial_soc = w.ess.initial_soc;
    }
    return w;
}

/// Two cheap-expensive-cheap price swings over twelve hours with a steep
/// capacity charge: storage arbitrage and peak shaving are both clearly
/// worthwhile. Each bus needs one charging interval, so without storage the
/// peak is a bus at rated power on top of the base load; the storage
/// converter (10 kW charge, 20 kW discharge) can shave that peak while
/// recharging below it.
Scenario arbitrage_scenario() {
    Scenario s;
    s.grid = {12, 60.0, 0};
    s.tariff.price_per_interval = {0.2, 0.2, 1.2, 1.2, 0.2, 0.2,
                                   0.2, 1.2, 1.2, 0.2, 0.2, 0.2};
    s.cost = {100.0, 60000.0, 5000, 0.05, 50};
    s.fleet.battery_capacity_kwh = {100.0, 100.0};
    s.fleet.rated_charge_power_kw = 20.0;
    s.fleet.charge_efficiency = 1.0;
    s.fleet.soc_min = 0.1;
    s.ess = {80.0, 10.0, 20.0, 1.0, 1.0, 0.2, 0.5};
    s.station.pile_count = 2;
    s.station.other_loads_kw.assign(12, 5.0);
    s.timetable.by_bus = {{ev(0, 1, 10, 0.5)}, {ev(1, 3, 11, 0.5)}};
    return s;
}

ControllerConfig quick_config(double gap = 1e-4, double limit = 0.0) {
    ControllerConfig cfg;
    cfg.use_forecasts = false;
    cfg.solver.relative_gap = gap;
    cfg.solver.time_limit_seconds = limit;
    return cfg;
}

std::string decision_fingerprint(const EpisodeResult& r) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& c : r.log) {
        os << c.interval << '|' << c.plan_offset << '|' << c.fallback << '|' << c.ess_charge_kw
           << '|' << c.ess_discharge_kw << '|';
        for (int v : c.peb_on_charge) os << v;
        os << '\n';
    }
    os << r.costs.window_total << ' ' << r.costs.peak_kw << ' ' << r.unmet_demand_events;
    return os.str();
}

/// ESS trajectory checks shared by criteria 5 and 6.
bool storage_invariants(const ChargeSchedule& s, const EssSpec& ess, const TimeGrid& grid,
                        const char* tag) {
    if (!ess.present()) return true;
    const int K = grid.interval_count;
    for (int k = 0; k < K; ++k) {
        if (s.ess_charge_kw[k] * s.ess_discharge_kw[k] > 1e-9) {
            detail = std::string(tag) + ": simultaneous charge and discharge at interval " +
                     std::to_string(k + 1);
            return false;
        }
        double next = s.ess_soc[k] + (s.ess_charge_kw[k] * ess.charge_eff -
                                      s.ess_discharge_kw[k] / ess.discharge_eff) *
                                         grid.dt_hours() / ess.capacity_kwh;
        if (!close(s.ess_soc[k + 1], next, 1e-9)) {
            detail = std::string(tag) + ": SOC recurrence off at interval " + std::to_string(k + 1);
            return false;
        }
    }
    if (!close(s.ess_soc[K], s.ess_soc[0], 1e-6)) {
        detail = std::string(tag) + ": final SOC " + std::to_string(s.ess_soc[K]) +
                 " != initial " + std::to_string(s.ess_soc[0]);
        return false;
    }
    return true;
}

// ---- criteria ------------------------------------------------------------

// Criterion 1: exhaustive-enumeration equivalence on tiny instances, plus
// criteria 4/5/6 side checks collected from the same solves.
struct TinyResults {
    bool oracle_ok = true;
    bool degeneracy_ok = true;
    bool complementarity_ok = true;
    double seconds = 0.0;
    int instances = 0;
};

TinyResults run_tiny_instances() {
    TinyResults out;
    auto t0 = std::chrono::steady_clock::now();
    milp::SolverConfig cfg;
    for (std::uint64_t seed = 1; seed <= 30 && out.oracle_ok; ++seed) {
        std::mt19937_64 rng(seed);
        for (bool with_ess : {false, true}) {
            WindowInput w = random_tiny_window(rng, with_ess);
            BuiltModel m = with_ess ? build_model_b(w) : build_model_a(w);
            if (m.instance.binary_count() > 20) continue;
            ++out.instances;
            auto exact = milp::brute_force_binary(m.instance, cfg);
            auto bb = milp::solve_milp(m.instance, cfg);
            if (exact.status != milp::SolveStatus::optimal ||
                bb.status != milp::SolveStatus::optimal ||
                !close(exact.objective, bb.objective, 1e-6 * std::max(1.0, std::abs(exact.objective)))) {
                detail = "seed " + std::to_string(seed) + (with_ess ? " B" : " A") +
                         ": enumeration " + std::to_string(exact.objective) +
                         " vs branch-and-bound " + std::to_string(bb.objective);
                out.oracle_ok = false;
                break;
            }
            ChargeSchedule s = extract_schedule(bb, m.map, w);
            auto viol = verify_schedule(s, w, with_ess ? ModelKind::coordinated_with_ess
                                                       : ModelKind::coordinated_no_ess);
            if (!viol.empty()) {
                detail = "seed " + std::to_string(seed) + ": violation " + viol[0].constraint;
                out.oracle_ok = false;
                break;
            }
            if (with_ess) {
                // Criteria 5/6 on the same optimum.
                if (!storage_invariants(s, w.ess, w.grid, "tiny B")) out.complementarity_ok = false;
                if (window_objective(s, w) > bb.objective + 1e-6) {
                    detail = "cleanup raised the objective on seed " + std::to_string(seed);
                    out.complementarity_ok = false;
                }
                // Criterion 4: zero-capacity storage degenerates to model A.
                WindowInput bare = w;
                bare.ess = EssSpec{};
                auto a = milp::solve_milp(build_model_a(bare).instance, cfg);
                auto b0 = milp::solve_milp(build_model_b(bare).instance, cfg);
                if (!close(a.objective, b0.objective, 1e-6 * std::max(1.0, std::abs(a.objective)))) {
                    detail = "seed " + std::to_string(seed) + ": A " + std::to_string(a.objective) +
                             " vs degenerate B " + std::to_string(b0.objective);
                    out.degeneracy_ok = false;
                }
            }
        }
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

bool criterion2_cost_formulas() {
    // Capital-recovery factor against its closed form and the published
    // rounded value.
    double crf = capital_recovery_factor(0.05, 50);
    if (!close(crf, 0.05 / (1.0 - std::pow(1.05, -50.0)), 1e-12) || !close(crf, 0.0547767, 1e-6)) {
        detail = "capital recovery factor " + std::to_string(crf);
        return false;
    }
    // Horizon fraction of a year for the standard grid.
    if (!close(window_fraction({288, 5.0, 0}), 1.0 / 365.0, 1e-15)) {
        detail = "window fraction of the 288x5min grid";
        return false;
    }
    // Purchase cost of one bus charging one five-minute interval.
    TimeGrid g{1, 5.0, 0};
    FleetSpec fleet;
    fleet.battery_capacity_kwh = {324.0};
    fleet.rated_charge_power_kw = 117.0;
    fleet.charge_efficiency = 0.92;
    ChargeSchedule s = ChargeSchedule::zeros(1, 1, 1);
    s.peb_on_charge[0][0] = 1;
    double epc = electricity_purchase_cost(s, fleet, {{1.3222}}, g);
    if (!close(epc, 117.0 * (5.0 / 60.0) * 1.3222, 1e-9)) {
        detail = "purchase cost " + std::to_string(epc);
        return false;
    }
    // Storage wear for one interval of charging at 100 kW.
    EssSpec ess{800.0, 1000.0, 1000.0, 0.92, 0.92, 0.2, 0.5};
    CostParams cost{4000.0, 15000.0, 15000, 0.05, 50};
    ChargeSchedule se = ChargeSchedule::zeros(0, 1, 1, 0.5);
    se.ess_charge_kw = {100.0};
    se.ess_discharge_kw = {0.0};
    double essc = ess_life_cost(se, ess, cost, g);
    if (!close(essc, 4000.0 / 15000.0 * 100.0 * (5.0 / 60.0) * 0.92, 1e-9)) {
        detail = "storage life cost " + std::to_string(essc);
        return false;
    }
    // Capacity charge of a 1000 kW peak over the standard grid.
    CostParams cap{4000.0, 14847.0, 15000, 0.05, 50};
    double ecc = equivalent_capacity_charge(1000.0, cap, {288, 5.0, 0});
    double crf_exact = 0.05 / (1.0 - std::pow(1.05, -50.0));
    if (!close(ecc, 1.0 / 365.0 * crf_exact * 14847.0 * 1000.0, 1e-6)) {
        detail = "capacity charge " + std::to_string(ecc);
        return false;
    }
    return true;
}

struct LadderOutcome {
    bool ok = true;
    bool storage_ok = true;  // criteria 5/6 on the desk-scale optimum
};

LadderOutcome criterion3_ladder() {
    LadderOutcome out;
    milp::SolverConfig cfg;
    cfg.relative_gap = 0.02;
    cfg.time_limit_seconds = 120.0;
    struct Case {
        int buses;
        std::uint64_t seed;
    };
    for (Case c : {Case{6, 3}, Case{8, 4}}) {
        Scenario sc = generate(desk_case_params(c.buses, 96, 15.0, c.seed));
        WindowInput win = WindowInput::from_scenario(sc);
        WindowInput bare = win;
        bare.ess = EssSpec{};

        auto relaxed = milp::solve_lp(build_model_a_relaxed(bare).instance, cfg);
        // Limits are wall-clock; give a solve that produced no incumbent one
        // retry with double the budget before declaring failure.
        auto solve_retry = [&](const milp::MilpInstance& inst) {
            auto sol = milp::solve_milp(inst, cfg);
            if (sol.values.empty() && sol.status != milp::SolveStatus::infeasible) {
                milp::SolverConfig wide = cfg;
                wide.time_limit_seconds *= 2.0;
                sol = milp::solve_milp(inst, wide);
            }
            return sol;
        };
        auto a = solve_retry(build_model_a(bare).instance);
        BuiltModel bm = build_model_b(win);
        auto b = solve_retry(bm.instance);
        HeuristicResult h = heuristic_strategy(win, cfg);
        double heur = window_objective(h.schedule, win);

        auto usable = [](const milp::MilpSolution& s) {
            return !s.values.empty() && (s.status == milp::SolveStatus::optimal ||
                                         s.status == milp::SolveStatus::gap_limit ||
                                         s.status == milp::SolveStatus::node_limit);
        };
        if (relaxed.status != milp::SolveStatus::optimal || !usable(a) || !usable(b)) {
            detail = "desk scenario with " + std::to_string(c.buses) +
                     " buses did not solve (relaxed " + milp::to_string(relaxed.status) +
                     ", A " + milp::to_string(a.status) + ", B " + milp::to_string(b.status) +
                     ")";
            out.ok = false;
            break;
        }
        double tol = 1e-6 * std::max(1.0, std::abs(a.objective));
        if (relaxed.objective > a.objective + tol || b.objective > a.objective + tol ||
            heur < b.objective - tol || heur > b.objective * 1.05) {
            std::ostringstream os;
            os.precision(10);
            os << c.buses << " buses: relaxed " << relaxed.objective << ", A " << a.objective
               << ", B " << b.objective << ", heuristic " << heur;
            detail = os.str();
            out.ok = false;
            break;
        }
        ChargeSchedule sb = extract_schedule(b, bm.map, win);
        if (!storage_invariants(sb, win.ess, win.grid, "desk B")) out.storage_ok = false;
        if (window_objective(sb, win) > b.objective + 1e-6) {
            detail = "cleanup raised the desk-scale objective";
            out.storage_ok = false;
        }
    }
    return out;
}

/// Model C (storage against a fixed charging profile) for criteria 5/6.
bool criterion56_model_c() {
    Scenario sc = arbitrage_scenario();
    WindowInput win = WindowInput::from_scenario(sc);
    ChargeSchedule fixed = uncoordinated_profile(sc);
    std::vector<double> load(sc.grid.interval_count);
    for (int k = 1; k <= sc.grid.interval_count; ++k)
        load[k - 1] = fixed.on_charge_count(k) * sc.fleet.rated_charge_power_kw;
    BuiltModel m = build_model_c(win, load);
    auto sol = milp::solve_lp(m.instance);
    if (sol.status != milp::SolveStatus::optimal) {
        detail = "storage-response LP did not solve";
        return false;
    }
    ChargeSchedule s = extract_schedule(sol, m.map, win);
    if (!storage_invariants(s, win.ess, win.grid, "model C")) return false;
    if (window_objective(s, win) > sol.objective + 1e-6) {
        detail = "cleanup raised the storage-response objective";
        return false;
    }
    return true;
}

bool criterion7_trends() {
    // Trends (a), (b) and (d) are statements about the optimal day-ahead
    // strategy, so they are evaluated on exact single-window plans (episodes
    // compose myopic re-solves and are not guaranteed monotone).
    ControllerConfig exact = quick_config(1e-7, 0.0);
    auto plan_costs = [&](const Scenario& s) {
        WindowInput win = WindowInput::from_scenario(s);
        ChargeSchedule plan =
            plan_window_schedule(win, StrategyKind::coordinated_with_ess, exact);
        return cost_breakdown(plan, s);
    };
    Scenario arb = arbitrage_scenario();

    // (a) cheaper storage never raises the annual cost.
    double prev_aoc = 0.0;
    bool first = true;
    for (double price : {8000.0, 6000.0, 4000.0, 2000.0}) {
        Scenario s = arb;
        s.cost.ess_unit_price = price;
        double aoc = plan_costs(s).annualized_total;
        if (!first && aoc > prev_aoc + 1e-6 * std::max(1.0, std::abs(prev_aoc))) {
            detail = "price ladder not non-increasing at " + std::to_string(price);
            return false;
        }
        prev_aoc = aoc;
        first = false;
    }

    // (b) storage strictly beats no storage where arbitrage pays.
    Scenario bare = arb;
    bare.ess = EssSpec{};
    CostBreakdown with = plan_costs(arb);
    CostBreakdown without = plan_costs(bare);
    if (with.annualized_total >= without.annualized_total - 1e-6 ||
        with.peak_kw >= without.peak_kw - 1e-6) {
        detail = "storage did not strictly lower cost and peak (" +
                 std::to_string(with.annualized_total) + " vs " +
                 std::to_string(without.annualized_total) + ")";
        return false;
    }

    // (c) coordination never loses to charge-on-arrival on paired seeds.
    ControllerConfig desk_cfg = quick_config(0.02, 10.0);
    for (std::uint64_t seed : {31ull, 32ull, 33ull}) {
        Scenario sc = generate(desk_case_params(3, 24, 60.0, seed));
        EpisodeResult coord = run_episode(sc, StrategyKind::coordinated_with_ess, desk_cfg);
        EpisodeResult unco = run_episode(sc, StrategyKind::uncoordinated_with_ess, desk_cfg);
        if (coord.costs.annualized_total >
            unco.costs.annualized_total + 1e-6 * unco.costs.annualized_total) {
            detail = "seed " + std::to_string(seed) + ": coordinated " +
                     std::to_string(coord.costs.annualized_total) + " > uncoordinated " +
                     std::to_string(unco.costs.annualized_total);
            return false;
        }
    }

    // (d) capacity curve converges: non-increasing with a knee (marginal
    // improvement < 0.1%) before the largest capacity. Converter power stays
    // at the base rating, as in the capacity sweep, so the curve flattens
    // once the power bound rather than the energy bound binds.
    std::vector<double> capacities = {0.0, 20.0, 40.0, 80.0, 160.0, 320.0};
    std::vector<double> aocs;
    for (double cap : capacities) {
        Scenario s = arb;
        if (cap <= 0.0)
            s.ess = EssSpec{};
        else
            s.ess.capacity_kwh = cap;
        aocs.push_back(plan_costs(s).annualized_total);
    }
    double knee = capacities.back();
    for (size_t i = 0; i + 1 < aocs.size(); ++i) {
        if (aocs[i + 1] > aocs[i] + 1e-6 * std::max(1.0, std::abs(aocs[i]))) {
            detail = "capacity curve not non-increasing at " +
                     std::to_string(capacities[i + 1]);
            return false;
        }
        double rel = (aocs[i] - aocs[i + 1]) / std::max(1.0, std::abs(aocs[i]));
        if (rel < 1e-3 && knee == capacities.back()) knee = capacities[i];
    }
    if (knee >= capacities.back()) {
        detail = "capacity curve still improving at the largest capacity";
        return false;
    }
    return true;
}

bool criterion8_heuristic_feasibility() {
    milp::SolverConfig cfg;
    cfg.relative_gap = 0.02;
    cfg.time_limit_seconds = 10.0;
    int done = 0;
    for (std::uint64_t seed = 100; seed < 260 && done < 100; ++seed) {
        Scenario sc;
        try {
            sc = generate(desk_case_params(3, 24, 60.0, seed));
        } catch (const std::exception&) {
            continue;  // timetable draw too dense for the coarse grid
        }
        ++done;
        WindowInput win = WindowInput::from_scenario(sc);
        HeuristicResult h = heuristic_dispatch(win, cfg);
        if (!h.shortfalls.empty()) {
            detail = "seed " + std::to_string(seed) + ": " +
                     std::to_string(h.shortfalls.size()) + " shortfalls";
            return false;
        }
        for (const auto& v : verify_schedule(h.schedule, win, ModelKind::coordinated_no_ess)) {
            if (v.constraint == "pile_count" || v.constraint == "parking_only" ||
                v.constraint == "single_block") {
                detail = "seed " + std::to_string(seed) + ": " + v.constraint + " violated";
                return false;
            }
        }
    }
    if (done < 100) {
        detail = "only " + std::to_string(done) + " scenarios generated";
        return false;
    }
    return true;
}

bool criterion9_noise_robustness() {
    for (std::uint64_t seed : {41ull, 42ull}) {
        Scenario sc = generate(desk_case_params(3, 24, 60.0, seed));
        // Perfect information first: the demands must be physically satisfiable.
        EpisodeResult base =
            run_episode(sc, StrategyKind::coordinated_with_ess, quick_config(0.02, 8.0));
        if (base.unmet_demand_events != 0) {
            detail = "seed " + std::to_string(seed) + ": demands not satisfiable even with " +
                     "perfect information";
            return false;
        }
        ControllerConfig noisy = quick_config(0.03, 8.0);
        noisy.use_forecasts = true;
        noisy.forecast_noise_sd = 0.10;
        noisy.noise_seed = seed * 7 + 1;
        noisy.demand_margin = 0.30;
        EpisodeResult r = run_episode(sc, StrategyKind::coordinated_with_ess, noisy);
        if (r.unmet_demand_events != 0) {
            detail = "seed " + std::to_string(seed) + ": " +
                     std::to_string(r.unmet_demand_events) + " unmet departures under noise";
            return false;
        }
        // Log audit: every executed command is the first interval of its plan,
        // one command per realized interval.
        if (static_cast<int>(r.log.size()) != sc.grid.interval_count) {
            detail = "log length " + std::to_string(r.log.size());
            return false;
        }
        for (size_t i = 0; i < r.log.size(); ++i)
            if (r.log[i].plan_offset != 0 || r.log[i].interval != static_cast<int>(i) + 1) {
                detail = "command " + std::to_string(i) + " not a first-interval command";
                return false;
            }
    }
    return true;
}

bool criterion10_determinism() {
    Scenario sc = generate(desk_case_params(2, 24, 60.0, 17));
    ControllerConfig noisy = quick_config(0.02, 8.0);
    noisy.use_forecasts = true;
    noisy.forecast_noise_sd = 0.10;
    noisy.noise_seed = 5;
    noisy.demand_margin = 0.30;
    EpisodeResult r1 = run_episode(sc, StrategyKind::coordinated_with_ess, noisy);
    EpisodeResult r2 = run_episode(sc, StrategyKind::coordinated_with_ess, noisy);
    if (decision_fingerprint(r1) != decision_fingerprint(r2)) {
        detail = "episode logs differ between identical runs";
        return false;
    }
    // Episode files: byte-identical apart from the wall-clock timing column.
    namespace fs = std::filesystem;
    fs::path dir1 = fs::temp_directory_path() / "accept_det_1";
    fs::path dir2 = fs::temp_directory_path() / "accept_det_2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    write_episode_files(r1, sc, dir1.string());
    write_episode_files(r2, sc, dir2.string());
    auto strip_timing = [](const fs::path& file) {
        std::ifstream f(file);
        std::ostringstream out;
        std::string line;
        bool header = true;
        int drop = -1;
        while (std::getline(f, line)) {
            std::istringstream ls(line);
            std::string field;
            int col = 0;
            bool first = true;
            while (std::getline(ls, field, ',')) {
                if (header && field == "solve_seconds") drop = col;
                if (col != drop) {
                    if (!first) out << ',';
                    out << field;
                    first = false;
                }
                ++col;
            }
            out << '\n';
            header = false;
        }
        return out.str();
    };
    auto slurp = [](const fs::path& file) {
        std::ifstream f(file);
        std::ostringstream out;
        out << f.rdbuf();
        return out.str();
    };
    if (strip_timing(dir1 / "commands.csv") != strip_timing(dir2 / "commands.csv") ||
        slurp(dir1 / "profile.csv") != slurp(dir2 / "profile.csv")) {
        detail = "episode files differ between identical runs";
        return false;
    }
    // Sweep CSVs: byte-identical across repeated runs.
    Scenario arb = arbitrage_scenario();
    ControllerConfig cfg = quick_config();
    std::string s1 = sweep_to_csv(
        sweep_price(arb, {8000.0, 4000.0}, StrategyKind::coordinated_with_ess, cfg), "price");
    std::string s2 = sweep_to_csv(
        sweep_price(arb, {8000.0, 4000.0}, StrategyKind::coordinated_with_ess, cfg), "price");
    if (s1 != s2) {
        detail = "sweep CSVs differ between identical runs";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    TinyResults tiny = run_tiny_instances();
    if (tiny.oracle_ok && tiny.seconds >= 60.0) {
        detail = "took " + std::to_string(tiny.seconds) + " s";
        tiny.oracle_ok = false;
    }
    if (tiny.oracle_ok && tiny.instances < 50) {
        detail = "only " + std::to_string(tiny.instances) + " instances";
        tiny.oracle_ok = false;
    }
    report(1, "branch-and-bound matches exhaustive enumeration on tiny instances",
           tiny.oracle_ok);
    report(2, "cost formulas match the hand oracles", criterion2_cost_formulas());
    LadderOutcome ladder = criterion3_ladder();
    report(3, "model-consistency ladder holds on desk-scale scenarios", ladder.ok);
    report(4, "zero-capacity storage model reduces to the storage-free model",
           tiny.degeneracy_ok);
    bool model_c_ok = criterion56_model_c();
    report(5, "no simultaneous charge/discharge after cleanup; cleanup never costs",
           tiny.complementarity_ok && ladder.storage_ok && model_c_ok);
    report(6, "storage energy balance and SOC recurrence hold in every optimum",
           tiny.complementarity_ok && ladder.storage_ok && model_c_ok);
    report(7, "published qualitative trends reproduce", criterion7_trends());
    report(8, "dispatch heuristic feasible across 100 seeded scenarios",
           criterion8_heuristic_feasibility());
    report(9, "noisy rolling horizon meets all demands, first-interval commands only",
           criterion9_noise_robustness());
    report(10, "identical seeds reproduce bit-identical logs and sweep outputs",
           criterion10_determinism());
    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return failures == 0 ? 0 : 1;
}
