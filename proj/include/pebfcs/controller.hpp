#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pebfcs/heuristic.hpp"
#include "pebfcs/models.hpp"
#include "pebfcs/scenario.hpp"

namespace pebfcs {

enum class StrategyKind {
    coordinated_no_ess,              // charging optimised, storage idle
    coordinated_with_ess,            // charging and storage jointly optimised
    coordinated_with_ess_heuristic,  // block dispatch + storage response
    uncoordinated_with_ess,          // charge-on-arrival, storage response only
};

const char* to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& name);

/// Mean of a prior estimate and the realized observations so far.
double forecast_delta_soc(double prior_mean, const std::vector<double>& observed);

/// The command actually executed in one realized interval: always the first
/// interval of that step's plan.
struct IntervalCommand {
    int interval = 0;                // realized scenario interval (1-based)
    int plan_offset = 0;             // position within the plan that was executed
    std::vector<int> peb_on_charge;  // per bus
    double ess_charge_kw = 0.0;
    double ess_discharge_kw = 0.0;
    std::string solver_status;
    double solve_seconds = 0.0;
    bool fallback = false;  // plan unavailable; held a safe action instead
};

struct EpisodeResult {
    StrategyKind strategy = StrategyKind::coordinated_no_ess;
    ChargeSchedule realized;
    CostBreakdown costs;                 // on the realized schedule
    std::vector<IntervalCommand> log;    // one entry per realized interval
    std::vector<Violation> violations;   // audit of the realized schedule
    int unmet_demand_events = 0;         // departures below the required SOC
    int fallback_count = 0;
    double mean_solve_seconds = 0.0;
};

struct ControllerConfig {
    milp::SolverConfig solver;
    /// true: future trip energies are estimated from running means;
    /// false: the controller sees the realized values (perfect information).
    bool use_forecasts = true;
    /// Relative noise applied to the controller's believed trip energies
    /// (one multiplier per trip, seeded); the realized system always uses the
    /// true values. 0 disables.
    double forecast_noise_sd = 0.0;
    std::uint64_t noise_seed = 0;
    /// Safety factor on believed demands: plan for (1 + margin) times the
    /// believed trip energy, so forecast errors do not strand a bus.
    double demand_margin = 0.0;
    /// Non-empty: MILP windows are solved by `<command> model.mps solution`
    /// instead of the built-in solver (the dispatch heuristic and the
    /// storage-response LP always use the built-in simplex).
    std::string external_solver;
};

/// One window planned under a strategy; `status` (if given) receives the
/// solver verdict. Throws when no usable plan exists.
ChargeSchedule plan_window_schedule(const WindowInput& win, StrategyKind strategy,
                                    const ControllerConfig& config,
                                    std::string* status = nullptr);

/// Charge-on-arrival baseline: every parked bus charges at full rate until
/// its battery is full or it departs, piles first-come-first-served.
ChargeSchedule uncoordinated_profile(const Scenario& s);

/// Rolling-horizon closed loop over the realized scenario: at every interval
/// re-plan over a full-length window (wrapping past the horizon end into a
/// forecast replay of the day) and execute only the first planned interval.
EpisodeResult run_episode(const Scenario& realized, StrategyKind strategy,
                          const ControllerConfig& config = {});

/// commands.csv, profile.csv and summary.json under `dir`.
void write_episode_files(const EpisodeResult& result, const Scenario& scenario,
                         const std::string& dir);

}  // namespace pebfcs
