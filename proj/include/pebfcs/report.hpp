#pragma once

#include <string>
#include <vector>

#include "pebfcs/controller.hpp"

namespace pebfcs {

/// One row of the strategy comparison table.
struct RunSummary {
    std::string label;
    double epc = 0.0;
    double essc = 0.0;
    double ecc = 0.0;
    double aoc = 0.0;      // annualized total
    double peak_kw = 0.0;
    double mean_solve_seconds = 0.0;
    double aoc_reduction_pct = 0.0;   // vs the first (baseline) row
    double peak_reduction_pct = 0.0;  // vs the first (baseline) row
};

struct ComparisonTable {
    std::vector<RunSummary> rows;  // rows[0] is the baseline
    std::string to_csv() const;
};

struct LabeledRun {
    std::string label;
    Scenario scenario;
    EpisodeResult result;
};

/// Reductions are relative to the first run. All runs must share the same
/// grid, tariff, fleet, station and timetable (storage and cost parameters
/// may differ — that is what is being compared); otherwise throws
/// std::invalid_argument.
ComparisonTable compare_runs(const std::vector<LabeledRun>& runs);

struct SweepPoint {
    double x = 0.0;  // capacity in kWh, or unit price
    double aoc = 0.0;
    double peak_kw = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // in input order
    double knee = 0.0;  // first x where the marginal AOC improvement < 0.1%
};

/// Episodes at each storage capacity (power limits kept at the base rating;
/// when the base scenario has no storage they default to 1.25x capacity);
/// same seed and timetable throughout. Points run in parallel.
SweepResult sweep_capacity(const Scenario& base, const std::vector<double>& capacities_kwh,
                           StrategyKind strategy, const ControllerConfig& config = {});

/// Episodes at each storage unit price; knee is not meaningful here and is
/// left at the last price.
SweepResult sweep_price(const Scenario& base, const std::vector<double>& unit_prices,
                        StrategyKind strategy, const ControllerConfig& config = {});

std::string sweep_to_csv(const SweepResult& sweep, const std::string& x_name);

/// Per-figure plot CSVs under `dir`: load_profile.csv, ess_soc.csv,
/// ess_power.csv, each with a price-band annotation column.
void emit_plot_data(const EpisodeResult& result, const Scenario& scenario,
                    const std::string& dir);

}  // namespace pebfcs
