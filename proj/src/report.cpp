#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "pebfcs/json_io.hpp"
#include "pebfcs/report.hpp"

namespace pebfcs {

namespace {

/// Serialization of everything two comparable runs must share: the physical
/// system and the timetable, but not the storage or cost parameters.
std::string comparison_key(const Scenario& s) {
    Scenario stripped = s;
    stripped.ess = EssSpec{};
    stripped.cost = CostParams{1.0, 1.0, 1, 0.5, 1};
    return scenario_to_json(stripped);
}

/// Price-band label: ranks the interval's price among the distinct tariff
/// levels, 1 = cheapest.
std::vector<int> price_bands(const TariffSchedule& tariff) {
    std::vector<double> levels = tariff.price_per_interval;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 levels.end());
    std::vector<int> bands;
    bands.reserve(tariff.price_per_interval.size());
    for (double p : tariff.price_per_interval) {
        auto it = std::lower_bound(levels.begin(), levels.end(), p - 1e-12);
        bands.push_back(static_cast<int>(it - levels.begin()) + 1);
    }
    return bands;
}

SweepResult run_sweep(const Scenario& base, const std::vector<double>& xs,
                      StrategyKind strategy, const ControllerConfig& config,
                      const std::function<Scenario(double)>& instantiate) {
    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(xs.size());
    for (double x : xs)
        jobs.push_back(std::async(std::launch::async, [&, x] {
            EpisodeResult r = run_episode(instantiate(x), strategy, config);
            return SweepPoint{x, r.costs.annualized_total, r.costs.peak_kw};
        }));
    SweepResult out;
    out.points.reserve(xs.size());
    for (auto& j : jobs) out.points.push_back(j.get());
    (void)base;
    return out;
}

}  // namespace

std::string ComparisonTable::to_csv() const {
    std::ostringstream os;
    os << "strategy,epc,essc,ecc,aoc,peak_kw,aoc_reduction_pct,peak_reduction_pct,"
          "mean_solve_seconds\n";
    os << std::fixed;
    for (const auto& r : rows) {
        os << r.label << ',' << std::setprecision(2) << r.epc << ',' << r.essc << ',' << r.ecc
           << ',' << r.aoc << ',' << r.peak_kw << ',' << r.aoc_reduction_pct << ','
           << r.peak_reduction_pct << ',' << std::setprecision(4) << r.mean_solve_seconds
           << '\n';
    }
    return os.str();
}

ComparisonTable compare_runs(const std::vector<LabeledRun>& runs) {
    if (runs.empty()) throw std::invalid_argument("compare_runs: no runs");
    const std::string key = comparison_key(runs.front().scenario);
    ComparisonTable table;
    for (const auto& run : runs) {
        if (comparison_key(run.scenario) != key)
            throw std::invalid_argument("compare_runs: runs use different scenarios (" +
                                        run.label + ")");
        RunSummary row;
        row.label = run.label;
        row.epc = run.result.costs.epc;
        row.essc = run.result.costs.essc;
        row.ecc = run.result.costs.ecc;
        row.aoc = run.result.costs.annualized_total;
        row.peak_kw = run.result.costs.peak_kw;
        row.mean_solve_seconds = run.result.mean_solve_seconds;
        table.rows.push_back(row);
    }
    const RunSummary& base = table.rows.front();
    for (auto& row : table.rows) {
        if (base.aoc != 0.0) row.aoc_reduction_pct = (base.aoc - row.aoc) / base.aoc * 100.0;
        if (base.peak_kw != 0.0)
            row.peak_reduction_pct = (base.peak_kw - row.peak_kw) / base.peak_kw * 100.0;
    }
    return table;
}

SweepResult sweep_capacity(const Scenario& base, const std::vector<double>& capacities_kwh,
                           StrategyKind strategy, const ControllerConfig& config) {
    SweepResult out = run_sweep(base, capacities_kwh, strategy, config, [&](double cap) {
        Scenario s = base;
        s.ess.capacity_kwh = cap;
        if (cap <= 0.0) {
            s.ess = EssSpec{};
        } else if (base.ess.present()) {
            // Power limits stay at the base rating: convergence of the curve
            // comes from capacity outgrowing what the converters can cycle.
        } else {
            s.ess.max_charge_kw = s.ess.max_discharge_kw = 1.25 * cap;
            s.ess.charge_eff = s.ess.discharge_eff = 0.92;
            s.ess.soc_min = 0.2;
            s.ess.initial_soc = 0.5;
        }
        return s;
    });
    // Knee: the first capacity whose step to the next one no longer improves
    // the AOC by at least 0.1%; if every step helps, the last capacity.
    out.knee = out.points.empty() ? 0.0 : out.points.back().x;
    for (size_t i = 0; i + 1 < out.points.size(); ++i) {
        double cur = out.points[i].aoc;
        double next = out.points[i + 1].aoc;
        double rel = cur > 0.0 ? (cur - next) / cur : 0.0;
        if (rel < 1e-3) {
            out.knee = out.points[i].x;
            break;
        }
    }
    return out;
}

SweepResult sweep_price(const Scenario& base, const std::vector<double>& unit_prices,
                        StrategyKind strategy, const ControllerConfig& config) {
    SweepResult out = run_sweep(base, unit_prices, strategy, config, [&](double price) {
        Scenario s = base;
        s.cost.ess_unit_price = price;
        return s;
    });
    out.knee = out.points.empty() ? 0.0 : out.points.back().x;
    return out;
}

std::string sweep_to_csv(const SweepResult& sweep, const std::string& x_name) {
    std::ostringstream os;
    os << x_name << ",aoc,peak_kw\n" << std::fixed << std::setprecision(2);
    for (const auto& p : sweep.points)
        os << p.x << ',' << p.aoc << ',' << p.peak_kw << '\n';
    os << "# knee_" << x_name << ',' << sweep.knee << '\n';
    return os.str();
}

void emit_plot_data(const EpisodeResult& result, const Scenario& scenario,
                    const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const int K = scenario.grid.interval_count;
    std::vector<int> bands = price_bands(scenario.tariff);

    {
        std::ofstream f(fs::path(dir) / "load_profile.csv");
        f << "interval,clock_min,price,price_band,peb_load_kw,other_load_kw,ess_net_kw,"
             "total_load_kw\n";
        for (int k = 1; k <= K; ++k) {
            double peb =
                result.realized.on_charge_count(k) * scenario.fleet.rated_charge_power_kw;
            double other = scenario.station.other_loads_kw.empty()
                               ? 0.0
                               : scenario.station.other_loads_kw[k - 1];
            double net = result.realized.ess_charge_kw[k - 1] -
                         result.realized.ess_discharge_kw[k - 1];
            f << k << ',' << scenario.grid.clock_of(k) << ','
              << scenario.tariff.price_per_interval[k - 1] << ',' << bands[k - 1] << ',' << peb
              << ',' << other << ',' << net << ',' << (peb + other + net) << '\n';
        }
    }
    {
        std::ofstream f(fs::path(dir) / "ess_soc.csv");
        f << "interval,clock_min,price_band,ess_soc\n";
        for (int k = 1; k <= K; ++k)
            f << k << ',' << scenario.grid.clock_of(k) << ',' << bands[k - 1] << ','
              << result.realized.ess_soc[k] << '\n';
    }
    {
        std::ofstream f(fs::path(dir) / "ess_power.csv");
        f << "interval,clock_min,price_band,charge_kw,discharge_kw\n";
        for (int k = 1; k <= K; ++k)
            f << k << ',' << scenario.grid.clock_of(k) << ',' << bands[k - 1] << ','
              << result.realized.ess_charge_kw[k - 1] << ','
              << result.realized.ess_discharge_kw[k - 1] << '\n';
    }
}

}  // namespace pebfcs
