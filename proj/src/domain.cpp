#include "pebfcs/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pebfcs {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ChargeSchedule ChargeSchedule::zeros(int buses, int piles, int intervals, double initial_ess_soc) {
    ChargeSchedule s;
    s.peb_on_charge.assign(buses, std::vector<int>(intervals, 0));
    s.pile_state.assign(piles, std::vector<int>(intervals, 0));
    s.ess_charge_kw.assign(intervals, 0.0);
    s.ess_discharge_kw.assign(intervals, 0.0);
    s.ess_soc.assign(intervals + 1, initial_ess_soc);
    return s;
}

int ChargeSchedule::on_charge_count(int k) const {
    int count = 0;
    for (const auto& row : peb_on_charge) count += row[k - 1];
    return count;
}

void validate(const Scenario& s) {
    require(s.grid.interval_count >= 1, "grid.interval_count must be >= 1");
    require(s.grid.interval_minutes > 0.0, "grid.interval_minutes must be > 0");
    require(s.grid.interval_count * s.grid.interval_minutes <= 7 * 24 * 60.0,
            "grid window exceeds one week");
    require(static_cast<int>(s.tariff.price_per_interval.size()) == s.grid.interval_count,
            "tariff length must equal interval_count");
    for (double p : s.tariff.price_per_interval) require(p >= 0.0, "tariff prices must be >= 0");

    require(s.cost.ess_unit_price > 0.0, "cost.ess_unit_price must be > 0");
    require(s.cost.capacity_charge > 0.0, "cost.capacity_charge must be > 0");
    require(s.cost.ess_cycle_count >= 1, "cost.ess_cycle_count must be >= 1");
    require(s.cost.discount_rate > 0.0 && s.cost.discount_rate < 1.0,
            "cost.discount_rate must be in (0,1)");
    require(s.cost.station_life_years >= 1, "cost.station_life_years must be >= 1");

    require(s.fleet.bus_count() >= 0, "fleet must have nonnegative bus count");
    for (double c : s.fleet.battery_capacity_kwh)
        require(c > 0.0, "fleet battery capacities must be > 0");
    require(s.fleet.rated_charge_power_kw > 0.0, "fleet.rated_charge_power_kw must be > 0");
    require(s.fleet.charge_efficiency > 0.0 && s.fleet.charge_efficiency <= 1.0,
            "fleet.charge_efficiency must be in (0,1]");
    require(s.fleet.soc_min >= 0.0 && s.fleet.soc_min < 1.0, "fleet.soc_min must be in [0,1)");

    require(s.ess.capacity_kwh >= 0.0, "ess.capacity_kwh must be >= 0");
    if (s.ess.present()) {
        require(s.ess.charge_eff > 0.0 && s.ess.charge_eff <= 1.0,
                "ess.charge_eff must be in (0,1]");
        require(s.ess.discharge_eff > 0.0 && s.ess.discharge_eff <= 1.0,
                "ess.discharge_eff must be in (0,1]");
        require(s.ess.soc_min >= 0.0 && s.ess.soc_min < 1.0, "ess.soc_min must be in [0,1)");
        require(s.ess.initial_soc >= s.ess.soc_min && s.ess.initial_soc <= 1.0,
                "ess.initial_soc must be in [soc_min, 1]");
        require(s.ess.max_charge_kw >= 0.0 && s.ess.max_discharge_kw >= 0.0,
                "ess power limits must be >= 0");
    }

    require(s.station.pile_count >= 1, "station.pile_count must be >= 1");
    require(static_cast<int>(s.station.other_loads_kw.size()) == s.grid.interval_count,
            "station.other_loads_kw length must equal interval_count");
    for (double l : s.station.other_loads_kw)
        require(l >= 0.0, "station.other_loads_kw must be >= 0");

    require(static_cast<int>(s.timetable.by_bus.size()) == s.fleet.bus_count(),
            "timetable must have one event list per bus");
    for (int n = 0; n < s.fleet.bus_count(); ++n) {
        int prev_end = std::numeric_limits<int>::min();  // first arrival may be <= 0
        for (const auto& e : s.timetable.by_bus[n]) {
            // Arrivals before the window carry a <= 0; only the upper end is bounded.
            require(e.arrival_interval <= s.grid.interval_count,
                    "parking event must start inside the window");
            if (!e.open_ended)
                require(e.arrival_interval < e.departure_interval,
                        "parking event must have arrival < departure");
            require(e.arrival_interval >= prev_end,
                    "parking events of one bus must be disjoint and ordered");
            prev_end = e.open_ended ? s.grid.interval_count + 1 : e.departure_interval;
            require(e.next_trip_delta_soc >= 0.0 &&
                        e.next_trip_delta_soc <= 1.0 - s.fleet.soc_min,
                    "next_trip_delta_soc must be in [0, 1 - soc_min]");
            require(s.fleet.soc_min + e.next_trip_delta_soc <= 1.0 + 1e-12,
                    "soc_min + delta_soc must not exceed 1");
            if (e.arrival_soc)
                require(*e.arrival_soc >= 0.0 && *e.arrival_soc <= 1.0,
                        "arrival_soc must be in [0,1]");
        }
    }
}

double capital_recovery_factor(double alpha, int gamma_years) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("discount rate must be in (0,1)");
    if (gamma_years < 1) throw std::domain_error("life years must be >= 1");
    double growth = std::pow(1.0 + alpha, gamma_years);
    return alpha * growth / (growth - 1.0);
}

double window_fraction(const TimeGrid& grid) {
    return grid.interval_count * grid.interval_minutes / (365.0 * 24.0 * 60.0);
}

double electricity_purchase_cost(const ChargeSchedule& schedule, const FleetSpec& fleet,
                                 const TariffSchedule& tariff, const TimeGrid& grid) {
    const int K = grid.interval_count;
    if (static_cast<int>(tariff.price_per_interval.size()) != K ||
        schedule.intervals() != K)
        throw std::invalid_argument("electricity_purchase_cost: dimension mismatch");
    const double dt_h = grid.dt_hours();
    double total = 0.0;
    for (int k = 1; k <= K; ++k) {
        double grid_kw = schedule.on_charge_count(k) * fleet.rated_charge_power_kw +
                         schedule.ess_charge_kw[k - 1] - schedule.ess_discharge_kw[k - 1];
        total += grid_kw * dt_h * tariff.price_per_interval[k - 1];
    }
    return total;
}

double ess_life_cost(const ChargeSchedule& schedule, const EssSpec& ess, const CostParams& cost,
                     const TimeGrid& grid) {
    double throughput_kwh = 0.0;
    const double dt_h = grid.dt_hours();
    for (double p : schedule.ess_charge_kw) throughput_kwh += p * ess.charge_eff * dt_h;
    return cost.ess_unit_price / cost.ess_cycle_count * throughput_kwh;
}

double peak_load(const ChargeSchedule& schedule, const FleetSpec& fleet,
                 const StationSpec& station) {
    const int K = schedule.intervals();
    if (static_cast<int>(station.other_loads_kw.size()) != K)
        throw std::invalid_argument("peak_load: other_loads length mismatch");
    double peak = 0.0;
    for (int k = 1; k <= K; ++k) {
        double load = schedule.on_charge_count(k) * fleet.rated_charge_power_kw +
                      schedule.ess_charge_kw[k - 1] - schedule.ess_discharge_kw[k - 1] +
                      station.other_loads_kw[k - 1];
        peak = std::max(peak, load);
    }
    return peak;
}

double equivalent_capacity_charge(double peak_kw, const CostParams& cost, const TimeGrid& grid) {
    if (peak_kw < 0.0) throw std::domain_error("peak_kw must be >= 0");
    return window_fraction(grid) *
           capital_recovery_factor(cost.discount_rate, cost.station_life_years) * peak_kw *
           cost.capacity_charge;
}

double other_loads_cost(const StationSpec& station, const TariffSchedule& tariff,
                        const TimeGrid& grid) {
    const int K = grid.interval_count;
    if (static_cast<int>(station.other_loads_kw.size()) != K ||
        static_cast<int>(tariff.price_per_interval.size()) != K)
        throw std::invalid_argument("other_loads_cost: dimension mismatch");
    double total = 0.0;
    for (int k = 0; k < K; ++k)
        total += station.other_loads_kw[k] * grid.dt_hours() * tariff.price_per_interval[k];
    return total;
}

std::pair<double, double> recharge_energy_bounds(const std::vector<ParkingEvent>& events,
                                                 double first_arrival_soc, const FleetSpec& fleet,
                                                 int bus_index, int up_to) {
    if (up_to < 0 || up_to >= static_cast<int>(events.size()))
        throw std::invalid_argument("recharge_energy_bounds: parking index out of range");
    const double capacity = fleet.battery_capacity_kwh.at(bus_index);
    double demand_sum = 0.0;
    for (int i = 0; i <= up_to; ++i) demand_sum += events[i].next_trip_delta_soc;
    double demand_before = demand_sum - events[up_to].next_trip_delta_soc;

    double min_kwh = std::max(0.0, (demand_sum + fleet.soc_min - first_arrival_soc) * capacity);
    double max_kwh = (demand_before + 1.0 - first_arrival_soc) * capacity;
    if (min_kwh > max_kwh + 1e-9)
        throw std::runtime_error("recharge_energy_bounds: infeasible demand (min > max)");
    return {min_kwh, max_kwh};
}

CostBreakdown cost_breakdown(const ChargeSchedule& schedule, const Scenario& scenario,
                             bool include_other_loads) {
    CostBreakdown out;
    out.epc = electricity_purchase_cost(schedule, scenario.fleet, scenario.tariff, scenario.grid);
    if (include_other_loads)
        out.epc += other_loads_cost(scenario.station, scenario.tariff, scenario.grid);
    out.essc = ess_life_cost(schedule, scenario.ess, scenario.cost, scenario.grid);
    out.peak_kw = peak_load(schedule, scenario.fleet, scenario.station);
    out.ecc = equivalent_capacity_charge(out.peak_kw, scenario.cost, scenario.grid);
    out.window_total = out.epc + out.essc + out.ecc;
    out.annualized_total = annualize(out.window_total, scenario.grid);
    return out;
}

double annualize(double window_total, const TimeGrid& grid) {
    return window_total / window_fraction(grid);
}

}  // namespace pebfcs
