#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pebfcs {

/// Uniform discretization of the optimising horizon.
struct TimeGrid {
    int interval_count = 0;          // card(K)
    double interval_minutes = 0.0;   // dt, minutes
    int start_clock = 0;             // minutes since midnight of interval 1

    double dt_hours() const { return interval_minutes / 60.0; }
    /// Clock minutes-since-midnight at the start of interval k (1-based), wrapped to a day.
    int clock_of(int k) const {
        long long m = start_clock + static_cast<long long>((k - 1) * interval_minutes);
        return static_cast<int>(m % (24 * 60));
    }
};

struct TariffSchedule {
    std::vector<double> price_per_interval;  // money per kWh
};

struct CostParams {
    double ess_unit_price = 0.0;   // money per kWh of ESS
    double capacity_charge = 0.0;  // money per kW of peak
    int ess_cycle_count = 1;       // rated charge-discharge cycles
    double discount_rate = 0.0;    // fraction in (0,1)
    int station_life_years = 1;
};

struct FleetSpec {
    std::vector<double> battery_capacity_kwh;  // per bus
    double rated_charge_power_kw = 0.0;        // fleet-wide on/off rate
    double charge_efficiency = 1.0;
    double soc_min = 0.0;

    int bus_count() const { return static_cast<int>(battery_capacity_kwh.size()); }
};

struct EssSpec {
    double capacity_kwh = 0.0;  // 0 means no ESS
    double max_charge_kw = 0.0;
    double max_discharge_kw = 0.0;
    double charge_eff = 1.0;
    double discharge_eff = 1.0;
    double soc_min = 0.0;
    double initial_soc = 0.0;

    bool present() const { return capacity_kwh > 0.0; }
};

struct StationSpec {
    int pile_count = 1;
    std::vector<double> other_loads_kw;  // per interval
};

/// One stay of a bus at the station, with the energy demand of the trip
/// that follows it.
struct ParkingEvent {
    int bus_id = 0;
    int arrival_interval = 0;    // a, 1-based
    int departure_interval = 0;  // l, 1-based
    std::optional<double> arrival_soc;  // empty: to be forecast
    double next_trip_delta_soc = 0.0;
    bool open_ended = false;  // departure truncated past the window end
};

struct Timetable {
    std::vector<std::vector<ParkingEvent>> by_bus;  // ordered per bus
};

/// The decision variables of one window as realized values.
struct ChargeSchedule {
    std::vector<std::vector<int>> peb_on_charge;  // N x K, 0/1
    std::vector<std::vector<int>> pile_state;     // M x K, 0/1
    std::vector<double> ess_charge_kw;            // K
    std::vector<double> ess_discharge_kw;         // K
    std::vector<double> ess_soc;                  // K+1 trajectory

    static ChargeSchedule zeros(int buses, int piles, int intervals, double initial_ess_soc = 0.0);
    int intervals() const { return ess_charge_kw.empty() ? (peb_on_charge.empty() ? 0 : static_cast<int>(peb_on_charge[0].size())) : static_cast<int>(ess_charge_kw.size()); }
    /// Number of buses on charge in interval k (1-based).
    int on_charge_count(int k) const;
};

struct CostBreakdown {
    double epc = 0.0;
    double essc = 0.0;
    double ecc = 0.0;
    double peak_kw = 0.0;
    double window_total = 0.0;
    double annualized_total = 0.0;
};

struct Scenario {
    TimeGrid grid;
    TariffSchedule tariff;
    CostParams cost;
    FleetSpec fleet;
    EssSpec ess;
    StationSpec station;
    Timetable timetable;
};

/// Throws std::invalid_argument naming the first violated field.
void validate(const Scenario& s);

// ---- cost and energy arithmetic ----

double capital_recovery_factor(double alpha, int gamma_years);

double window_fraction(const TimeGrid& grid);

double electricity_purchase_cost(const ChargeSchedule& schedule, const FleetSpec& fleet,
                                 const TariffSchedule& tariff, const TimeGrid& grid);

double ess_life_cost(const ChargeSchedule& schedule, const EssSpec& ess,
                     const CostParams& cost, const TimeGrid& grid);

double peak_load(const ChargeSchedule& schedule, const FleetSpec& fleet,
                 const StationSpec& station);

double equivalent_capacity_charge(double peak_kw, const CostParams& cost, const TimeGrid& grid);

/// Purchase cost of the station's other loads alone.
double other_loads_cost(const StationSpec& station, const TariffSchedule& tariff,
                        const TimeGrid& grid);

/// Cumulative [min, max] delivered (post-efficiency) kWh through parking
/// index `up_to` (0-based into `events`), relative to the SOC at the first
/// event's arrival. The lower bound is clamped at zero.
std::pair<double, double> recharge_energy_bounds(const std::vector<ParkingEvent>& events,
                                                 double first_arrival_soc,
                                                 const FleetSpec& fleet, int bus_index,
                                                 int up_to);

/// Full breakdown for one window. Other-load purchases are reported inside
/// epc only when `include_other_loads` is set.
CostBreakdown cost_breakdown(const ChargeSchedule& schedule, const Scenario& scenario,
                             bool include_other_loads = true);

/// Window cost scaled to a year (inverse of the window fraction).
double annualize(double window_total, const TimeGrid& grid);

}  // namespace pebfcs
