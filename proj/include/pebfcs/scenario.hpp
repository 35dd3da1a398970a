#pragma once

#include <cstdint>
#include <string>

#include "pebfcs/domain.hpp"

namespace pebfcs {

/// Case-study inputs: a loop bus route served from one station, departures
/// grouped by hour, Gaussian speed and per-trip energy draws.
struct DepartureBand {
    int start_minute = 0;  // clock minutes since midnight
    int end_minute = 0;
    int count = 0;  // departures spread evenly across the band
};

struct CaseStudyParams {
    double route_length_km = 50.0;
    double speed_mean_kmh = 50.0;
    double speed_sd_kmh = 5.0;
    double trip_energy_mean_kwh = 70.0;
    double trip_energy_sd_kwh = 7.0;
    std::vector<DepartureBand> departures;
    TimeGrid grid;
    CostParams cost;
    FleetSpec fleet;
    EssSpec ess;
    int pile_count = 10;
    std::vector<double> other_loads_kw;  // empty: zeros
    double initial_bus_soc = 0.9;
    std::uint64_t seed = 0;
};

/// The full published case configuration (24 buses, 10 piles, 288 five-minute
/// intervals, four-band tariff, 147 departures per day).
CaseStudyParams paper_case_params();

/// A reduced configuration for desk-scale runs; same structure, smaller
/// fleet and coarser grid.
CaseStudyParams desk_case_params(int bus_count, int interval_count, double interval_minutes,
                                 std::uint64_t seed);

/// Four-band time-of-use tariff mapped onto the grid; overlapping peak bands
/// override high bands.
TariffSchedule default_tariff(const TimeGrid& grid);

enum class LoadProfileKind { zero, flat, double_hump };

/// Deterministic synthetic other-load shape, normalized so max == peak_kw.
std::vector<double> synth_other_loads(LoadProfileKind kind, double peak_kw, const TimeGrid& grid);

/// Builds the scenario: departures assigned round-robin (earliest-available
/// override), trip durations from speed draws, per-trip SOC drops from
/// energy draws; deterministic under params.seed.
Scenario generate(const CaseStudyParams& params);

}  // namespace pebfcs
