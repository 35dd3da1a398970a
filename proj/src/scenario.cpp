#include <algorithm>
#include <cmath>
#include <random>

#include "pebfcs/scenario.hpp"

namespace pebfcs {

namespace {

// Table-style TOU bands in clock hours.
bool in_band(int minute, double from_h, double to_h) {
    return minute >= from_h * 60 && minute < to_h * 60;
}

double tou_price(int clock_minute) {
    int m = clock_minute % (24 * 60);
    if (in_band(m, 11, 13) || in_band(m, 20, 21)) return 1.4409;  // peak
    if (in_band(m, 10, 15) || in_band(m, 18, 21)) return 1.3222;  // high
    if (in_band(m, 7, 10) || in_band(m, 15, 18) || in_band(m, 21, 23)) return 0.8395;
    return 0.3818;  // valley 23:00-7:00
}

}  // namespace

TariffSchedule default_tariff(const TimeGrid& grid) {
    TariffSchedule t;
    t.price_per_interval.reserve(grid.interval_count);
    for (int k = 1; k <= grid.interval_count; ++k)
        t.price_per_interval.push_back(tou_price(grid.clock_of(k)));
    return t;
}

std::vector<double> synth_other_loads(LoadProfileKind kind, double peak_kw, const TimeGrid& grid) {
    if (peak_kw < 0.0) throw std::invalid_argument("synth_other_loads: peak_kw must be >= 0");
    std::vector<double> out(grid.interval_count, 0.0);
    if (kind == LoadProfileKind::zero || peak_kw == 0.0) return out;
    if (kind == LoadProfileKind::flat) {
        std::fill(out.begin(), out.end(), peak_kw);
        return out;
    }
    // Residential double hump: raised-cosine bumps at 09:00 and 20:00 over a
    // 0.25 base, normalized so the maximum equals peak_kw.
    auto hump = [](double t_h, double center_h, double half_width_h) {
        double d = std::abs(t_h - center_h);
        d = std::min(d, 24.0 - d);
        if (d >= half_width_h) return 0.0;
        double c = std::cos(M_PI * d / (2.0 * half_width_h));
        return c * c;
    };
    double max_shape = 0.0;
    for (int k = 1; k <= grid.interval_count; ++k) {
        double t_h = grid.clock_of(k) / 60.0;
        double shape = 0.25 + 0.5 * hump(t_h, 9.0, 3.0) + 0.75 * hump(t_h, 20.0, 3.0);
        out[k - 1] = shape;
        max_shape = std::max(max_shape, shape);
    }
    for (double& v : out) v *= peak_kw / max_shape;
    return out;
}

CaseStudyParams paper_case_params() {
    CaseStudyParams p;
    p.grid = {288, 5.0, 0};
    p.cost = {4000.0, 14847.0, 15000, 0.05, 50};
    p.fleet.battery_capacity_kwh.assign(24, 324.0);
    p.fleet.rated_charge_power_kw = 117.0;
    p.fleet.charge_efficiency = 0.92;
    p.fleet.soc_min = 0.2;
    p.ess = {800.0, 1000.0, 1000.0, 0.92, 0.92, 0.2, 0.5};
    p.pile_count = 10;
    // Departure bands: (hour window, departures per hour).
    struct Band { int h; int count; };
    const Band bands[] = {{6, 12},  {7, 12},  {8, 12},  {9, 12},  {10, 12}, {11, 12},
                          {12, 12}, {13, 12}, {14, 6},  {15, 6},  {16, 12}, {17, 12},
                          {18, 4},  {19, 4},  {20, 4},  {21, 2},  {22, 1}};
    for (const auto& b : bands)
        p.departures.push_back({b.h * 60, (b.h + 1) * 60, b.count});
    return p;
}

CaseStudyParams desk_case_params(int bus_count, int interval_count, double interval_minutes,
                                 std::uint64_t seed) {
    CaseStudyParams p = paper_case_params();
    p.grid = {interval_count, interval_minutes, 0};
    p.fleet.battery_capacity_kwh.assign(bus_count, 324.0);
    p.pile_count = std::max(2, bus_count / 2 + 1);
    p.seed = seed;
    p.departures.clear();
    // Two duty blocks sized to keep every bus on the road a few times a day.
    p.departures.push_back({6 * 60, 10 * 60, bus_count * 2});
    p.departures.push_back({14 * 60, 18 * 60, bus_count * 2});
    p.departures.push_back({19 * 60, 21 * 60, bus_count});
    return p;
}

Scenario generate(const CaseStudyParams& params) {
    const TimeGrid& grid = params.grid;
    const int K = grid.interval_count;
    const double dt = grid.interval_minutes;
    const int buses = static_cast<int>(params.fleet.battery_capacity_kwh.size());
    if (buses < 1) throw std::invalid_argument("generate: fleet is empty");
    if (params.speed_sd_kmh < 0.0 || params.trip_energy_sd_kwh < 0.0)
        throw std::invalid_argument("generate: negative standard deviation");

    // Expand departure bands into clock minutes, evenly spaced.
    std::vector<int> departures;
    for (const auto& band : params.departures) {
        if (band.count <= 0) continue;
        if (band.end_minute <= band.start_minute)
            throw std::invalid_argument("generate: departure band has nonpositive span");
        double spacing = static_cast<double>(band.end_minute - band.start_minute) / band.count;
        for (int i = 0; i < band.count; ++i)
            departures.push_back(band.start_minute + static_cast<int>(std::floor(i * spacing)));
    }
    std::sort(departures.begin(), departures.end());

    auto interval_of = [&](int minute) {
        return static_cast<int>(std::floor((minute - grid.start_clock) / dt)) + 1;
    };

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> speed_draw(params.speed_mean_kmh, params.speed_sd_kmh);
    std::normal_distribution<double> energy_draw(params.trip_energy_mean_kwh,
                                                 params.trip_energy_sd_kwh);
    auto draw_speed = [&] {
        double lo = params.speed_mean_kmh - 3.0 * params.speed_sd_kmh;
        double hi = params.speed_mean_kmh + 3.0 * params.speed_sd_kmh;
        double v = params.speed_sd_kmh == 0.0 ? params.speed_mean_kmh
                                              : std::clamp(speed_draw(rng), lo, hi);
        return std::max(v, 10.0);
    };

    struct BusState {
        int free_from_minute = 0;  // back at the depot since this clock minute
        int parked_since_interval = 1;
        int round_robin_uses = 0;
    };
    std::vector<BusState> state(buses);

    Scenario s;
    s.grid = grid;
    s.tariff = default_tariff(grid);
    s.cost = params.cost;
    s.fleet = params.fleet;
    s.ess = params.ess;
    s.station.pile_count = params.pile_count;
    s.station.other_loads_kw =
        params.other_loads_kw.empty() ? std::vector<double>(K, 0.0) : params.other_loads_kw;
    s.timetable.by_bus.assign(buses, {});

    int rr = 0;
    for (int dep_minute : departures) {
        int dep_interval = interval_of(dep_minute);
        if (dep_interval > K) continue;

        // Round-robin choice, overridden by the earliest-available bus when
        // the nominal one has not returned yet.
        int bus = -1;
        for (int probe = 0; probe < buses; ++probe) {
            int cand = (rr + probe) % buses;
            if (state[cand].free_from_minute <= dep_minute &&
                state[cand].parked_since_interval < dep_interval) {
                bus = cand;
                break;
            }
        }
        if (bus < 0) {
            int best = -1;
            for (int cand = 0; cand < buses; ++cand)
                if (best < 0 || state[cand].free_from_minute < state[best].free_from_minute)
                    best = cand;
            throw std::runtime_error(
                "generate: scheduling conflict, no bus back before departure at minute " +
                std::to_string(dep_minute) + " (earliest return: bus " + std::to_string(best) +
                " at minute " + std::to_string(state[best].free_from_minute) + ")");
        }
        rr = (bus + 1) % buses;

        double speed = draw_speed();
        double trip_minutes = params.route_length_km / speed * 60.0;
        int trip_intervals = std::max(1, static_cast<int>(std::lround(trip_minutes / dt)));

        double energy = params.trip_energy_sd_kwh == 0.0 ? params.trip_energy_mean_kwh
                                                         : energy_draw(rng);
        double cap = params.fleet.battery_capacity_kwh[bus];
        double delta = std::clamp(energy / cap, 1e-3, 1.0 - params.fleet.soc_min);

        ParkingEvent ev;
        ev.bus_id = bus;
        ev.arrival_interval = state[bus].parked_since_interval;
        ev.departure_interval = dep_interval;
        ev.next_trip_delta_soc = delta;
        if (s.timetable.by_bus[bus].empty()) ev.arrival_soc = params.initial_bus_soc;
        s.timetable.by_bus[bus].push_back(ev);

        int return_minute = dep_minute + static_cast<int>(trip_intervals * dt);
        state[bus].free_from_minute = return_minute;
        state[bus].parked_since_interval = std::min(K + 1, dep_interval + trip_intervals);
    }

    // Close out the day: every bus parks open-ended after its last return.
    for (int bus = 0; bus < buses; ++bus) {
        if (state[bus].parked_since_interval <= K) {
            ParkingEvent ev;
            ev.bus_id = bus;
            ev.arrival_interval = state[bus].parked_since_interval;
            ev.departure_interval = K;
            ev.open_ended = true;
            ev.next_trip_delta_soc = 0.0;
            if (s.timetable.by_bus[bus].empty()) ev.arrival_soc = params.initial_bus_soc;
            s.timetable.by_bus[bus].push_back(ev);
        }
    }

    validate(s);
    return s;
}

}  // namespace pebfcs
