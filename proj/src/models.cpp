#include <algorithm>
#include <cmath>
#include <sstream>

#include "pebfcs/models.hpp"

namespace pebfcs {

using milp::MilpInstance;
using milp::Sense;

namespace {

std::string idx2(const char* tag, int a, int b) {
    std::ostringstream os;
    os << tag << "[" << a << "," << b << "]";
    return os.str();
}

std::string idx1(const char* tag, int a) {
    std::ostringstream os;
    os << tag << "[" << a << "]";
    return os.str();
}

struct Span {
    int first = 0, last = 0;  // window-relative, clipped to [1, K]
    bool in_progress = false;  // arrival lies before the window
    bool closed = false;       // departure lies inside the window
};

Span event_span(const ParkingEvent& e, int K) {
    Span s;
    s.first = std::max(1, e.arrival_interval);
    s.last = std::min(K, e.departure_interval);
    s.in_progress = e.arrival_interval < 1;
    s.closed = !e.open_ended && e.departure_interval <= K;
    return s;
}

class ModelBuilder {
public:
    ModelBuilder(const WindowInput& win, bool with_continuity, bool with_peb, bool with_ess,
                 const std::vector<double>* fixed_peb_load)
        : win_(win), K_(win.grid.interval_count), with_continuity_(with_continuity),
          with_peb_(with_peb), with_ess_(with_ess && win.ess.present()),
          fixed_(fixed_peb_load) {}

    BuiltModel build() {
        if (with_peb_) {
            add_charge_vars();
            if (with_continuity_) add_continuity();
            add_demand();
            add_pile_limit();
        }
        if (with_ess_) add_ess();
        add_peak();
        if (with_peb_) add_concurrency_ladder();
        return {std::move(inst_), std::move(map_)};
    }

private:
    const WindowInput& win_;
    const int K_;
    bool with_continuity_, with_peb_, with_ess_;
    const std::vector<double>* fixed_;
    MilpInstance inst_;
    VarMap map_;

    double dt_h() const { return win_.grid.dt_hours(); }
    double price(int k) const { return win_.tariff.price_per_interval[k - 1]; }
    double charger_kw() const { return win_.fleet.rated_charge_power_kw; }
    double delivered_per_interval(int) const {
        return charger_kw() * win_.fleet.charge_efficiency * dt_h();
    }

    int c_var(int n, int k) const {
        auto it = map_.on_charge.find({n, k});
        return it == map_.on_charge.end() ? -1 : it->second;
    }

    void add_charge_vars() {
        for (int n = 0; n < win_.fleet.bus_count(); ++n) {
            for (const auto& e : win_.timetable.by_bus[n]) {
                Span s = event_span(e, K_);
                if (s.first > s.last) continue;
                for (int k = s.first; k <= s.last; ++k) {
                    int id = inst_.add_binary(idx2("c", n, k));
                    map_.on_charge[{n, k}] = id;
                    inst_.add_objective_term(id, charger_kw() * dt_h() * price(k));
                }
            }
        }
    }

    void add_continuity() {
        const auto& prev = win_.prev_on_charge;
        const auto& used = win_.blocks_started;
        for (int n = 0; n < win_.fleet.bus_count(); ++n) {
            for (size_t ei = 0; ei < win_.timetable.by_bus[n].size(); ++ei) {
                const auto& e = win_.timetable.by_bus[n][ei];
                Span s = event_span(e, K_);
                if (s.first > s.last) continue;

                std::vector<std::pair<int, double>> start_sum, stop_sum;
                for (int k = s.first; k <= s.last; ++k) {
                    int c = c_var(n, k);
                    // Start flag: u >= c_k - c_{k-1}. With integral on/off
                    // decisions the flag count constraints already bind, so
                    // the flags themselves can stay continuous.
                    int u = inst_.add_continuous(idx2("u", n, k), 0.0, 1.0);
                    map_.start_flag[{n, k}] = u;
                    std::vector<std::pair<int, double>> terms{{u, 1.0}, {c, -1.0}};
                    double rhs = 0.0;
                    if (k == 1) {
                        rhs = -static_cast<double>(n < static_cast<int>(prev.size()) ? prev[n] : 0);
                    } else if (int cp = c_var(n, k - 1); cp >= 0) {
                        terms.emplace_back(cp, 1.0);
                    }
                    inst_.add_constraint(idx2("start_flag", n, k), std::move(terms), Sense::ge,
                                         rhs);
                    start_sum.emplace_back(u, 1.0);

                    if (k < K_) {
                        int v = inst_.add_continuous(idx2("v", n, k), 0.0, 1.0);
                        map_.stop_flag[{n, k}] = v;
                        std::vector<std::pair<int, double>> vterms{{v, 1.0}, {c, -1.0}};
                        if (int cn = c_var(n, k + 1); cn >= 0) vterms.emplace_back(cn, 1.0);
                        inst_.add_constraint(idx2("stop_flag", n, k), std::move(vterms),
                                             Sense::ge, 0.0);
                        stop_sum.emplace_back(v, 1.0);
                    }
                }

                if (s.in_progress) {
                    int allowed = std::max(
                        0, 1 - (n < static_cast<int>(used.size()) ? used[n] : 0));
                    inst_.add_constraint(idx2("single_block", n, static_cast<int>(ei)), start_sum,
                                         Sense::le, allowed);
                } else {
                    inst_.add_constraint(idx2("single_block", n, static_cast<int>(ei)), start_sum,
                                         Sense::le, 1.0);
                    if (s.closed && s.last <= K_ - 1 && !stop_sum.empty()) {
                        // Starts and stops pair up inside a fully seen parking.
                        auto balance = start_sum;
                        for (auto [id, coef] : stop_sum) balance.emplace_back(id, -coef);
                        inst_.add_constraint(idx2("block_balance", n, static_cast<int>(ei)),
                                             std::move(balance), Sense::eq, 0.0);
                    }
                }
            }
        }
    }

    void add_demand() {
        for (int n = 0; n < win_.fleet.bus_count(); ++n) {
            const auto& events = win_.timetable.by_bus[n];
            if (events.empty()) continue;
            double soc1 = win_.first_arrival_soc.at(n);
            double d0 = n < static_cast<int>(win_.delivered_before_kwh.size())
                            ? win_.delivered_before_kwh[n]
                            : 0.0;
            double capacity = win_.fleet.battery_capacity_kwh[n];

            // Energy arrives in whole charging intervals, so the cumulative
            // bounds are expressed in interval counts and rounded inward;
            // tighter in the relaxation, identical on integral schedules.
            std::vector<std::pair<int, double>> cumulative;
            double demand_sum = 0.0;
            double demand_before = 0.0;
            int deliverable_intervals = 0;
            const double per = delivered_per_interval(0);
            for (size_t j = 0; j < events.size(); ++j) {
                const auto& e = events[j];
                Span s = event_span(e, K_);
                for (int k = s.first; k <= s.last; ++k) {
                    int c = c_var(n, k);
                    if (c >= 0) {
                        cumulative.emplace_back(c, 1.0);
                        ++deliverable_intervals;
                    }
                }
                demand_before = demand_sum;
                demand_sum += e.next_trip_delta_soc;

                double upper = (demand_before + 1.0 - soc1) * capacity - d0;
                inst_.add_constraint(idx2("demand_hi", n, static_cast<int>(j)), cumulative,
                                     Sense::le,
                                     std::max(0.0, std::floor(upper / per + 1e-9)));

                if (s.closed) {
                    double lower =
                        std::max(0.0, (demand_sum + win_.fleet.soc_min - soc1) * capacity) - d0;
                    if (lower > 1e-9) {
                        double need = std::ceil(lower / per - 1e-9);
                        if (need > deliverable_intervals)
                            throw std::runtime_error(
                                "model build: bus " + std::to_string(n) + " parking " +
                                std::to_string(j) + " cannot receive required " +
                                std::to_string(lower) + " kWh within its parked intervals");
                        inst_.add_constraint(idx2("demand_lo", n, static_cast<int>(j)),
                                             cumulative, Sense::ge, need);
                    }
                }
            }
        }
    }

    void add_pile_limit() {
        for (int k = 1; k <= K_; ++k) {
            std::vector<std::pair<int, double>> terms;
            for (int n = 0; n < win_.fleet.bus_count(); ++n)
                if (int c = c_var(n, k); c >= 0) terms.emplace_back(c, 1.0);
            if (static_cast<int>(terms.size()) > win_.station.pile_count)
                inst_.add_constraint(idx1("pile_count", k), std::move(terms), Sense::le,
                                     win_.station.pile_count);
        }
    }

    void add_ess() {
        const EssSpec& ess = win_.ess;
        map_.ess_charge.resize(K_);
        map_.ess_discharge.resize(K_);
        map_.ess_soc.resize(K_ + 1);
        double wear = win_.cost.ess_unit_price / win_.cost.ess_cycle_count * ess.charge_eff *
                      dt_h();
        for (int k = 1; k <= K_; ++k) {
            int pc = inst_.add_continuous(idx1("ess_c", k), 0.0, ess.max_charge_kw);
            int pd = inst_.add_continuous(idx1("ess_d", k), 0.0, ess.max_discharge_kw);
            map_.ess_charge[k - 1] = pc;
            map_.ess_discharge[k - 1] = pd;
            inst_.add_objective_term(pc, dt_h() * price(k) + wear);
            inst_.add_objective_term(pd, -dt_h() * price(k));
        }
        for (int k = 1; k <= K_ + 1; ++k) {
            double lo = ess.soc_min, hi = 1.0;
            if (k == 1) lo = hi = win_.ess_initial_soc;
            map_.ess_soc[k - 1] = inst_.add_continuous(idx1("ess_soc", k), lo, hi);
        }
        const double charge_gain = ess.charge_eff * dt_h() / ess.capacity_kwh;
        const double discharge_drop = dt_h() / (ess.discharge_eff * ess.capacity_kwh);
        for (int k = 1; k <= K_; ++k) {
            inst_.add_constraint(idx1("ess_transition", k),
                                 {{map_.ess_soc[k], 1.0},
                                  {map_.ess_soc[k - 1], -1.0},
                                  {map_.ess_charge[k - 1], -charge_gain},
                                  {map_.ess_discharge[k - 1], discharge_drop}},
                                 Sense::eq, 0.0);
        }
        // Window-level energy balance: the trajectory returns to its start.
        inst_.add_constraint("ess_balance",
                             {{map_.ess_soc[K_], 1.0}, {map_.ess_soc[0], -1.0}}, Sense::eq, 0.0);
    }

    // Unary expansion of the maximum charger concurrency. Redundant for
    // integral solutions, but it gives the search a handle that makes the
    // peak term integral: fixing one rung caps (or floors) the concurrency
    // in every interval at once.
    void add_concurrency_ladder() {
        int rungs = std::min(win_.station.pile_count, win_.fleet.bus_count());
        if (rungs <= 0) return;
        std::vector<int> b(rungs);
        for (int m = 0; m < rungs; ++m) b[m] = inst_.add_binary(idx1("conc", m + 1));
        for (int m = 0; m + 1 < rungs; ++m)
            inst_.add_constraint(idx1("conc_order", m + 1),
                                 {{b[m], 1.0}, {b[m + 1], -1.0}}, Sense::ge, 0.0);
        for (int k = 1; k <= K_; ++k) {
            std::vector<std::pair<int, double>> terms;
            for (int n = 0; n < win_.fleet.bus_count(); ++n)
                if (int c = c_var(n, k); c >= 0) terms.emplace_back(c, 1.0);
            if (terms.empty()) continue;
            for (int m = 0; m < rungs; ++m) terms.emplace_back(b[m], -1.0);
            inst_.add_constraint(idx1("conc_cap", k), std::move(terms), Sense::le, 0.0);
        }
        double floor_load = *std::min_element(win_.station.other_loads_kw.begin(),
                                              win_.station.other_loads_kw.end());
        if (fixed_)
            floor_load += *std::min_element(fixed_->begin(), fixed_->end());
        if (with_ess_) floor_load -= win_.ess.max_discharge_kw;
        std::vector<std::pair<int, double>> peak_terms{{map_.peak, -1.0}};
        for (int m = 0; m < rungs; ++m) peak_terms.emplace_back(b[m], charger_kw());
        inst_.add_constraint("conc_peak_floor", std::move(peak_terms), Sense::le, -floor_load);
    }

    void add_peak() {
        double ecc_rate = window_fraction(win_.grid) *
                          capital_recovery_factor(win_.cost.discount_rate,
                                                  win_.cost.station_life_years) *
                          win_.cost.capacity_charge;
        map_.peak = inst_.add_continuous("peak", 0.0, milp::kInf);
        inst_.add_objective_term(map_.peak, ecc_rate);
        for (int k = 1; k <= K_; ++k) {
            std::vector<std::pair<int, double>> terms{{map_.peak, -1.0}};
            for (int n = 0; n < win_.fleet.bus_count(); ++n)
                if (int c = c_var(n, k); c >= 0) terms.emplace_back(c, charger_kw());
            if (with_ess_) {
                terms.emplace_back(map_.ess_charge[k - 1], 1.0);
                terms.emplace_back(map_.ess_discharge[k - 1], -1.0);
            }
            double load = win_.station.other_loads_kw[k - 1];
            if (fixed_) load += (*fixed_)[k - 1];
            inst_.add_constraint(idx1("peak", k), std::move(terms), Sense::le, -load);
        }
    }
};

}  // namespace

WindowInput WindowInput::from_scenario(const Scenario& s) {
    WindowInput w;
    w.grid = s.grid;
    w.tariff = s.tariff;
    w.cost = s.cost;
    w.fleet = s.fleet;
    w.ess = s.ess;
    w.station = s.station;
    w.timetable = s.timetable;
    int n = s.fleet.bus_count();
    w.prev_on_charge.assign(n, 0);
    w.blocks_started.assign(n, 0);
    w.delivered_before_kwh.assign(n, 0.0);
    w.first_arrival_soc.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& events = s.timetable.by_bus[i];
        if (events.empty()) continue;
        if (!events.front().arrival_soc)
            throw std::invalid_argument(
                "WindowInput::from_scenario: first arrival SOC of bus " + std::to_string(i) +
                " is unresolved");
        w.first_arrival_soc[i] = *events.front().arrival_soc;
    }
    w.ess_initial_soc = s.ess.initial_soc;
    return w;
}

Scenario WindowInput::as_scenario() const {
    Scenario s;
    s.grid = grid;
    s.tariff = tariff;
    s.cost = cost;
    s.fleet = fleet;
    s.ess = ess;
    s.station = station;
    s.timetable = timetable;
    return s;
}

BuiltModel build_model_a(const WindowInput& win) {
    return ModelBuilder(win, true, true, false, nullptr).build();
}

BuiltModel build_model_b(const WindowInput& win) {
    return ModelBuilder(win, true, true, true, nullptr).build();
}

BuiltModel build_model_c(const WindowInput& win, const std::vector<double>& fixed_peb_load_kw) {
    if (static_cast<int>(fixed_peb_load_kw.size()) != win.grid.interval_count)
        throw std::invalid_argument("build_model_c: fixed profile length mismatch");
    return ModelBuilder(win, false, false, true, &fixed_peb_load_kw).build();
}

BuiltModel build_model_a_relaxed(const WindowInput& win) {
    return ModelBuilder(win, false, true, false, nullptr).build();
}

void assign_piles(ChargeSchedule& schedule, int pile_count) {
    const int K = schedule.intervals();
    const int N = static_cast<int>(schedule.peb_on_charge.size());
    schedule.pile_state.assign(pile_count, std::vector<int>(K, 0));
    std::vector<int> pile_of(N, -1);
    for (int k = 0; k < K; ++k) {
        std::vector<bool> taken(pile_count, false);
        // Continuing buses keep their pile.
        for (int n = 0; n < N; ++n) {
            if (schedule.peb_on_charge[n][k] && pile_of[n] >= 0 &&
                (k > 0 && schedule.peb_on_charge[n][k - 1]))
                taken[pile_of[n]] = true;
            else if (!schedule.peb_on_charge[n][k])
                pile_of[n] = -1;
        }
        for (int n = 0; n < N; ++n) {
            if (!schedule.peb_on_charge[n][k]) continue;
            if (pile_of[n] >= 0 && k > 0 && schedule.peb_on_charge[n][k - 1]) {
                schedule.pile_state[pile_of[n]][k] = 1;
                continue;
            }
            int free = -1;
            for (int m = 0; m < pile_count; ++m)
                if (!taken[m]) { free = m; break; }
            if (free < 0) throw std::logic_error("assign_piles: more charging buses than piles");
            taken[free] = true;
            pile_of[n] = free;
            schedule.pile_state[free][k] = 1;
        }
    }
}

double window_objective(const ChargeSchedule& schedule, const WindowInput& win) {
    double epc = electricity_purchase_cost(schedule, win.fleet, win.tariff, win.grid);
    double essc = ess_life_cost(schedule, win.ess, win.cost, win.grid);
    double peak = peak_load(schedule, win.fleet, win.station);
    double ecc = equivalent_capacity_charge(peak, win.cost, win.grid);
    return epc + essc + ecc;
}

ChargeSchedule extract_schedule(const milp::MilpSolution& sol, const VarMap& map,
                                const WindowInput& win) {
    if (sol.status != milp::SolveStatus::optimal && sol.status != milp::SolveStatus::gap_limit &&
        sol.status != milp::SolveStatus::node_limit)
        throw std::invalid_argument("extract_schedule: no incumbent to extract");
    if (sol.values.empty())
        throw std::invalid_argument("extract_schedule: solution carries no values");

    const int K = win.grid.interval_count;
    ChargeSchedule s = ChargeSchedule::zeros(win.fleet.bus_count(), win.station.pile_count, K,
                                             win.ess_initial_soc);
    for (const auto& [key, id] : map.on_charge)
        s.peb_on_charge[key.first][key.second - 1] = sol.values[id] > 0.5 ? 1 : 0;

    const bool has_ess = !map.ess_charge.empty();
    if (has_ess) {
        for (int k = 0; k < K; ++k) {
            s.ess_charge_kw[k] = std::max(0.0, sol.values[map.ess_charge[k]]);
            s.ess_discharge_kw[k] = std::max(0.0, sol.values[map.ess_discharge[k]]);
        }
    }

    double before = window_objective(s, win);

    if (has_ess) {
        // Simultaneous charge/discharge cleanup: cancel the overlapping part
        // while keeping the SOC trajectory intact (round-trip losses mean the
        // grid draw can only shrink).
        const double round_trip = win.ess.charge_eff * win.ess.discharge_eff;
        for (int k = 0; k < K; ++k) {
            double pc = s.ess_charge_kw[k], pd = s.ess_discharge_kw[k];
            if (pc > 0.0 && pd > 0.0) {
                double dc = std::min(pc, pd / round_trip);
                s.ess_charge_kw[k] = pc - dc;
                s.ess_discharge_kw[k] = pd - dc * round_trip;
                if (s.ess_charge_kw[k] < 1e-9) s.ess_charge_kw[k] = 0.0;
                if (s.ess_discharge_kw[k] < 1e-9) s.ess_discharge_kw[k] = 0.0;
            }
        }
        // Forward SOC bookkeeping.
        s.ess_soc[0] = win.ess_initial_soc;
        for (int k = 0; k < K; ++k) {
            double delta = (s.ess_charge_kw[k] * win.ess.charge_eff -
                            s.ess_discharge_kw[k] / win.ess.discharge_eff) *
                           win.grid.dt_hours() / win.ess.capacity_kwh;
            s.ess_soc[k + 1] = s.ess_soc[k] + delta;
        }
        for (double soc : s.ess_soc)
            if (soc < win.ess.soc_min - 1e-6 || soc > 1.0 + 1e-6)
                throw std::logic_error("extract_schedule: cleanup broke the SOC range");
    }

    double after = window_objective(s, win);
    if (after > before + 1e-6 * std::max(1.0, std::abs(before)))
        throw std::logic_error("extract_schedule: cleanup worsened the objective");

    assign_piles(s, win.station.pile_count);
    return s;
}

std::vector<Violation> verify_schedule(const ChargeSchedule& schedule, const WindowInput& win,
                                       ModelKind kind) {
    std::vector<Violation> out;
    const int K = win.grid.interval_count;
    const int N = win.fleet.bus_count();
    const double tol = 1e-6;
    const bool has_peb = kind != ModelKind::ess_only;
    const bool has_ess =
        kind == ModelKind::coordinated_with_ess || kind == ModelKind::ess_only;

    auto flag = [&](std::string constraint, int bus, int interval, std::string detail) {
        out.push_back({std::move(constraint), bus, interval, std::move(detail)});
    };

    if (has_peb) {
        // Pile count per interval.
        for (int k = 1; k <= K; ++k)
            if (schedule.on_charge_count(k) > win.station.pile_count)
                flag("pile_count", -1, k,
                     std::to_string(schedule.on_charge_count(k)) + " buses on " +
                         std::to_string(win.station.pile_count) + " piles");

        for (int n = 0; n < N; ++n) {
            std::vector<char> parked(K + 1, 0);
            for (const auto& e : win.timetable.by_bus[n]) {
                Span s = event_span(e, K);
                for (int k = s.first; k <= s.last; ++k) parked[k] = 1;
            }
            for (int k = 1; k <= K; ++k)
                if (schedule.peb_on_charge[n][k - 1] && !parked[k])
                    flag("parking_only", n, k, "charging while away");

            if (kind == ModelKind::coordinated_no_ess ||
                kind == ModelKind::coordinated_with_ess) {
                for (size_t ei = 0; ei < win.timetable.by_bus[n].size(); ++ei) {
                    const auto& e = win.timetable.by_bus[n][ei];
                    Span s = event_span(e, K);
                    if (s.first > s.last) continue;
                    int prior = 0;
                    int prev = 0;
                    if (s.in_progress) {
                        prior = n < static_cast<int>(win.blocks_started.size())
                                    ? win.blocks_started[n]
                                    : 0;
                        prev = n < static_cast<int>(win.prev_on_charge.size())
                                   ? win.prev_on_charge[n]
                                   : 0;
                    }
                    int starts = 0;
                    int last = prev;
                    for (int k = s.first; k <= s.last; ++k) {
                        int cur = schedule.peb_on_charge[n][k - 1];
                        if (cur && !last) ++starts;
                        last = cur;
                    }
                    if (prior + starts > 1)
                        flag("single_block", n, s.first,
                             "parking " + std::to_string(ei) + " has " +
                                 std::to_string(prior + starts) + " charging blocks");
                }
            }

            // Cumulative demand window.
            const auto& events = win.timetable.by_bus[n];
            if (!events.empty()) {
                double soc1 = win.first_arrival_soc.at(n);
                double d0 = n < static_cast<int>(win.delivered_before_kwh.size())
                                ? win.delivered_before_kwh[n]
                                : 0.0;
                double capacity = win.fleet.battery_capacity_kwh[n];
                double per_interval = win.fleet.rated_charge_power_kw *
                                      win.fleet.charge_efficiency * win.grid.dt_hours();
                double delivered = d0;
                double demand_sum = 0.0;
                for (size_t j = 0; j < events.size(); ++j) {
                    Span s = event_span(events[j], K);
                    for (int k = s.first; k <= s.last; ++k)
                        delivered += schedule.peb_on_charge[n][k - 1] * per_interval;
                    double demand_before = demand_sum;
                    demand_sum += events[j].next_trip_delta_soc;
                    double upper = (demand_before + 1.0 - soc1) * capacity;
                    if (delivered > upper + tol * std::max(1.0, upper))
                        flag("demand_hi", n, static_cast<int>(j),
                             "delivered " + std::to_string(delivered) + " kWh > " +
                                 std::to_string(upper));
                    if (s.closed) {
                        double lower = std::max(
                            0.0, (demand_sum + win.fleet.soc_min - soc1) * capacity);
                        if (delivered < lower - tol * std::max(1.0, lower))
                            flag("demand_lo", n, static_cast<int>(j),
                                 "delivered " + std::to_string(delivered) + " kWh < " +
                                     std::to_string(lower));
                    }
                }
            }
        }
    }

    if (has_ess && win.ess.present()) {
        for (int k = 1; k <= K; ++k) {
            if (schedule.ess_charge_kw[k - 1] < -tol ||
                schedule.ess_charge_kw[k - 1] > win.ess.max_charge_kw + tol)
                flag("ess_power_range", -1, k, "charge power out of range");
            if (schedule.ess_discharge_kw[k - 1] < -tol ||
                schedule.ess_discharge_kw[k - 1] > win.ess.max_discharge_kw + tol)
                flag("ess_power_range", -1, k, "discharge power out of range");
        }
        double soc = win.ess_initial_soc;
        for (int k = 0; k <= K; ++k) {
            if (schedule.ess_soc[k] < win.ess.soc_min - tol || schedule.ess_soc[k] > 1.0 + tol)
                flag("ess_soc_range", -1, k + 1, "soc " + std::to_string(schedule.ess_soc[k]));
            if (std::abs(schedule.ess_soc[k] - soc) > 1e-9)
                flag("ess_soc_recurrence", -1, k + 1,
                     "stored " + std::to_string(schedule.ess_soc[k]) + " recomputed " +
                         std::to_string(soc));
            if (k < K)
                soc += (schedule.ess_charge_kw[k] * win.ess.charge_eff -
                        schedule.ess_discharge_kw[k] / win.ess.discharge_eff) *
                       win.grid.dt_hours() / win.ess.capacity_kwh;
        }
        if (std::abs(schedule.ess_soc[K] - schedule.ess_soc[0]) > tol)
            flag("ess_energy_balance", -1, K,
                 "final soc " + std::to_string(schedule.ess_soc[K]) + " vs initial " +
                     std::to_string(schedule.ess_soc[0]));
    }
    return out;
}

std::string debug_dump(const BuiltModel& model) {
    std::ostringstream os;
    const auto& inst = model.instance;
    os << "minimize";
    for (const auto& [j, c] : inst.objective)
        os << " " << (c >= 0 ? "+" : "") << c << "*" << inst.vars[j].name;
    if (inst.objective_constant != 0.0) os << " + " << inst.objective_constant;
    os << "\n";
    for (const auto& con : inst.cons) {
        os << con.name << ":";
        for (const auto& [j, c] : con.coeffs)
            os << " " << (c >= 0 ? "+" : "") << c << "*" << inst.vars[j].name;
        os << (con.sense == Sense::le ? " <= " : con.sense == Sense::ge ? " >= " : " = ");
        os << con.rhs << "\n";
    }
    return os.str();
}

}  // namespace pebfcs
