#include <algorithm>
#include <cmath>

#include "pebfcs/heuristic.hpp"
#include "pebfcs/milp/solver.hpp"

namespace pebfcs {

int required_intervals(double remaining_kwh, double per_interval_kwh) {
    if (per_interval_kwh <= 0.0)
        throw std::invalid_argument("required_intervals: nonpositive per-interval energy");
    if (remaining_kwh <= 1e-9) return 0;
    return static_cast<int>(std::ceil(remaining_kwh / per_interval_kwh - 1e-9));
}

int laxity(int departure_interval, int k, int required) {
    return departure_interval - required - k;
}

HeuristicResult dispatch_blocks(const WindowInput& win,
                                const std::vector<std::vector<int>>& budget,
                                const std::vector<int>& guideline) {
    const int K = win.grid.interval_count;
    const int N = win.fleet.bus_count();
    const int piles = win.station.pile_count;
    if (static_cast<int>(budget.size()) != N || static_cast<int>(guideline.size()) != K)
        throw std::invalid_argument("dispatch_blocks: dimension mismatch");

    HeuristicResult out;
    out.schedule = ChargeSchedule::zeros(N, piles, K, win.ess_initial_soc);
    std::vector<int> on_count(K + 1, 0);  // 1-based committed pile usage

    struct Pending {
        int bus, parking;
        int first, last;  // usable window-relative span
        int owed;
        bool boundary_block;  // charging as the window opens: may only continue
        bool committed = false;
    };
    std::vector<Pending> pend;
    for (int n = 0; n < N; ++n) {
        for (size_t j = 0; j < win.timetable.by_bus[n].size(); ++j) {
            const auto& e = win.timetable.by_bus[n][j];
            Pending p;
            p.bus = n;
            p.parking = static_cast<int>(j);
            p.first = std::max(1, e.arrival_interval);
            p.last = std::min(K, e.departure_interval);
            p.owed = budget[n][j];
            if (p.first > p.last || p.owed <= 0) continue;
            bool in_progress = e.arrival_interval < 1;
            int started = in_progress && n < static_cast<int>(win.blocks_started.size())
                              ? win.blocks_started[n]
                              : 0;
            int charging = in_progress && n < static_cast<int>(win.prev_on_charge.size())
                               ? win.prev_on_charge[n]
                               : 0;
            if (started >= 1 && !charging) continue;  // block spent before the window
            p.boundary_block = started >= 1 && charging == 1;
            pend.push_back(p);
        }
    }

    // Commit a contiguous run for `p` starting at k: as much of the owed
    // block as the piles allow (the prefix keeps contiguity).
    auto commit = [&](Pending& p, int k) {
        int end = std::min({k + p.owed - 1, p.last, K});
        int placed = 0;
        for (int t = k; t <= end && on_count[t] < piles; ++t) {
            out.schedule.peb_on_charge[p.bus][t - 1] = 1;
            ++on_count[t];
            ++placed;
        }
        p.committed = true;
        if (placed < p.owed) {
            double per = win.fleet.rated_charge_power_kw * win.fleet.charge_efficiency *
                         win.grid.dt_hours();
            out.shortfalls.push_back(
                {"charging_shortfall", p.bus, p.last,
                 "block cut to " + std::to_string(placed) + "/" + std::to_string(p.owed) +
                     " intervals (" + std::to_string((p.owed - placed) * per) + " kWh short)"});
        }
    };

    for (int k = 1; k <= K; ++k) {
        std::vector<Pending*> waiting;
        for (auto& p : pend)
            if (!p.committed && p.first <= k && k <= p.last) waiting.push_back(&p);
        std::sort(waiting.begin(), waiting.end(), [&](const Pending* a, const Pending* b) {
            int la = laxity(a->last, k, a->owed), lb = laxity(b->last, k, b->owed);
            if (la != lb) return la < lb;
            if (a->owed != b->owed) return a->owed > b->owed;
            return a->bus < b->bus;
        });
        for (Pending* p : waiting) {
            bool must = p->boundary_block ? k == 1 : laxity(p->last, k, p->owed) <= 0;
            if (must) {
                // Out of slack: start as soon as a pile frees up. Waiting
                // further only clips the block, which commit() reports.
                if (on_count[k] < piles || k == p->last) commit(*p, k);
            } else if (!p->boundary_block &&
                       on_count[k] < std::min(guideline[k - 1], piles)) {
                // Optional start: only if the whole block fits under the caps.
                int end = std::min({k + p->owed - 1, p->last, K});
                bool fits = end - k + 1 >= p->owed;
                for (int t = k; t <= end && fits; ++t)
                    if (on_count[t] >= piles) fits = false;
                if (fits) commit(*p, k);
            }
        }
    }

    // Anything never committed at all is owed in full.
    double per =
        win.fleet.rated_charge_power_kw * win.fleet.charge_efficiency * win.grid.dt_hours();
    for (const auto& p : pend)
        if (!p.committed)
            out.shortfalls.push_back({"charging_shortfall", p.bus, p.last,
                                      "block never started (" + std::to_string(p.owed * per) +
                                          " kWh short)"});

    assign_piles(out.schedule, piles);
    return out;
}

HeuristicResult heuristic_dispatch(const WindowInput& win, const milp::SolverConfig& config) {
    BuiltModel relaxed = build_model_a_relaxed(win);
    auto sol = milp::solve_milp(relaxed.instance, config);
    if (sol.status != milp::SolveStatus::optimal &&
        sol.status != milp::SolveStatus::gap_limit &&
        sol.status != milp::SolveStatus::node_limit)
        throw std::runtime_error("heuristic_dispatch: relaxed charging model was " +
                                 std::string(milp::to_string(sol.status)));
    if (sol.values.empty())
        throw std::runtime_error("heuristic_dispatch: relaxed charging model has no incumbent");

    const int K = win.grid.interval_count;
    const int N = win.fleet.bus_count();
    std::vector<std::vector<int>> budget(N);
    std::vector<int> guideline(K, 0);
    for (int n = 0; n < N; ++n) budget[n].assign(win.timetable.by_bus[n].size(), 0);
    for (const auto& [key, id] : relaxed.map.on_charge) {
        if (sol.values[id] < 0.5) continue;
        auto [n, k] = key;
        ++guideline[k - 1];
        const auto& events = win.timetable.by_bus[n];
        for (size_t j = 0; j < events.size(); ++j) {
            if (k >= std::max(1, events[j].arrival_interval) &&
                k <= std::min(K, events[j].departure_interval)) {
                ++budget[n][j];
                break;
            }
        }
    }
    return dispatch_blocks(win, budget, guideline);
}

HeuristicResult heuristic_strategy(const WindowInput& win, const milp::SolverConfig& config) {
    HeuristicResult out = heuristic_dispatch(win, config);
    if (!win.ess.present()) return out;

    const int K = win.grid.interval_count;
    std::vector<double> peb_load(K, 0.0);
    for (int k = 1; k <= K; ++k)
        peb_load[k - 1] = out.schedule.on_charge_count(k) * win.fleet.rated_charge_power_kw;

    BuiltModel ess_model = build_model_c(win, peb_load);
    auto sol = milp::solve_lp(ess_model.instance, config);
    if (sol.status != milp::SolveStatus::optimal)
        throw std::runtime_error("heuristic_strategy: storage response LP was " +
                                 std::string(milp::to_string(sol.status)));
    ChargeSchedule ess_part = extract_schedule(sol, ess_model.map, win);
    out.schedule.ess_charge_kw = ess_part.ess_charge_kw;
    out.schedule.ess_discharge_kw = ess_part.ess_discharge_kw;
    out.schedule.ess_soc = ess_part.ess_soc;
    return out;
}

}  // namespace pebfcs
