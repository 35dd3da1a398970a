#pragma once

#include "pebfcs/milp/instance.hpp"
#include "pebfcs/models.hpp"

namespace pebfcs {

/// Charging intervals needed to push `remaining_kwh` through one pile
/// (ceiling, with a small tolerance against float dust).
int required_intervals(double remaining_kwh, double per_interval_kwh);

/// Spare intervals of a bus at interval k before its departure at l, once
/// `required` charging intervals are budgeted. Zero or negative means the
/// bus must start charging now.
int laxity(int departure_interval, int k, int required);

struct HeuristicResult {
    ChargeSchedule schedule;
    std::vector<Violation> shortfalls;  // parkings left short of their block budget
};

/// Core block dispatcher. `budget[n][j]` is the number of charging intervals
/// owed to bus n during its parking j; `guideline[k-1]` caps how many buses
/// may be on charge at interval k (on top of the pile count). Walks the
/// horizon once: buses out of laxity get their whole remaining block
/// committed immediately; then the tightest waiting buses (increasing
/// laxity, decreasing budget, ascending id) fill up to the guideline.
/// Committing whole blocks keeps every parking single-block by construction.
HeuristicResult dispatch_blocks(const WindowInput& win,
                                const std::vector<std::vector<int>>& budget,
                                const std::vector<int>& guideline);

/// Full dispatch: block budgets and the guideline come from the
/// continuity-relaxed charging model, then dispatch_blocks runs.
HeuristicResult heuristic_dispatch(const WindowInput& win,
                                   const milp::SolverConfig& config = {});

/// Dispatch plus the storage response: the ESS schedule is optimised (LP)
/// against the load profile the dispatch produced.
HeuristicResult heuristic_strategy(const WindowInput& win,
                                   const milp::SolverConfig& config = {});

}  // namespace pebfcs
