#pragma once

#include <map>
#include <string>
#include <vector>

#include "pebfcs/domain.hpp"
#include "pebfcs/milp/instance.hpp"

namespace pebfcs {

/// Semantic key -> MILP variable id for one built model.
struct VarMap {
    std::map<std::pair<int, int>, int> on_charge;    // (bus, interval)
    std::map<std::pair<int, int>, int> start_flag;   // u
    std::map<std::pair<int, int>, int> stop_flag;    // v
    std::vector<int> ess_charge;                     // per interval, -1 if absent
    std::vector<int> ess_discharge;
    std::vector<int> ess_soc;                        // interval_count + 1 entries
    int peak = -1;
};

/// One optimisation window: scenario data sliced window-relative plus the
/// boundary state carried across re-solves.
struct WindowInput {
    TimeGrid grid;
    TariffSchedule tariff;
    CostParams cost;
    FleetSpec fleet;
    EssSpec ess;
    StationSpec station;
    Timetable timetable;  // window-relative events; first event per bus may be in progress

    std::vector<int> prev_on_charge;          // c_{n,0}; bus charging as the window opens
    std::vector<int> blocks_started;          // charging blocks already begun in the
                                              // bus's current parking (0 or 1)
    std::vector<double> first_arrival_soc;    // realized/forecast SOC at first event arrival
    std::vector<double> delivered_before_kwh; // energy already delivered in the current parking
    double ess_initial_soc = 0.0;

    /// Day-one window of a full scenario: no boundary state, forecasts from
    /// the timetable itself.
    static WindowInput from_scenario(const Scenario& s);

    Scenario as_scenario() const;
};

struct BuiltModel {
    milp::MilpInstance instance;
    VarMap map;
};

enum class ModelKind { coordinated_no_ess, coordinated_with_ess, ess_only, relaxed_no_continuity };

/// Coordinated PEB charging without ESS: purchase costs plus capacity charge,
/// pile limit, parking-only charging, contiguous blocks, cumulative demand.
BuiltModel build_model_a(const WindowInput& win);

/// Coordinated PEBs and ESS jointly: adds ESS power/energy variables, the
/// storage wear term and the net-load peak.
BuiltModel build_model_b(const WindowInput& win);

/// ESS alone against a fixed PEB charging profile (pure LP).
BuiltModel build_model_c(const WindowInput& win, const std::vector<double>& fixed_peb_load_kw);

/// Model A without the block-continuity machinery (no start/stop flags).
BuiltModel build_model_a_relaxed(const WindowInput& win);

/// Pulls a ChargeSchedule out of a solution: binaries snapped, ESS overlap
/// cleanup applied (SOC trajectory preserved, objective never worsened),
/// SOC trace recomputed forward, piles assigned stably.
ChargeSchedule extract_schedule(const milp::MilpSolution& sol, const VarMap& map,
                                const WindowInput& win);

struct Violation {
    std::string constraint;  // pile_count, parking_only, single_block, ...
    int bus = -1;
    int interval = -1;
    std::string detail;
};

/// Direct re-check of the selected model's constraints on a schedule.
std::vector<Violation> verify_schedule(const ChargeSchedule& schedule, const WindowInput& win,
                                       ModelKind kind);

/// Stable pile assignment: a bus keeps its pile across consecutive charging
/// intervals, new buses take the lowest free pile.
void assign_piles(ChargeSchedule& schedule, int pile_count);

/// Objective recomputation for a schedule under the window's cost model
/// (other-load energy excluded, as in the optimisation objective).
double window_objective(const ChargeSchedule& schedule, const WindowInput& win);

/// Human-readable dump of every constraint with its role tag.
std::string debug_dump(const BuiltModel& model);

}  // namespace pebfcs
