// Python bindings: scenario construction and IO, single-window planning, the
// rolling-horizon controller and the reporting helpers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pebfcs/controller.hpp"
#include "pebfcs/heuristic.hpp"
#include "pebfcs/json_io.hpp"
#include "pebfcs/milp/mps.hpp"
#include "pebfcs/milp/solver.hpp"
#include "pebfcs/models.hpp"
#include "pebfcs/report.hpp"
#include "pebfcs/scenario.hpp"

namespace py = pybind11;
using namespace pebfcs;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Charging-station scheduling: MILP models, dispatch heuristic and "
              "rolling-horizon controller";

    // ---- domain data ----
    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<>())
        .def_readwrite("interval_count", &TimeGrid::interval_count)
        .def_readwrite("interval_minutes", &TimeGrid::interval_minutes)
        .def_readwrite("start_clock", &TimeGrid::start_clock)
        .def("dt_hours", &TimeGrid::dt_hours)
        .def("clock_of", &TimeGrid::clock_of);

    py::class_<TariffSchedule>(m, "TariffSchedule")
        .def(py::init<>())
        .def_readwrite("price_per_interval", &TariffSchedule::price_per_interval);

    py::class_<CostParams>(m, "CostParams")
        .def(py::init<>())
        .def_readwrite("ess_unit_price", &CostParams::ess_unit_price)
        .def_readwrite("capacity_charge", &CostParams::capacity_charge)
        .def_readwrite("ess_cycle_count", &CostParams::ess_cycle_count)
        .def_readwrite("discount_rate", &CostParams::discount_rate)
        .def_readwrite("station_life_years", &CostParams::station_life_years);

    py::class_<FleetSpec>(m, "FleetSpec")
        .def(py::init<>())
        .def_readwrite("battery_capacity_kwh", &FleetSpec::battery_capacity_kwh)
        .def_readwrite("rated_charge_power_kw", &FleetSpec::rated_charge_power_kw)
        .def_readwrite("charge_efficiency", &FleetSpec::charge_efficiency)
        .def_readwrite("soc_min", &FleetSpec::soc_min)
        .def("bus_count", &FleetSpec::bus_count);

    py::class_<EssSpec>(m, "EssSpec")
        .def(py::init<>())
        .def_readwrite("capacity_kwh", &EssSpec::capacity_kwh)
        .def_readwrite("max_charge_kw", &EssSpec::max_charge_kw)
        .def_readwrite("max_discharge_kw", &EssSpec::max_discharge_kw)
        .def_readwrite("charge_eff", &EssSpec::charge_eff)
        .def_readwrite("discharge_eff", &EssSpec::discharge_eff)
        .def_readwrite("soc_min", &EssSpec::soc_min)
        .def_readwrite("initial_soc", &EssSpec::initial_soc)
        .def("present", &EssSpec::present);

    py::class_<StationSpec>(m, "StationSpec")
        .def(py::init<>())
        .def_readwrite("pile_count", &StationSpec::pile_count)
        .def_readwrite("other_loads_kw", &StationSpec::other_loads_kw);

    py::class_<ParkingEvent>(m, "ParkingEvent")
        .def(py::init<>())
        .def_readwrite("bus_id", &ParkingEvent::bus_id)
        .def_readwrite("arrival_interval", &ParkingEvent::arrival_interval)
        .def_readwrite("departure_interval", &ParkingEvent::departure_interval)
        .def_readwrite("arrival_soc", &ParkingEvent::arrival_soc)
        .def_readwrite("next_trip_delta_soc", &ParkingEvent::next_trip_delta_soc)
        .def_readwrite("open_ended", &ParkingEvent::open_ended);

    py::class_<Timetable>(m, "Timetable")
        .def(py::init<>())
        .def_readwrite("by_bus", &Timetable::by_bus);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("grid", &Scenario::grid)
        .def_readwrite("tariff", &Scenario::tariff)
        .def_readwrite("cost", &Scenario::cost)
        .def_readwrite("fleet", &Scenario::fleet)
        .def_readwrite("ess", &Scenario::ess)
        .def_readwrite("station", &Scenario::station)
        .def_readwrite("timetable", &Scenario::timetable);

    py::class_<ChargeSchedule>(m, "ChargeSchedule")
        .def(py::init<>())
        .def_readwrite("peb_on_charge", &ChargeSchedule::peb_on_charge)
        .def_readwrite("pile_state", &ChargeSchedule::pile_state)
        .def_readwrite("ess_charge_kw", &ChargeSchedule::ess_charge_kw)
        .def_readwrite("ess_discharge_kw", &ChargeSchedule::ess_discharge_kw)
        .def_readwrite("ess_soc", &ChargeSchedule::ess_soc)
        .def("intervals", &ChargeSchedule::intervals)
        .def("on_charge_count", &ChargeSchedule::on_charge_count);

    py::class_<CostBreakdown>(m, "CostBreakdown")
        .def(py::init<>())
        .def_readonly("epc", &CostBreakdown::epc)
        .def_readonly("essc", &CostBreakdown::essc)
        .def_readonly("ecc", &CostBreakdown::ecc)
        .def_readonly("peak_kw", &CostBreakdown::peak_kw)
        .def_readonly("window_total", &CostBreakdown::window_total)
        .def_readonly("annualized_total", &CostBreakdown::annualized_total);

    m.def("validate", &validate, py::arg("scenario"));
    m.def("cost_breakdown", &cost_breakdown, py::arg("schedule"), py::arg("scenario"),
          py::arg("include_other_loads") = true);
    m.def("capital_recovery_factor", &capital_recovery_factor);
    m.def("window_fraction", &window_fraction);
    m.def("annualize", &annualize);

    // ---- scenario generation and IO ----
    py::class_<DepartureBand>(m, "DepartureBand")
        .def(py::init<>())
        .def_readwrite("start_minute", &DepartureBand::start_minute)
        .def_readwrite("end_minute", &DepartureBand::end_minute)
        .def_readwrite("count", &DepartureBand::count);

    py::class_<CaseStudyParams>(m, "CaseStudyParams")
        .def(py::init<>())
        .def_readwrite("route_length_km", &CaseStudyParams::route_length_km)
        .def_readwrite("speed_mean_kmh", &CaseStudyParams::speed_mean_kmh)
        .def_readwrite("speed_sd_kmh", &CaseStudyParams::speed_sd_kmh)
        .def_readwrite("trip_energy_mean_kwh", &CaseStudyParams::trip_energy_mean_kwh)
        .def_readwrite("trip_energy_sd_kwh", &CaseStudyParams::trip_energy_sd_kwh)
        .def_readwrite("departures", &CaseStudyParams::departures)
        .def_readwrite("grid", &CaseStudyParams::grid)
        .def_readwrite("cost", &CaseStudyParams::cost)
        .def_readwrite("fleet", &CaseStudyParams::fleet)
        .def_readwrite("ess", &CaseStudyParams::ess)
        .def_readwrite("pile_count", &CaseStudyParams::pile_count)
        .def_readwrite("other_loads_kw", &CaseStudyParams::other_loads_kw)
        .def_readwrite("initial_bus_soc", &CaseStudyParams::initial_bus_soc)
        .def_readwrite("seed", &CaseStudyParams::seed);

    m.def("paper_case_params", &paper_case_params);
    m.def("desk_case_params", &desk_case_params, py::arg("bus_count"),
          py::arg("interval_count"), py::arg("interval_minutes"), py::arg("seed"));
    m.def("generate", &generate, py::arg("params"));
    m.def("default_tariff", &default_tariff, py::arg("grid"));
    m.def("scenario_to_json", &scenario_to_json);
    m.def("scenario_from_json", &scenario_from_json);
    m.def("load_scenario_file", &load_scenario_file);
    m.def("save_scenario_file", &save_scenario_file);

    // ---- solver configuration and planning ----
    py::class_<milp::SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("feasibility_tol", &milp::SolverConfig::feasibility_tol)
        .def_readwrite("integrality_tol", &milp::SolverConfig::integrality_tol)
        .def_readwrite("relative_gap", &milp::SolverConfig::relative_gap)
        .def_readwrite("node_limit", &milp::SolverConfig::node_limit)
        .def_readwrite("time_limit_seconds", &milp::SolverConfig::time_limit_seconds);

    py::enum_<StrategyKind>(m, "StrategyKind")
        .value("coordinated_no_ess", StrategyKind::coordinated_no_ess)
        .value("coordinated_with_ess", StrategyKind::coordinated_with_ess)
        .value("coordinated_with_ess_heuristic", StrategyKind::coordinated_with_ess_heuristic)
        .value("uncoordinated_with_ess", StrategyKind::uncoordinated_with_ess);
    m.def("strategy_from_string", &strategy_from_string);
    m.def("strategy_name", [](StrategyKind k) { return std::string(to_string(k)); });

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("solver", &ControllerConfig::solver)
        .def_readwrite("use_forecasts", &ControllerConfig::use_forecasts)
        .def_readwrite("forecast_noise_sd", &ControllerConfig::forecast_noise_sd)
        .def_readwrite("noise_seed", &ControllerConfig::noise_seed)
        .def_readwrite("demand_margin", &ControllerConfig::demand_margin)
        .def_readwrite("external_solver", &ControllerConfig::external_solver);

    py::class_<Violation>(m, "Violation")
        .def_readonly("constraint", &Violation::constraint)
        .def_readonly("bus", &Violation::bus)
        .def_readonly("interval", &Violation::interval)
        .def_readonly("detail", &Violation::detail);

    py::class_<IntervalCommand>(m, "IntervalCommand")
        .def_readonly("interval", &IntervalCommand::interval)
        .def_readonly("plan_offset", &IntervalCommand::plan_offset)
        .def_readonly("peb_on_charge", &IntervalCommand::peb_on_charge)
        .def_readonly("ess_charge_kw", &IntervalCommand::ess_charge_kw)
        .def_readonly("ess_discharge_kw", &IntervalCommand::ess_discharge_kw)
        .def_readonly("solver_status", &IntervalCommand::solver_status)
        .def_readonly("solve_seconds", &IntervalCommand::solve_seconds)
        .def_readonly("fallback", &IntervalCommand::fallback);

    py::class_<EpisodeResult>(m, "EpisodeResult")
        .def_readonly("strategy", &EpisodeResult::strategy)
        .def_readonly("realized", &EpisodeResult::realized)
        .def_readonly("costs", &EpisodeResult::costs)
        .def_readonly("log", &EpisodeResult::log)
        .def_readonly("violations", &EpisodeResult::violations)
        .def_readonly("unmet_demand_events", &EpisodeResult::unmet_demand_events)
        .def_readonly("fallback_count", &EpisodeResult::fallback_count)
        .def_readonly("mean_solve_seconds", &EpisodeResult::mean_solve_seconds);

    m.def(
        "plan_day_one",
        [](const Scenario& s, StrategyKind strategy, const ControllerConfig& cfg) {
            WindowInput win = WindowInput::from_scenario(s);
            std::string status;
            ChargeSchedule plan = plan_window_schedule(win, strategy, cfg, &status);
            return py::make_tuple(plan, status);
        },
        py::arg("scenario"), py::arg("strategy"), py::arg("config") = ControllerConfig{},
        "Plan the scenario's full horizon once; returns (schedule, solver status).");
    m.def("uncoordinated_profile", &uncoordinated_profile, py::arg("scenario"));
    m.def("run_episode", &run_episode, py::arg("realized"), py::arg("strategy"),
          py::arg("config") = ControllerConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("write_episode_files", &write_episode_files, py::arg("result"), py::arg("scenario"),
          py::arg("dir"));

    m.def(
        "export_mps",
        [](const Scenario& s, bool with_ess) {
            WindowInput win = WindowInput::from_scenario(s);
            if (!with_ess) win.ess = EssSpec{};
            BuiltModel model = with_ess && win.ess.present() ? build_model_b(win)
                                                             : build_model_a(win);
            return milp::write_mps(model.instance);
        },
        py::arg("scenario"), py::arg("with_ess") = true,
        "Fixed-format MPS text of the scenario's full-horizon model.");

    // ---- reporting ----
    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("label", &RunSummary::label)
        .def_readonly("epc", &RunSummary::epc)
        .def_readonly("essc", &RunSummary::essc)
        .def_readonly("ecc", &RunSummary::ecc)
        .def_readonly("aoc", &RunSummary::aoc)
        .def_readonly("peak_kw", &RunSummary::peak_kw)
        .def_readonly("aoc_reduction_pct", &RunSummary::aoc_reduction_pct)
        .def_readonly("peak_reduction_pct", &RunSummary::peak_reduction_pct)
        .def_readonly("mean_solve_seconds", &RunSummary::mean_solve_seconds);

    py::class_<ComparisonTable>(m, "ComparisonTable")
        .def_readonly("rows", &ComparisonTable::rows)
        .def("to_csv", &ComparisonTable::to_csv);

    py::class_<LabeledRun>(m, "LabeledRun")
        .def(py::init<>())
        .def_readwrite("label", &LabeledRun::label)
        .def_readwrite("scenario", &LabeledRun::scenario)
        .def_readwrite("result", &LabeledRun::result);

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("x", &SweepPoint::x)
        .def_readonly("aoc", &SweepPoint::aoc)
        .def_readonly("peak_kw", &SweepPoint::peak_kw);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("points", &SweepResult::points)
        .def_readonly("knee", &SweepResult::knee);

    m.def("compare_runs", &compare_runs, py::arg("runs"));
    m.def("sweep_capacity", &sweep_capacity, py::arg("base"), py::arg("capacities_kwh"),
          py::arg("strategy"), py::arg("config") = ControllerConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_price", &sweep_price, py::arg("base"), py::arg("unit_prices"),
          py::arg("strategy"), py::arg("config") = ControllerConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_to_csv", &sweep_to_csv, py::arg("sweep"), py::arg("x_name"));
    m.def("emit_plot_data", &emit_plot_data, py::arg("result"), py::arg("scenario"),
          py::arg("dir"));
}
