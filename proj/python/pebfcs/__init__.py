"""Charging-station scheduling: MILP models, dispatch heuristic and
rolling-horizon controller (Python bindings over the C++ core)."""

from ._core import (  # noqa: F401
    CaseStudyParams,
    ChargeSchedule,
    ComparisonTable,
    ControllerConfig,
    CostBreakdown,
    CostParams,
    DepartureBand,
    EpisodeResult,
    EssSpec,
    FleetSpec,
    IntervalCommand,
    LabeledRun,
    ParkingEvent,
    RunSummary,
    Scenario,
    SolverConfig,
    StationSpec,
    StrategyKind,
    SweepPoint,
    SweepResult,
    TariffSchedule,
    TimeGrid,
    Timetable,
    Violation,
    annualize,
    capital_recovery_factor,
    compare_runs,
    cost_breakdown,
    default_tariff,
    desk_case_params,
    emit_plot_data,
    export_mps,
    generate,
    load_scenario_file,
    paper_case_params,
    plan_day_one,
    run_episode,
    save_scenario_file,
    scenario_from_json,
    scenario_to_json,
    strategy_from_string,
    strategy_name,
    sweep_capacity,
    sweep_price,
    sweep_to_csv,
    uncoordinated_profile,
    validate,
    window_fraction,
    write_episode_files,
)

__all__ = [name for name in dir() if not name.startswith("_")]
