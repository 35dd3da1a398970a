#pragma once

#include <string>

#include "pebfcs/domain.hpp"

namespace pebfcs {

/// Scenario <-> JSON document with top-level keys grid, tariff, cost, fleet,
/// ess, station, timetable (schema in docs/scenario_schema.md).
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& s, const std::string& path);

}  // namespace pebfcs
