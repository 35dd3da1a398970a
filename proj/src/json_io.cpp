#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pebfcs/json_io.hpp"

namespace pebfcs {

using nlohmann::json;

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["grid"] = {{"interval_count", s.grid.interval_count},
                 {"interval_minutes", s.grid.interval_minutes},
                 {"start_clock", s.grid.start_clock}};
    j["tariff"] = {{"price_per_interval", s.tariff.price_per_interval}};
    j["cost"] = {{"ess_unit_price", s.cost.ess_unit_price},
                 {"capacity_charge", s.cost.capacity_charge},
                 {"ess_cycle_count", s.cost.ess_cycle_count},
                 {"discount_rate", s.cost.discount_rate},
                 {"station_life_years", s.cost.station_life_years}};
    j["fleet"] = {{"battery_capacity_kwh", s.fleet.battery_capacity_kwh},
                  {"rated_charge_power_kw", s.fleet.rated_charge_power_kw},
                  {"charge_efficiency", s.fleet.charge_efficiency},
                  {"soc_min", s.fleet.soc_min}};
    j["ess"] = {{"capacity_kwh", s.ess.capacity_kwh},
                {"max_charge_kw", s.ess.max_charge_kw},
                {"max_discharge_kw", s.ess.max_discharge_kw},
                {"charge_eff", s.ess.charge_eff},
                {"discharge_eff", s.ess.discharge_eff},
                {"soc_min", s.ess.soc_min},
                {"initial_soc", s.ess.initial_soc}};
    j["station"] = {{"pile_count", s.station.pile_count},
                    {"other_loads_kw", s.station.other_loads_kw}};
    json buses = json::array();
    for (const auto& events : s.timetable.by_bus) {
        json list = json::array();
        for (const auto& e : events) {
            json ev = {{"bus_id", e.bus_id},
                       {"arrival_interval", e.arrival_interval},
                       {"departure_interval", e.departure_interval},
                       {"next_trip_delta_soc", e.next_trip_delta_soc},
                       {"open_ended", e.open_ended}};
            ev["arrival_soc"] = e.arrival_soc ? json(*e.arrival_soc) : json("forecast");
            list.push_back(std::move(ev));
        }
        buses.push_back(std::move(list));
    }
    j["timetable"] = {{"by_bus", buses}};
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j = json::parse(text);
    Scenario s;
    const auto& g = j.at("grid");
    s.grid.interval_count = g.at("interval_count").get<int>();
    s.grid.interval_minutes = g.at("interval_minutes").get<double>();
    s.grid.start_clock = g.value("start_clock", 0);

    s.tariff.price_per_interval =
        j.at("tariff").at("price_per_interval").get<std::vector<double>>();

    const auto& c = j.at("cost");
    s.cost.ess_unit_price = c.at("ess_unit_price").get<double>();
    s.cost.capacity_charge = c.at("capacity_charge").get<double>();
    s.cost.ess_cycle_count = c.at("ess_cycle_count").get<int>();
    s.cost.discount_rate = c.at("discount_rate").get<double>();
    s.cost.station_life_years = c.at("station_life_years").get<int>();

    const auto& f = j.at("fleet");
    s.fleet.battery_capacity_kwh = f.at("battery_capacity_kwh").get<std::vector<double>>();
    s.fleet.rated_charge_power_kw = f.at("rated_charge_power_kw").get<double>();
    s.fleet.charge_efficiency = f.at("charge_efficiency").get<double>();
    s.fleet.soc_min = f.at("soc_min").get<double>();

    const auto& e = j.at("ess");
    s.ess.capacity_kwh = e.at("capacity_kwh").get<double>();
    s.ess.max_charge_kw = e.at("max_charge_kw").get<double>();
    s.ess.max_discharge_kw = e.at("max_discharge_kw").get<double>();
    s.ess.charge_eff = e.at("charge_eff").get<double>();
    s.ess.discharge_eff = e.at("discharge_eff").get<double>();
    s.ess.soc_min = e.at("soc_min").get<double>();
    s.ess.initial_soc = e.at("initial_soc").get<double>();

    const auto& st = j.at("station");
    s.station.pile_count = st.at("pile_count").get<int>();
    s.station.other_loads_kw = st.at("other_loads_kw").get<std::vector<double>>();

    for (const auto& list : j.at("timetable").at("by_bus")) {
        std::vector<ParkingEvent> events;
        for (const auto& ev : list) {
            ParkingEvent p;
            p.bus_id = ev.at("bus_id").get<int>();
            p.arrival_interval = ev.at("arrival_interval").get<int>();
            p.departure_interval = ev.at("departure_interval").get<int>();
            p.next_trip_delta_soc = ev.at("next_trip_delta_soc").get<double>();
            p.open_ended = ev.value("open_ended", false);
            const auto& soc = ev.at("arrival_soc");
            if (soc.is_number()) p.arrival_soc = soc.get<double>();
            events.push_back(p);
        }
        s.timetable.by_bus.push_back(std::move(events));
    }

    validate(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario_file(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file " + path);
    out << scenario_to_json(s) << "\n";
}

}  // namespace pebfcs
