#pragma once

#include <string>

#include <json.hpp>

#include "sagin/dro.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

// Scenario documents. Capacities may be given per slot in bits
// ("capacity_bits") or as a rate ("capacity_bps", multiplied by the slot
// duration). Missing fields take the library defaults; a missing energy
// budget becomes default_energy_budget().
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

// Five base stations around the UAV orbit (two of them small cells), three
// low-orbit satellites between 780 and 800 km, two 60 s slots.
Scenario reference_scenario();

nlohmann::json plan_to_json(const OffloadPlan& plan);
OffloadPlan plan_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::string& path);

}  // namespace sagin
