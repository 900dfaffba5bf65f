#include "sagin/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace sagin {

using nlohmann::json;

namespace {

Position3D position_from_json(const json& j, const std::string& what) {
  if (j.is_array() && j.size() == 3) {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }
  if (j.is_object()) {
    return {j.value("x", 0.0), j.value("y", 0.0), j.value("z", 0.0)};
  }
  throw std::invalid_argument(what + ": expected [x, y, z]");
}

json position_to_json(const Position3D& p) { return json::array({p.x, p.y, p.z}); }

void read_link(const json& j, LinkBudgetParams* link) {
  if (j.is_null()) return;
  if (!j.is_object()) throw std::invalid_argument("link must be an object");
  link->bandwidth_hz = j.value("bandwidth_hz", link->bandwidth_hz);
  if (j.contains("tx_power_w")) {
    link->tx_power_up_w = link->tx_power_down_w = j["tx_power_w"].get<double>();
  }
  link->tx_power_up_w = j.value("tx_power_up_w", link->tx_power_up_w);
  link->tx_power_down_w = j.value("tx_power_down_w", link->tx_power_down_w);
  if (j.contains("noise_psd_dbm_per_hz")) {
    link->noise_psd_w_per_hz =
        dbm_per_hz_to_w_per_hz(j["noise_psd_dbm_per_hz"].get<double>());
  }
  link->noise_psd_w_per_hz =
      j.value("noise_psd_w_per_hz", link->noise_psd_w_per_hz);
  if (j.contains("antenna_gain_dbi")) {
    link->antenna_gain_linear = db_to_linear(j["antenna_gain_dbi"].get<double>());
  }
  link->antenna_gain_linear =
      j.value("antenna_gain_linear", link->antenna_gain_linear);
  link->rician_factor = j.value("rician_factor", link->rician_factor);
  link->pathloss_exp_los = j.value("pathloss_exp_los", link->pathloss_exp_los);
  link->pathloss_exp_nlos = j.value("pathloss_exp_nlos", link->pathloss_exp_nlos);
  if (j.contains("carrier_hz") && !j.contains("wavelength_m")) {
    link->wavelength_m = kSpeedOfLight / j["carrier_hz"].get<double>();
  }
  link->wavelength_m = j.value("wavelength_m", link->wavelength_m);
  link->shadow_fading_linear =
      j.value("shadow_fading_linear", link->shadow_fading_linear);
  link->carrier_hz = j.value("carrier_hz", link->carrier_hz);
}

json link_to_json(const LinkBudgetParams& l) {
  return {{"bandwidth_hz", l.bandwidth_hz},
          {"tx_power_up_w", l.tx_power_up_w},
          {"tx_power_down_w", l.tx_power_down_w},
          {"noise_psd_w_per_hz", l.noise_psd_w_per_hz},
          {"antenna_gain_linear", l.antenna_gain_linear},
          {"rician_factor", l.rician_factor},
          {"pathloss_exp_los", l.pathloss_exp_los},
          {"pathloss_exp_nlos", l.pathloss_exp_nlos},
          {"wavelength_m", l.wavelength_m},
          {"shadow_fading_linear", l.shadow_fading_linear},
          {"carrier_hz", l.carrier_hz}};
}

double capacity_from_json(const json& j, double slot_s, double fallback) {
  if (j.contains("capacity_bits")) return j["capacity_bits"].get<double>();
  if (j.contains("capacity_bps")) return j["capacity_bps"].get<double>() * slot_s;
  return fallback;
}

LinkBudgetParams default_c_band() {
  LinkBudgetParams l;
  l.bandwidth_hz = 20e6;
  l.tx_power_up_w = 1.6;
  l.tx_power_down_w = 1.6;
  l.noise_psd_w_per_hz = dbm_per_hz_to_w_per_hz(-174.0);
  l.antenna_gain_linear = 1.0;
  l.carrier_hz = 5e9;
  return l;
}

LinkBudgetParams default_ka_band() {
  LinkBudgetParams l;
  l.bandwidth_hz = 400e6;
  l.tx_power_up_w = 5.0;
  l.tx_power_down_w = 5.0;
  l.noise_psd_w_per_hz = dbm_per_hz_to_w_per_hz(-174.0);
  l.antenna_gain_linear = db_to_linear(43.3);
  l.rician_factor = 7.0;
  l.pathloss_exp_los = 2.0;
  l.pathloss_exp_nlos = 2.2;
  l.carrier_hz = 28e9;
  l.wavelength_m = kSpeedOfLight / 28e9;
  return l;
}

template <typename T>
std::vector<std::vector<T>> matrix_from_json(const json& j) {
  return j.get<std::vector<std::vector<T>>>();
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("scenario must be an object");
  Scenario sc;
  sc.slots = doc.value("slots", sc.slots);
  const double slot_s = doc.value("slot_duration_s", 60.0);
  sc.kinematics.slot_duration_s = slot_s;

  const json uav = doc.value("uav", json::object());
  if (uav.contains("center")) {
    sc.kinematics.center = position_from_json(uav["center"], "uav.center");
  } else {
    sc.kinematics.center = {1000.0, 0.0, 100.0};
  }
  sc.kinematics.radius_m = uav.value("radius_m", sc.kinematics.radius_m);
  sc.kinematics.altitude_m = uav.value("altitude_m", sc.kinematics.center.z);
  sc.kinematics.speed_mps = uav.value("speed_mps", sc.kinematics.speed_mps);
  sc.kinematics.initial_angle_rad =
      uav.value("initial_angle_rad", sc.kinematics.initial_angle_rad);
  sc.uav.cpu_hz = uav.value("cpu_hz", sc.uav.cpu_hz);
  sc.uav.capacity_bits = capacity_from_json(uav, slot_s, 3e6 * slot_s);

  const json wl = doc.value("workload", json::object());
  sc.workload.cycles_per_bit = wl.value("cycles_per_bit", sc.workload.cycles_per_bit);
  sc.workload.return_ratio = wl.value("return_ratio", sc.workload.return_ratio);

  const json pr = doc.value("propulsion", json::object());
  sc.propulsion.c1 = pr.value("c1", sc.propulsion.c1);
  sc.propulsion.c2 = pr.value("c2", sc.propulsion.c2);
  sc.propulsion.gravity = pr.value("gravity", sc.propulsion.gravity);

  sc.retransmission_penalty_s =
      doc.value("retransmission_penalty_s", slot_s);

  LinkBudgetParams c_band = default_c_band();
  LinkBudgetParams ka_band = default_ka_band();
  if (doc.contains("c_band")) read_link(doc["c_band"], &c_band);
  if (doc.contains("ka_band")) read_link(doc["ka_band"], &ka_band);

  for (const json& b : doc.value("base_stations", json::array())) {
    BaseStation bs;
    bs.position = position_from_json(b.at("position"), "base_stations.position");
    bs.cpu_hz = b.value("cpu_hz", bs.cpu_hz);
    bs.capacity_bits = capacity_from_json(b, slot_s, 25e6 * slot_s);
    bs.link = c_band;
    if (b.contains("link")) read_link(b["link"], &bs.link);
    sc.base_stations.push_back(bs);
  }
  for (const json& s : doc.value("satellites", json::array())) {
    Satellite sat;
    if (s.contains("positions")) {
      for (const json& p : s["positions"]) {
        sat.positions.push_back(position_from_json(p, "satellites.positions"));
      }
    } else if (s.contains("orbit")) {
      const json& o = s["orbit"];
      sat.positions = circular_orbit_positions(
          o.at("altitude_m").get<double>(), o.value("phase_rad", 0.0),
          o.value("azimuth_rad", 0.0), sc.slots, slot_s);
    } else {
      throw std::invalid_argument("satellite needs positions or orbit");
    }
    sat.cpu_hz = s.value("cpu_hz", sat.cpu_hz);
    sat.capacity_bits = capacity_from_json(s, slot_s, 150e6 * slot_s);
    sat.cloud_rate_bps = s.value("cloud_rate_bps", sat.cloud_rate_bps);
    sat.tx_power_w = s.value("tx_power_w", sat.tx_power_w);
    sat.link = ka_band;
    if (s.contains("link")) read_link(s["link"], &sat.link);
    sc.satellites.push_back(sat);
  }

  if (doc.contains("energy_budget_j") && !doc["energy_budget_j"].is_null()) {
    sc.energy_budget_j = doc["energy_budget_j"].get<double>();
  } else {
    sc.energy_budget_j = default_energy_budget(sc);
  }
  sc.validate();
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["slots"] = sc.slots;
  doc["slot_duration_s"] = sc.kinematics.slot_duration_s;
  doc["uav"] = {{"center", position_to_json(sc.kinematics.center)},
                {"radius_m", sc.kinematics.radius_m},
                {"altitude_m", sc.kinematics.altitude_m},
                {"speed_mps", sc.kinematics.speed_mps},
                {"initial_angle_rad", sc.kinematics.initial_angle_rad},
                {"cpu_hz", sc.uav.cpu_hz},
                {"capacity_bits", sc.uav.capacity_bits}};
  doc["workload"] = {{"cycles_per_bit", sc.workload.cycles_per_bit},
                     {"return_ratio", sc.workload.return_ratio}};
  doc["propulsion"] = {{"c1", sc.propulsion.c1},
                       {"c2", sc.propulsion.c2},
                       {"gravity", sc.propulsion.gravity}};
  doc["energy_budget_j"] = sc.energy_budget_j;
  doc["retransmission_penalty_s"] = sc.retransmission_penalty_s;
  doc["base_stations"] = json::array();
  for (const BaseStation& bs : sc.base_stations) {
    doc["base_stations"].push_back({{"position", position_to_json(bs.position)},
                                    {"cpu_hz", bs.cpu_hz},
                                    {"capacity_bits", bs.capacity_bits},
                                    {"link", link_to_json(bs.link)}});
  }
  doc["satellites"] = json::array();
  for (const Satellite& sat : sc.satellites) {
    json positions = json::array();
    for (const Position3D& p : sat.positions) positions.push_back(position_to_json(p));
    doc["satellites"].push_back({{"positions", positions},
                                 {"cpu_hz", sat.cpu_hz},
                                 {"capacity_bits", sat.capacity_bits},
                                 {"cloud_rate_bps", sat.cloud_rate_bps},
                                 {"tx_power_w", sat.tx_power_w},
                                 {"link", link_to_json(sat.link)}});
  }
  return doc;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  try {
    return scenario_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scenario_to_json(scenario).dump(2) << "\n";
}

Scenario reference_scenario() {
  json doc = {
      {"slots", 2},
      {"slot_duration_s", 60.0},
      {"uav",
       {{"center", {1000.0, 0.0, 100.0}},
        {"radius_m", 1000.0},
        {"speed_mps", 1000.0 / 60.0},
        {"cpu_hz", 3e8},
        {"capacity_bps", 3e6}}},
      // Small cells first: the dive breaks equal-score ties on the lowest
      // index, so it tests the capacity-limited cells before the large ones.
      {"base_stations",
       json::array({
           {{"position", {2000.0, 1000.0, 100.0}}, {"capacity_bps", 15e6}},
           {{"position", {500.0, 1000.0, 100.0}}, {"capacity_bps", 15e6}},
           {{"position", {1250.0, 0.0, 100.0}}, {"capacity_bps", 25e6}},
           {{"position", {500.0, -1000.0, 100.0}}, {"capacity_bps", 25e6}},
           {{"position", {2000.0, -1000.0, 100.0}}, {"capacity_bps", 25e6}},
       })},
      {"satellites",
       json::array({
           {{"orbit", {{"altitude_m", 780e3}, {"phase_rad", -0.03}, {"azimuth_rad", 0.0}}}},
           {{"orbit", {{"altitude_m", 790e3}, {"phase_rad", 0.0}, {"azimuth_rad", std::numbers::pi / 2}}}},
           {{"orbit", {{"altitude_m", 800e3}, {"phase_rad", 0.02}, {"azimuth_rad", std::numbers::pi}}}},
       })},
  };
  return scenario_from_json(doc);
}

json plan_to_json(const OffloadPlan& plan) {
  return {{"slots", plan.slots},
          {"num_bs", plan.num_bs},
          {"num_sat", plan.num_sat},
          {"support_bits", plan.support.points},
          {"x_bs", plan.x_bs},
          {"x_sat", plan.x_sat},
          {"y_uav", plan.y_uav},
          {"y_bs", plan.y_bs},
          {"y_sat", plan.y_sat},
          {"worst_case_p", plan.worst_case_p.probs},
          {"expected_latency_s", plan.expected_latency_s},
          {"worst_case_objective_s", plan.worst_case_objective_s},
          {"relaxed_latency_s", plan.relaxed_latency_s},
          {"energy_j", plan.energy_j},
          {"branch_iterations", plan.branch_iterations},
          {"relaxed", plan.relaxed},
          {"allow_local", plan.allow_local}};
}

OffloadPlan plan_from_json(const json& doc) {
  OffloadPlan plan;
  plan.slots = doc.at("slots").get<int>();
  plan.num_bs = doc.at("num_bs").get<int>();
  plan.num_sat = doc.at("num_sat").get<int>();
  plan.support.points = doc.at("support_bits").get<std::vector<double>>();
  plan.x_bs = matrix_from_json<int>(doc.at("x_bs"));
  plan.x_sat = matrix_from_json<int>(doc.at("x_sat"));
  plan.y_uav = matrix_from_json<double>(doc.at("y_uav"));
  plan.y_bs = doc.at("y_bs").get<std::vector<std::vector<std::vector<double>>>>();
  plan.y_sat = doc.at("y_sat").get<std::vector<std::vector<std::vector<double>>>>();
  plan.worst_case_p.probs = doc.at("worst_case_p").get<std::vector<double>>();
  plan.expected_latency_s = doc.at("expected_latency_s").get<double>();
  plan.worst_case_objective_s = doc.value("worst_case_objective_s", 0.0);
  plan.relaxed_latency_s = doc.value("relaxed_latency_s", 0.0);
  plan.energy_j = doc.at("energy_j").get<double>();
  plan.branch_iterations = doc.value("branch_iterations", 0);
  plan.relaxed = doc.value("relaxed", false);
  plan.allow_local = doc.value("allow_local", true);
  return plan;
}

}  // namespace sagin
