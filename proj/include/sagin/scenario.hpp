#pragma once

#include <string>
#include <vector>

#include "sagin/channel.hpp"

namespace sagin {

struct BaseStation {
  Position3D position;
  double cpu_hz = 5e9;
  // Bits the server can take in one slot.
  double capacity_bits = 25e6 * 60.0;
  LinkBudgetParams link;
};

struct Satellite {
  // One entry per slot.
  std::vector<Position3D> positions;
  double cpu_hz = 10e9;
  double capacity_bits = 150e6 * 60.0;
  LinkBudgetParams link;
  double cloud_rate_bps = 20e6;
  double tx_power_w = 5.0;
};

struct UavCompute {
  double cpu_hz = 3e8;
  double capacity_bits = 3e6 * 60.0;
};

struct Workload {
  double cycles_per_bit = 25.0;
  double return_ratio = 1e-3;
};

struct Propulsion {
  double c1 = 9.26e-4;
  double c2 = 2250.0;
  double gravity = 9.8;
};

struct Scenario {
  int slots = 2;
  UavKinematics kinematics;
  UavCompute uav;
  std::vector<BaseStation> base_stations;
  std::vector<Satellite> satellites;
  Workload workload;
  Propulsion propulsion;
  double energy_budget_j = 0.0;
  double retransmission_penalty_s = 60.0;

  int num_bs() const { return static_cast<int>(base_stations.size()); }
  int num_sat() const { return static_cast<int>(satellites.size()); }
  int num_servers() const { return num_bs() + num_sat(); }

  // Throws std::invalid_argument describing the first broken invariant.
  void validate() const;
};

// Twice the propulsion energy of the horizon plus 50 J.
double default_energy_budget(const Scenario& scenario);

}  // namespace sagin
