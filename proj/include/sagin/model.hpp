#pragma once

#include "sagin/scenario.hpp"

// Latency and energy of one slot's allocation. Volumes are in bits, rates in
// bits/second, CPU speeds in cycles/second.
namespace sagin {

double latency_local(double y_bits, double cpu_hz, double cycles_per_bit);

// Propulsion energy of the whole horizon of `slots` slots.
double energy_fly(const Propulsion& propulsion, const UavKinematics& kin,
                  int slots);

// Uplink + BS compute + result return.
double latency_bs(double y_bits, double rate_up, double rate_down,
                  double cpu_hz, double cycles_per_bit, double return_ratio);

double energy_bs(double y_bits, double rate_up, double tx_power_w);

// Uplink + satellite-cloud round trip + cloud compute + result return.
double latency_sat(double y_bits, double rate_up, double rate_down,
                   double cloud_rate_bps, double cpu_hz,
                   double cycles_per_bit, double return_ratio);

double energy_sat(double y_bits, double rate_up, double cloud_rate_bps,
                  double tx_power_w, double sat_tx_power_w);

}  // namespace sagin
