#include "sagin/model.hpp"

#include <stdexcept>

namespace sagin {
namespace {

void require_volume(double y_bits) {
  if (!(y_bits >= 0.0)) throw std::invalid_argument("negative task volume");
}

double per_rate(double y_bits, double rate, const char* what) {
  if (y_bits == 0.0) return 0.0;
  if (!(rate > 0.0)) {
    throw std::invalid_argument(std::string("zero ") + what +
                                " rate with positive volume");
  }
  return y_bits / rate;
}

}  // namespace

double latency_local(double y_bits, double cpu_hz, double cycles_per_bit) {
  require_volume(y_bits);
  if (!(cpu_hz > 0.0)) throw std::invalid_argument("UAV CPU speed must be > 0");
  return cycles_per_bit * y_bits / cpu_hz;
}

double energy_fly(const Propulsion& propulsion, const UavKinematics& kin,
                  int slots) {
  const double v = kin.speed_mps;
  const double r = kin.radius_m;
  if (!(v > 0.0)) throw std::invalid_argument("UAV speed must be > 0");
  if (!(r > 0.0)) throw std::invalid_argument("trajectory radius must be > 0");
  const double g = propulsion.gravity;
  const double power =
      (propulsion.c1 + propulsion.c2 / (g * g * r * r)) * v * v * v +
      propulsion.c2 / v;
  return power * slots * kin.slot_duration_s;
}

double latency_bs(double y_bits, double rate_up, double rate_down,
                  double cpu_hz, double cycles_per_bit, double return_ratio) {
  require_volume(y_bits);
  if (y_bits == 0.0) return 0.0;
  return per_rate(y_bits, rate_up, "uplink") +
         cycles_per_bit * y_bits / cpu_hz +
         per_rate(return_ratio * y_bits, rate_down, "downlink");
}

double energy_bs(double y_bits, double rate_up, double tx_power_w) {
  require_volume(y_bits);
  return tx_power_w * per_rate(y_bits, rate_up, "uplink");
}

double latency_sat(double y_bits, double rate_up, double rate_down,
                   double cloud_rate_bps, double cpu_hz,
                   double cycles_per_bit, double return_ratio) {
  require_volume(y_bits);
  if (y_bits == 0.0) return 0.0;
  return per_rate(y_bits, rate_up, "uplink") +
         per_rate(y_bits * (1.0 + return_ratio), cloud_rate_bps, "cloud") +
         cycles_per_bit * y_bits / cpu_hz +
         per_rate(return_ratio * y_bits, rate_down, "downlink");
}

double energy_sat(double y_bits, double rate_up, double cloud_rate_bps,
                  double tx_power_w, double sat_tx_power_w) {
  require_volume(y_bits);
  return tx_power_w * per_rate(y_bits, rate_up, "uplink") +
         sat_tx_power_w * per_rate(y_bits, cloud_rate_bps, "cloud");
}

}  // namespace sagin
