#include "sagin/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "sagin/model.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

double distance(const Position3D& a, const Position3D& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void UavKinematics::validate() const {
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius_m must be > 0");
  if (!(speed_mps > 0.0)) throw std::invalid_argument("speed_mps must be > 0");
  if (!(slot_duration_s > 0.0)) {
    throw std::invalid_argument("slot_duration_s must be > 0");
  }
  if (altitude_m < 0.0) throw std::invalid_argument("altitude_m must be >= 0");
}

void LinkBudgetParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be > 0");
    }
  };
  positive(bandwidth_hz, "bandwidth_hz");
  positive(tx_power_up_w, "tx_power_up_w");
  positive(tx_power_down_w, "tx_power_down_w");
  positive(noise_psd_w_per_hz, "noise_psd_w_per_hz");
  positive(antenna_gain_linear, "antenna_gain_linear");
  positive(pathloss_exp_los, "pathloss_exp_los");
  positive(pathloss_exp_nlos, "pathloss_exp_nlos");
  positive(wavelength_m, "wavelength_m");
  positive(shadow_fading_linear, "shadow_fading_linear");
  positive(carrier_hz, "carrier_hz");
  if (!(rician_factor >= 0.0)) {
    throw std::invalid_argument("rician_factor must be >= 0");
  }
}

double dbm_per_hz_to_w_per_hz(double dbm_per_hz) {
  return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Position3D uav_position(const UavKinematics& kin, int t) {
  const double angle = kin.initial_angle_rad +
                       kin.speed_mps * kin.slot_duration_s * t / kin.radius_m;
  return {kin.center.x + kin.radius_m * std::cos(angle),
          kin.center.y + kin.radius_m * std::sin(angle), kin.altitude_m};
}

double pathloss_umi_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("pathloss distance must be > 0");
  }
  return 32.4 + 21.0 * std::log10(distance_m) +
         20.0 * std::log10(carrier_hz / 1e9);
}

double c_band_gain_sq(const LinkBudgetParams& params, double distance_m,
                      double small_scale_power) {
  const double pl = db_to_linear(-pathloss_umi_db(distance_m, params.carrier_hz));
  return small_scale_power * params.shadow_fading_linear *
         params.shadow_fading_linear * pl;
}

namespace {

double shannon(double bandwidth, double power, double gain, double gain_sq,
               double noise_psd) {
  if (!(gain_sq >= 0.0)) throw std::invalid_argument("|h|^2 must be >= 0");
  return bandwidth *
         std::log2(1.0 + power * gain * gain_sq / (noise_psd * bandwidth));
}

}  // namespace

double rate_c_band(const LinkBudgetParams& params, double channel_gain_sq,
                   LinkDirection direction) {
  const double p = direction == LinkDirection::kUp ? params.tx_power_up_w
                                                   : params.tx_power_down_w;
  return shannon(params.bandwidth_hz, p, 1.0, channel_gain_sq,
                 params.noise_psd_w_per_hz);
}

std::complex<double> channel_us(const LinkBudgetParams& params,
                                double distance_m,
                                std::complex<double> nlos_sample) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("satellite distance must be > 0");
  }
  const double eta = params.rician_factor;
  const double phase = -2.0 * std::numbers::pi * distance_m / params.wavelength_m;
  const std::complex<double> los =
      std::sqrt(std::pow(distance_m, -params.pathloss_exp_los)) *
      std::polar(1.0, phase);
  return std::sqrt(eta / (1.0 + eta)) * los +
         std::sqrt(std::pow(distance_m, -params.pathloss_exp_nlos) /
                   (1.0 + eta)) *
             nlos_sample;
}

double rate_ka_band(const LinkBudgetParams& params, double channel_gain_sq,
                    LinkDirection direction) {
  const double p = direction == LinkDirection::kUp ? params.tx_power_up_w
                                                   : params.tx_power_down_w;
  return shannon(params.bandwidth_hz, p, params.antenna_gain_linear,
                 channel_gain_sq, params.noise_psd_w_per_hz);
}

ComplexNormal::ComplexNormal(std::uint64_t seed)
    : engine_(seed), half_(0.0, std::sqrt(0.5)) {}

std::complex<double> ComplexNormal::operator()() {
  const double re = half_(engine_);
  const double im = half_(engine_);
  return {re, im};
}

ChannelRealization realize_rates(const Scenario& scenario, std::uint64_t seed) {
  const int slots = scenario.slots;
  const int n = scenario.num_bs();
  const int m = scenario.num_sat();
  ChannelRealization out;
  out.rng_seed = seed;
  out.rate_ub.assign(n, std::vector<double>(slots, 0.0));
  out.rate_bu.assign(n, std::vector<double>(slots, 0.0));
  out.rate_us.assign(m, std::vector<double>(slots, 0.0));
  out.rate_su.assign(m, std::vector<double>(slots, 0.0));

  ComplexNormal complex_normal(seed);

  for (int t = 0; t < slots; ++t) {
    const Position3D uav = uav_position(scenario.kinematics, t + 1);
    for (int b = 0; b < n; ++b) {
      const BaseStation& bs = scenario.base_stations[b];
      const double d = distance(uav, bs.position);
      const double g = c_band_gain_sq(bs.link, d, std::norm(complex_normal()));
      out.rate_ub[b][t] = rate_c_band(bs.link, g, LinkDirection::kUp);
      out.rate_bu[b][t] = rate_c_band(bs.link, g, LinkDirection::kDown);
    }
    for (int s = 0; s < m; ++s) {
      const Satellite& sat = scenario.satellites[s];
      const double d = distance(uav, sat.positions.at(t));
      const double g = std::norm(channel_us(sat.link, d, complex_normal()));
      out.rate_us[s][t] = rate_ka_band(sat.link, g, LinkDirection::kUp);
      out.rate_su[s][t] = rate_ka_band(sat.link, g, LinkDirection::kDown);
    }
  }
  return out;
}

std::vector<Position3D> circular_orbit_positions(double altitude_m,
                                                 double initial_phase_rad,
                                                 double azimuth_rad, int slots,
                                                 double slot_duration_s) {
  constexpr double kEarthRadius = 6371e3;
  constexpr double kGm = 3.986004418e14;
  const double orbit = kEarthRadius + altitude_m;
  const double omega = std::sqrt(kGm / (orbit * orbit * orbit));
  std::vector<Position3D> out;
  out.reserve(slots);
  for (int t = 1; t <= slots; ++t) {
    const double phase = initial_phase_rad + omega * slot_duration_s * t;
    const double ground = orbit * std::sin(phase);
    out.push_back({ground * std::cos(azimuth_rad), ground * std::sin(azimuth_rad),
                   orbit * std::cos(phase) - kEarthRadius});
    if (out.back().z < 0.0) {
      throw std::invalid_argument("satellite below the horizon plane in slot " +
                                  std::to_string(t));
    }
  }
  return out;
}

void Scenario::validate() const {
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  if (num_servers() < 1) {
    throw std::invalid_argument("scenario needs at least one BS or satellite");
  }
  kinematics.validate();
  if (!(uav.cpu_hz > 0.0)) throw std::invalid_argument("UAV cpu_hz must be > 0");
  if (!(uav.capacity_bits >= 0.0)) {
    throw std::invalid_argument("UAV capacity must be >= 0");
  }
  if (!(workload.cycles_per_bit > 0.0)) {
    throw std::invalid_argument("cycles_per_bit must be > 0");
  }
  if (!(workload.return_ratio >= 0.0 && workload.return_ratio <= 1.0)) {
    throw std::invalid_argument("return_ratio must lie in [0, 1]");
  }
  if (!(energy_budget_j > 0.0)) {
    throw std::invalid_argument("energy budget must be > 0");
  }
  if (!(retransmission_penalty_s >= 0.0)) {
    throw std::invalid_argument("retransmission penalty must be >= 0");
  }
  for (size_t b = 0; b < base_stations.size(); ++b) {
    const BaseStation& bs = base_stations[b];
    const std::string tag = "base station " + std::to_string(b) + ": ";
    try {
      bs.link.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(tag + e.what());
    }
    if (!(bs.cpu_hz > 0.0)) throw std::invalid_argument(tag + "cpu_hz must be > 0");
    if (!(bs.capacity_bits >= 0.0)) {
      throw std::invalid_argument(tag + "capacity must be >= 0");
    }
    if (bs.position.z < 0.0) throw std::invalid_argument(tag + "z must be >= 0");
  }
  for (size_t s = 0; s < satellites.size(); ++s) {
    const Satellite& sat = satellites[s];
    const std::string tag = "satellite " + std::to_string(s) + ": ";
    try {
      sat.link.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(tag + e.what());
    }
    if (static_cast<int>(sat.positions.size()) < slots) {
      throw std::invalid_argument(tag + "needs one position per slot");
    }
    for (const Position3D& p : sat.positions) {
      if (p.z < 0.0) throw std::invalid_argument(tag + "z must be >= 0");
    }
    if (!(sat.cpu_hz > 0.0)) throw std::invalid_argument(tag + "cpu_hz must be > 0");
    if (!(sat.capacity_bits >= 0.0)) {
      throw std::invalid_argument(tag + "capacity must be >= 0");
    }
    if (!(sat.cloud_rate_bps > 0.0)) {
      throw std::invalid_argument(tag + "cloud_rate_bps must be > 0");
    }
    if (!(sat.tx_power_w > 0.0)) {
      throw std::invalid_argument(tag + "tx_power_w must be > 0");
    }
  }
}

double default_energy_budget(const Scenario& scenario) {
  return 2.0 * energy_fly(scenario.propulsion, scenario.kinematics,
                          scenario.slots) +
         50.0;
}

}  // namespace sagin
