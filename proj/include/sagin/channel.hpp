#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace sagin {

struct Scenario;

struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position3D& a, const Position3D& b);

// Fixed-wing UAV on a horizontal circle. The angle origin sits at
// (center.x + radius, center.y) unless initial_angle_rad says otherwise.
struct UavKinematics {
  Position3D center;
  double radius_m = 1000.0;
  double altitude_m = 100.0;
  double speed_mps = 1000.0 / 60.0;
  double slot_duration_s = 60.0;
  double initial_angle_rad = 0.0;

  void validate() const;
};

// Link budget of one air-ground (C-band) or air-space (Ka-band) link. Powers
// are per direction: "up" is UAV -> server, "down" is server -> UAV.
struct LinkBudgetParams {
  double bandwidth_hz = 20e6;
  double tx_power_up_w = 1.6;
  double tx_power_down_w = 1.6;
  double noise_psd_w_per_hz = 3.981071705534986e-21;
  double antenna_gain_linear = 1.0;
  double rician_factor = 7.0;
  double pathloss_exp_los = 2.0;
  double pathloss_exp_nlos = 2.2;
  double wavelength_m = 299792458.0 / 28e9;
  double shadow_fading_linear = 1.0;
  double carrier_hz = 5e9;

  void validate() const;
};

enum class LinkDirection { kUp, kDown };

// N x T and M x T rate matrices in bits/second.
struct ChannelRealization {
  std::vector<std::vector<double>> rate_ub;
  std::vector<std::vector<double>> rate_bu;
  std::vector<std::vector<double>> rate_us;
  std::vector<std::vector<double>> rate_su;
  std::uint64_t rng_seed = 0;
};

inline constexpr double kSpeedOfLight = 299792458.0;

double dbm_per_hz_to_w_per_hz(double dbm_per_hz);
double db_to_linear(double db);

// Position at the end of slot t (1-based).
Position3D uav_position(const UavKinematics& kin, int t);

// UMi street-canyon LoS shape: 32.4 + 21 log10(d) + 20 log10(f_GHz).
double pathloss_umi_db(double distance_m, double carrier_hz);

// |h|^2 of the C-band channel for a given small-scale fading power |h0|^2.
double c_band_gain_sq(const LinkBudgetParams& params, double distance_m,
                      double small_scale_power);

double rate_c_band(const LinkBudgetParams& params, double channel_gain_sq,
                   LinkDirection direction);

// Rician UAV-satellite channel with a deterministic LoS phase and the given
// NLoS small-scale sample.
std::complex<double> channel_us(const LinkBudgetParams& params,
                                double distance_m,
                                std::complex<double> nlos_sample);

double rate_ka_band(const LinkBudgetParams& params, double channel_gain_sq,
                    LinkDirection direction);

// CN(0,1) draws: independent real and imaginary parts of variance 1/2.
class ComplexNormal {
 public:
  explicit ComplexNormal(std::uint64_t seed);
  std::complex<double> operator()();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> half_;
};

// Draws Rayleigh C-band fading and Ka-band NLoS samples for every server and
// slot from a single seeded engine. Same seed, same realization.
ChannelRealization realize_rates(const Scenario& scenario, std::uint64_t seed);

// Local east-north-up positions of a satellite on a circular orbit that
// passes over the origin, sampled at the end of each of `slots` slots.
std::vector<Position3D> circular_orbit_positions(double altitude_m,
                                                 double initial_phase_rad,
                                                 double azimuth_rad, int slots,
                                                 double slot_duration_s);

}  // namespace sagin
