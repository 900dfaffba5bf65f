#include "sagin/dro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sagin/model.hpp"

namespace sagin {
namespace {

constexpr double kIntegrality = 1e-6;

template <typename T>
std::vector<std::vector<T>> grid(int rows, int cols, T value) {
  return std::vector<std::vector<T>>(rows, std::vector<T>(cols, value));
}

template <typename T>
std::vector<std::vector<std::vector<T>>> cube(int a, int b, int c, T value) {
  return std::vector<std::vector<std::vector<T>>>(a, grid<T>(b, c, value));
}

void check_rates(const Scenario& scenario, const ChannelRealization& rates) {
  const int n = scenario.num_bs();
  const int m = scenario.num_sat();
  const size_t t = static_cast<size_t>(scenario.slots);
  auto shape_ok = [t](const std::vector<std::vector<double>>& r, int rows) {
    if (static_cast<int>(r.size()) != rows) return false;
    for (const auto& row : r) {
      if (row.size() < t) return false;
    }
    return true;
  };
  if (!shape_ok(rates.rate_ub, n) || !shape_ok(rates.rate_bu, n) ||
      !shape_ok(rates.rate_us, m) || !shape_ok(rates.rate_su, m)) {
    throw std::invalid_argument("rate matrices do not match the scenario");
  }
}

double positive_rate(double r, const char* what, int server, int t) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(std::string(what) + " rate of server " +
                                std::to_string(server) + " in slot " +
                                std::to_string(t) + " must be > 0");
  }
  return r;
}

void check_weights(const ProblemData& data, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != data.num_points) {
    throw std::invalid_argument("distribution size does not match support");
  }
}

}  // namespace

ProblemData make_problem_data(const Scenario& scenario,
                              const ChannelRealization& rates,
                              const SupportSet& support, bool allow_local) {
  scenario.validate();
  support.validate();
  check_rates(scenario, rates);
  ProblemData d;
  d.slots = scenario.slots;
  d.num_bs = scenario.num_bs();
  d.num_sat = scenario.num_sat();
  d.num_points = support.size();
  d.allow_local = allow_local;
  for (double xi : support.points) d.volume.push_back(xi / kBitsPerUnit);
  d.uav_capacity = scenario.uav.capacity_bits / kBitsPerUnit;
  const double delta = scenario.workload.cycles_per_bit;
  const double ret = scenario.workload.return_ratio;
  d.local_latency = delta * kBitsPerUnit / scenario.uav.cpu_hz;

  const int s_count = d.num_servers();
  d.capacity.resize(s_count);
  d.latency = grid(s_count, d.slots, 0.0);
  d.energy = grid(s_count, d.slots, 0.0);
  for (int b = 0; b < d.num_bs; ++b) {
    const BaseStation& bs = scenario.base_stations[b];
    d.capacity[b] = bs.capacity_bits / kBitsPerUnit;
    for (int t = 0; t < d.slots; ++t) {
      const double up = positive_rate(rates.rate_ub[b][t], "uplink", b, t);
      const double down = positive_rate(rates.rate_bu[b][t], "downlink", b, t);
      d.latency[b][t] =
          kBitsPerUnit * (1.0 / up + delta / bs.cpu_hz + ret / down);
      d.energy[b][t] = kBitsPerUnit * bs.link.tx_power_up_w / up;
    }
  }
  for (int s = 0; s < d.num_sat; ++s) {
    const Satellite& sat = scenario.satellites[s];
    const int j = d.num_bs + s;
    d.capacity[j] = sat.capacity_bits / kBitsPerUnit;
    for (int t = 0; t < d.slots; ++t) {
      const double up = positive_rate(rates.rate_us[s][t], "uplink", j, t);
      const double down = positive_rate(rates.rate_su[s][t], "downlink", j, t);
      d.latency[j][t] =
          kBitsPerUnit * (1.0 / up + (1.0 + ret) / sat.cloud_rate_bps +
                          delta / sat.cpu_hz + ret / down);
      d.energy[j][t] = kBitsPerUnit * (sat.link.tx_power_up_w / up +
                                       sat.tx_power_w / sat.cloud_rate_bps);
    }
  }
  d.energy_fly = energy_fly(scenario.propulsion, scenario.kinematics,
                            scenario.slots);
  d.energy_budget = scenario.energy_budget_j;
  return d;
}

// ---------------------------------------------------------------------------
// Relaxed inner problem.

InnerProblem build_inner_lp(const ProblemData& data,
                            const std::vector<double>& weights,
                            const AccessFixing& fixing) {
  check_weights(data, weights);
  const int T = data.slots;
  const int S = data.num_servers();
  const int K = data.num_points;
  if (!fixing.empty() && static_cast<int>(fixing.size()) != T * S) {
    throw std::invalid_argument("access fixing has the wrong size");
  }

  InnerProblem out;
  lp::LinearProgram& lp = out.lp;
  InnerLayout& L = out.layout;
  L.x = grid(T, S, -1);
  L.y_uav = grid(K, T, -1);
  L.y = cube(S, K, T, -1);
  L.q = grid(K, T, -1);

  // x <= 1 follows from the slot rows, so only x >= 0 is stated.
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < S; ++j) {
      L.x[t][j] = lp.add_variable(
          "x_" + std::to_string(j) + "_" + std::to_string(t), 0.0);
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int t = 0; t < T; ++t) {
      L.y_uav[k][t] = lp.add_variable(
          "yu_" + std::to_string(k) + "_" + std::to_string(t), 0.0);
    }
  }
  for (int j = 0; j < S; ++j) {
    for (int k = 0; k < K; ++k) {
      for (int t = 0; t < T; ++t) {
        L.y[j][k][t] = lp.add_variable("y_" + std::to_string(j) + "_" +
                                           std::to_string(k) + "_" +
                                           std::to_string(t),
                                       0.0);
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int t = 0; t < T; ++t) {
      L.q[k][t] = lp.add_variable(
          "Q_" + std::to_string(k) + "_" + std::to_string(t), weights[k]);
    }
  }

  L.row_slot.resize(T);
  for (int t = 0; t < T; ++t) {
    std::vector<lp::Term> terms;
    for (int j = 0; j < S; ++j) terms.push_back({L.x[t][j], 1.0});
    L.row_slot[t] = lp.add_row(terms, lp::Relation::kEqual, 1.0,
                               "one_server_" + std::to_string(t));
  }

  L.row_volume = grid(K, T, -1);
  L.row_uav_cap = grid(K, T, -1);
  L.row_cap = cube(S, K, T, -1);
  L.row_local = grid(K, T, -1);
  L.row_offload = grid(K, T, -1);
  L.row_energy.assign(K, -1);
  for (int k = 0; k < K; ++k) {
    const std::string kt_base = "_" + std::to_string(k) + "_";
    for (int t = 0; t < T; ++t) {
      const std::string kt = kt_base + std::to_string(t);
      std::vector<lp::Term> vol{{L.y_uav[k][t], 1.0}};
      for (int j = 0; j < S; ++j) vol.push_back({L.y[j][k][t], 1.0});
      L.row_volume[k][t] =
          lp.add_row(vol, lp::Relation::kEqual, data.volume[k], "volume" + kt);
      if (data.allow_local) {
        L.row_uav_cap[k][t] =
            lp.add_row({{L.y_uav[k][t], 1.0}}, lp::Relation::kLessEqual,
                       data.uav_capacity, "uav_cap" + kt);
      } else {
        lp.add_row({{L.y_uav[k][t], 1.0}}, lp::Relation::kEqual, 0.0,
                   "no_local" + kt);
      }
      for (int j = 0; j < S; ++j) {
        L.row_cap[j][k][t] = lp.add_row(
            {{L.y[j][k][t], 1.0}, {L.x[t][j], -data.capacity[j]}},
            lp::Relation::kLessEqual, 0.0,
            "cap_" + std::to_string(j) + kt);
      }
      L.row_local[k][t] = lp.add_row(
          {{L.y_uav[k][t], data.local_latency}, {L.q[k][t], -1.0}},
          lp::Relation::kLessEqual, 0.0, "local_epi" + kt);
      std::vector<lp::Term> off{{L.q[k][t], -1.0}};
      for (int j = 0; j < S; ++j) {
        off.push_back({L.y[j][k][t], data.latency[j][t]});
      }
      L.row_offload[k][t] =
          lp.add_row(off, lp::Relation::kLessEqual, 0.0, "offload_epi" + kt);
    }
    std::vector<lp::Term> energy;
    for (int t = 0; t < T; ++t) {
      for (int j = 0; j < S; ++j) {
        energy.push_back({L.y[j][k][t], data.energy[j][t]});
      }
    }
    L.row_energy[k] =
        lp.add_row(energy, lp::Relation::kLessEqual,
                   data.energy_budget - data.energy_fly,
                   "energy_" + std::to_string(k));
  }

  for (int t = 0; t < T && !fixing.empty(); ++t) {
    for (int j = 0; j < S; ++j) {
      const int v = fixing[t * S + j];
      if (v < 0) continue;
      lp.add_row({{L.x[t][j], 1.0}}, lp::Relation::kEqual, v,
                 "fix_" + std::to_string(j) + "_" + std::to_string(t));
    }
  }
  return out;
}

InnerProblem build_inner_lp(const Scenario& scenario,
                            const ChannelRealization& rates,
                            const DiscreteDistribution& p,
                            const SupportSet& support,
                            const AccessFixing& fixing) {
  return build_inner_lp(make_problem_data(scenario, rates, support), p.probs,
                        fixing);
}

// ---------------------------------------------------------------------------
// Dual certificates.

namespace {

DualCertificate empty_certificate(const ProblemData& data) {
  const int T = data.slots;
  const int K = data.num_points;
  DualCertificate c;
  c.lambda_slot.assign(T, 0.0);
  c.nu = grid(K, T, 0.0);
  c.lambda_local = grid(K, T, 0.0);
  c.lambda_offload = grid(K, T, 0.0);
  c.lambda_energy.assign(K, 0.0);
  c.mu_uav = grid(K, T, 0.0);
  c.mu_bs = cube(data.num_bs, K, T, 0.0);
  c.mu_sat = cube(data.num_sat, K, T, 0.0);
  return c;
}

double& mu_of(DualCertificate& c, const ProblemData& data, int j, int k,
              int t) {
  return j < data.num_bs ? c.mu_bs[j][k][t] : c.mu_sat[j - data.num_bs][k][t];
}

double mu_of(const DualCertificate& c, const ProblemData& data, int j, int k,
             int t) {
  return j < data.num_bs ? c.mu_bs[j][k][t] : c.mu_sat[j - data.num_bs][k][t];
}

}  // namespace

DualCertificate extract_certificate(const ProblemData& data,
                                    const InnerLayout& layout,
                                    const lp::Solution& solution) {
  if (!solution.optimal()) {
    throw std::invalid_argument("certificate needs an optimal solution");
  }
  // The solver reports d(objective)/d(rhs); Lagrange multipliers of a
  // minimization are the negatives.
  auto m = [&](int row) { return row < 0 ? 0.0 : -solution.dual.at(row); };
  const int T = data.slots;
  const int K = data.num_points;
  DualCertificate c = empty_certificate(data);
  for (int t = 0; t < T; ++t) c.lambda_slot[t] = m(layout.row_slot[t]);
  for (int k = 0; k < K; ++k) {
    c.lambda_energy[k] = m(layout.row_energy[k]);
    for (int t = 0; t < T; ++t) {
      c.nu[k][t] = m(layout.row_volume[k][t]);
      c.lambda_local[k][t] = m(layout.row_local[k][t]);
      c.lambda_offload[k][t] = m(layout.row_offload[k][t]);
      c.mu_uav[k][t] = m(layout.row_uav_cap[k][t]);
      for (int j = 0; j < data.num_servers(); ++j) {
        mu_of(c, data, j, k, t) = m(layout.row_cap[j][k][t]);
      }
    }
  }
  return c;
}

double certificate_objective(const ProblemData& data,
                             const DualCertificate& c) {
  double value = 0.0;
  for (double l : c.lambda_slot) value -= l;
  for (int k = 0; k < data.num_points; ++k) {
    value += c.lambda_energy[k] * (data.energy_fly - data.energy_budget);
    for (int t = 0; t < data.slots; ++t) {
      value -= c.nu[k][t] * data.volume[k];
      if (data.allow_local) value -= c.mu_uav[k][t] * data.uav_capacity;
    }
  }
  return value;
}

double certificate_violation(const ProblemData& data,
                             const std::vector<double>& p,
                             const DualCertificate& c) {
  check_weights(data, p);
  const int T = data.slots;
  const int S = data.num_servers();
  const int K = data.num_points;
  double worst = 0.0;
  auto at_least = [&worst](double v) { worst = std::max(worst, -v); };
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < S; ++j) {
      double v = c.lambda_slot[t];
      for (int k = 0; k < K; ++k) v -= data.capacity[j] * mu_of(c, data, j, k, t);
      at_least(v);
    }
  }
  for (int k = 0; k < K; ++k) {
    at_least(c.lambda_energy[k]);
    for (int t = 0; t < T; ++t) {
      at_least(c.lambda_local[k][t]);
      at_least(c.lambda_offload[k][t]);
      at_least(p[k] - c.lambda_local[k][t] - c.lambda_offload[k][t]);
      if (data.allow_local) {
        at_least(c.mu_uav[k][t]);
        at_least(c.nu[k][t] + c.mu_uav[k][t] +
                 data.local_latency * c.lambda_local[k][t]);
      }
      for (int j = 0; j < S; ++j) {
        const double mu = mu_of(c, data, j, k, t);
        at_least(mu);
        at_least(c.nu[k][t] + mu + data.latency[j][t] * c.lambda_offload[k][t] +
                 data.energy[j][t] * c.lambda_energy[k]);
      }
    }
  }
  return worst;
}

namespace {

// Shared body of the fixed-p dual and the worst-case LP. With `amb` null the
// weights come from `p`; otherwise p becomes a block of variables.
DualProblem build_dual_core(const ProblemData& data,
                            const std::vector<double>* p,
                            const AmbiguitySet* amb) {
  const int T = data.slots;
  const int S = data.num_servers();
  const int K = data.num_points;
  DualProblem out;
  lp::LinearProgram& lp = out.lp;
  lp.set_sense(lp::Sense::kMaximize);
  DualLayout& L = out.layout;
  const double inf = lp::kInfinity;

  if (amb != nullptr) {
    for (int k = 0; k < K; ++k) {
      L.p.push_back(lp.add_variable("p_" + std::to_string(k), 0.0));
    }
  }
  for (int t = 0; t < T; ++t) {
    L.lambda_slot.push_back(
        lp.add_variable("lambda_" + std::to_string(t), -1.0, -inf, inf));
  }
  L.nu = grid(K, T, -1);
  L.lambda_local = grid(K, T, -1);
  L.lambda_offload = grid(K, T, -1);
  L.mu_uav = grid(K, T, -1);
  L.mu = cube(S, K, T, -1);
  for (int k = 0; k < K; ++k) {
    L.lambda_energy.push_back(lp.add_variable(
        "lambda_e_" + std::to_string(k), data.energy_fly - data.energy_budget));
    for (int t = 0; t < T; ++t) {
      const std::string kt = "_" + std::to_string(k) + "_" + std::to_string(t);
      L.nu[k][t] = lp.add_variable("nu" + kt, -data.volume[k], -inf, inf);
      L.lambda_local[k][t] = lp.add_variable("lambda_l" + kt, 0.0);
      L.lambda_offload[k][t] = lp.add_variable("lambda_o" + kt, 0.0);
      if (data.allow_local) {
        L.mu_uav[k][t] = lp.add_variable("mu_u" + kt, -data.uav_capacity);
      }
      for (int j = 0; j < S; ++j) {
        L.mu[j][k][t] = lp.add_variable("mu_" + std::to_string(j) + kt, 0.0);
      }
    }
  }

  // Column of x_tj.
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < S; ++j) {
      std::vector<lp::Term> terms{{L.lambda_slot[t], 1.0}};
      for (int k = 0; k < K; ++k) {
        terms.push_back({L.mu[j][k][t], -data.capacity[j]});
      }
      lp.add_row(terms, lp::Relation::kGreaterEqual, 0.0,
                 "dx_" + std::to_string(j) + "_" + std::to_string(t));
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int t = 0; t < T; ++t) {
      const std::string kt = "_" + std::to_string(k) + "_" + std::to_string(t);
      if (data.allow_local) {
        lp.add_row({{L.nu[k][t], 1.0},
                    {L.mu_uav[k][t], 1.0},
                    {L.lambda_local[k][t], data.local_latency}},
                   lp::Relation::kGreaterEqual, 0.0, "dyu" + kt);
      }
      for (int j = 0; j < S; ++j) {
        lp.add_row({{L.nu[k][t], 1.0},
                    {L.mu[j][k][t], 1.0},
                    {L.lambda_offload[k][t], data.latency[j][t]},
                    {L.lambda_energy[k], data.energy[j][t]}},
                   lp::Relation::kGreaterEqual, 0.0,
                   "dy_" + std::to_string(j) + kt);
      }
      if (amb != nullptr) {
        lp.add_row({{L.lambda_local[k][t], 1.0},
                    {L.lambda_offload[k][t], 1.0},
                    {L.p[k], -1.0}},
                   lp::Relation::kLessEqual, 0.0, "dq" + kt);
      } else {
        lp.add_row({{L.lambda_local[k][t], 1.0}, {L.lambda_offload[k][t], 1.0}},
                   lp::Relation::kLessEqual, (*p)[k], "dq" + kt);
      }
    }
  }

  if (amb != nullptr) {
    std::vector<lp::Term> simplex;
    for (int k = 0; k < K; ++k) simplex.push_back({L.p[k], 1.0});
    lp.add_row(simplex, lp::Relation::kEqual, 1.0, "simplex");
    L.membership_aux = append_membership(membership_constraints(*amb), L.p,
                                         "amb_", &lp);
  }
  return out;
}

}  // namespace

DualProblem build_dual_lp(const ProblemData& data,
                          const std::vector<double>& p) {
  check_weights(data, p);
  return build_dual_core(data, &p, nullptr);
}

DualProblem build_outer_lp(const ProblemData& data, const AmbiguitySet& amb) {
  amb.validate();
  if (amb.support.size() != data.num_points) {
    throw std::invalid_argument("ambiguity set and problem sizes differ");
  }
  return build_dual_core(data, nullptr, &amb);
}

DualProblem build_outer_lp(const Scenario& scenario,
                           const ChannelRealization& rates,
                           const AmbiguitySet& amb) {
  return build_outer_lp(make_problem_data(scenario, rates, amb.support), amb);
}

DualCertificate certificate_from_dual(const ProblemData& data,
                                      const DualLayout& layout,
                                      const lp::Solution& solution) {
  auto v = [&](int col) { return col < 0 ? 0.0 : solution.primal.at(col); };
  DualCertificate c = empty_certificate(data);
  for (int t = 0; t < data.slots; ++t) c.lambda_slot[t] = v(layout.lambda_slot[t]);
  for (int k = 0; k < data.num_points; ++k) {
    c.lambda_energy[k] = v(layout.lambda_energy[k]);
    for (int t = 0; t < data.slots; ++t) {
      c.nu[k][t] = v(layout.nu[k][t]);
      c.lambda_local[k][t] = v(layout.lambda_local[k][t]);
      c.lambda_offload[k][t] = v(layout.lambda_offload[k][t]);
      c.mu_uav[k][t] = v(layout.mu_uav[k][t]);
      for (int j = 0; j < data.num_servers(); ++j) {
        mu_of(c, data, j, k, t) = v(layout.mu[j][k][t]);
      }
    }
  }
  return c;
}

WorstCase worst_case_distribution(const ProblemData& data,
                                  const AmbiguitySet& amb,
                                  const lp::SolverOptions& options) {
  DualProblem outer = build_outer_lp(data, amb);
  const lp::Solution s = lp::solve(outer.lp, options);
  if (!s.optimal()) {
    // The reference distribution is always feasible and the inner problem is
    // bounded below by 0, so this only happens when the inner problem is
    // infeasible for some support point.
    throw InfeasibleScenario(std::string("worst-case LP: ") +
                             lp::to_string(s.status));
  }
  WorstCase wc;
  wc.objective = s.objective;
  wc.iterations = s.iterations;
  double sum = 0.0;
  for (int col : outer.layout.p) {
    const double v = std::max(0.0, s.primal[col]);
    wc.p.probs.push_back(v);
    sum += v;
  }
  for (double& v : wc.p.probs) v /= sum;
  return wc;
}

WorstCase worst_case_distribution(const Scenario& scenario,
                                  const ChannelRealization& rates,
                                  const AmbiguitySet& amb) {
  return worst_case_distribution(
      make_problem_data(scenario, rates, amb.support), amb);
}

// ---------------------------------------------------------------------------
// Branching.

int select_branch_variable(const std::vector<double>& x) {
  int best = -1;
  double best_score = kIntegrality;
  for (size_t i = 0; i < x.size(); ++i) {
    const double score = std::min(x[i], 1.0 - x[i]);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {

struct NodeResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> x;  // t * S + j
};

NodeResult solve_node(const ProblemData& data, const std::vector<double>& p,
                      const AccessFixing& fixing,
                      const lp::SolverOptions& options, int* solves) {
  InnerProblem inner = build_inner_lp(data, p, fixing);
  const lp::Solution s = lp::solve(inner.lp, options);
  ++*solves;
  NodeResult r;
  if (s.status == lp::Status::kInfeasible) return r;
  if (!s.optimal()) {
    throw std::runtime_error(std::string("inner LP: ") +
                             lp::to_string(s.status));
  }
  r.feasible = true;
  r.objective = s.objective;
  const int S = data.num_servers();
  r.x.resize(static_cast<size_t>(data.slots) * S);
  for (int t = 0; t < data.slots; ++t) {
    for (int j = 0; j < S; ++j) r.x[t * S + j] = s.primal[inner.layout.x[t][j]];
  }
  return r;
}

BranchResult enumerate_access(const ProblemData& data,
                              const std::vector<double>& p,
                              const BranchOptions& options) {
  const int T = data.slots;
  const int S = data.num_servers();
  BranchResult out;
  NodeResult root = solve_node(data, p, {}, options.lp, &out.lp_solves);
  if (!root.feasible) throw InfeasibleScenario("relaxed problem is infeasible");
  out.relaxed_objective = root.objective;
  out.objective = std::numeric_limits<double>::infinity();
  std::vector<int> choice(T, 0);
  while (true) {
    AccessFixing fix(static_cast<size_t>(T) * S, 0);
    for (int t = 0; t < T; ++t) fix[t * S + choice[t]] = 1;
    NodeResult r = solve_node(data, p, fix, options.lp, &out.lp_solves);
    if (r.feasible && r.objective < out.objective) {
      out.objective = r.objective;
      out.access = fix;
    }
    int t = T - 1;
    while (t >= 0 && choice[t] == S - 1) choice[t--] = 0;
    if (t < 0) break;
    ++choice[t];
  }
  if (out.access.empty()) {
    throw InfeasibleScenario("no server assignment is feasible");
  }
  return out;
}

}  // namespace

BranchResult branch_and_bound(const ProblemData& data,
                              const std::vector<double>& p,
                              const BranchOptions& options) {
  check_weights(data, p);
  if (options.exhaustive) return enumerate_access(data, p, options);
  const int T = data.slots;
  const int S = data.num_servers();
  const size_t n = static_cast<size_t>(T) * S;

  BranchResult out;
  AccessFixing fix(n, -1);
  NodeResult current = solve_node(data, p, fix, options.lp, &out.lp_solves);
  if (!current.feasible) {
    throw InfeasibleScenario("relaxed problem is infeasible");
  }
  out.relaxed_objective = current.objective;

  while (true) {
    std::vector<double> x = current.x;
    for (size_t i = 0; i < n; ++i) {
      if (fix[i] >= 0) x[i] = fix[i];
    }
    const int pick = select_branch_variable(x);
    if (pick < 0) break;
    AccessFixing down = fix;
    AccessFixing up = fix;
    down[pick] = 0;
    up[pick] = 1;
    NodeResult lat0 = solve_node(data, p, down, options.lp, &out.lp_solves);
    NodeResult lat1 = solve_node(data, p, up, options.lp, &out.lp_solves);
    if (!lat0.feasible && !lat1.feasible) {
      throw InfeasibleScenario("both branches of access variable " +
                               std::to_string(pick) + " are infeasible");
    }
    if (lat0.objective < lat1.objective) {
      fix = std::move(down);
      current = std::move(lat0);
    } else {
      fix = std::move(up);
      current = std::move(lat1);
    }
    ++out.iterations;
  }

  out.access.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    out.access[i] = fix[i] >= 0 ? fix[i] : (current.x[i] > 0.5 ? 1 : 0);
  }
  out.objective = current.objective;
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end planning.

int OffloadPlan::chosen_server(int t) const {
  for (int b = 0; b < num_bs; ++b) {
    if (x_bs[b][t] == 1) return b;
  }
  for (int s = 0; s < num_sat; ++s) {
    if (x_sat[s][t] == 1) return num_bs + s;
  }
  return -1;
}

namespace {

void require_capacity(const ProblemData& data, const SupportSet& support) {
  const double best_server =
      *std::max_element(data.capacity.begin(), data.capacity.end());
  const double room = (data.allow_local ? data.uav_capacity : 0.0) + best_server;
  for (int k = 0; k < data.num_points; ++k) {
    if (data.volume[k] > room * (1.0 + 1e-12)) {
      throw InfeasibleScenario(
          "task volume " + std::to_string(support.points[k]) +
          " bits exceeds the largest admissible capacity " +
          std::to_string(room * kBitsPerUnit) + " bits");
    }
  }
}

OffloadPlan plan_at(const ProblemData& data, const SupportSet& support,
                    const DiscreteDistribution& p,
                    const SolveOptions& options) {
  const BranchResult br = branch_and_bound(data, p.probs, options.branch);
  const int T = data.slots;
  const int S = data.num_servers();
  const int K = data.num_points;

  // Re-solve with the access fixed and every support point weighted, so that
  // points the distribution ignores still get a latency-optimal allocation.
  InnerProblem polish =
      build_inner_lp(data, std::vector<double>(K, 1.0), br.access);
  const lp::Solution s = lp::solve(polish.lp, options.branch.lp);
  if (!s.optimal()) {
    throw std::runtime_error(std::string("allocation LP: ") +
                             lp::to_string(s.status));
  }
  const InnerLayout& L = polish.layout;

  OffloadPlan plan;
  plan.slots = T;
  plan.num_bs = data.num_bs;
  plan.num_sat = data.num_sat;
  plan.support = support;
  plan.worst_case_p = p;
  plan.allow_local = data.allow_local;
  plan.branch_iterations = br.iterations;
  plan.relaxed_latency_s = br.relaxed_objective;
  plan.x_bs = grid(data.num_bs, T, 0);
  plan.x_sat = grid(data.num_sat, T, 0);
  plan.y_uav = grid(K, T, 0.0);
  plan.y_bs = cube(data.num_bs, K, T, 0.0);
  plan.y_sat = cube(data.num_sat, K, T, 0.0);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < S; ++j) {
      const int v = br.access[t * S + j];
      if (j < data.num_bs) {
        plan.x_bs[j][t] = v;
      } else {
        plan.x_sat[j - data.num_bs][t] = v;
      }
    }
  }
  auto bits = [&](int col) { return std::max(0.0, s.primal[col]) * kBitsPerUnit; };
  double expected = 0.0;
  double worst_energy = 0.0;
  for (int k = 0; k < K; ++k) {
    double energy = 0.0;
    for (int t = 0; t < T; ++t) {
      plan.y_uav[k][t] = data.allow_local ? bits(L.y_uav[k][t]) : 0.0;
      double offload = 0.0;
      for (int j = 0; j < S; ++j) {
        const double y = bits(L.y[j][k][t]);
        if (j < data.num_bs) {
          plan.y_bs[j][k][t] = y;
        } else {
          plan.y_sat[j - data.num_bs][k][t] = y;
        }
        offload += data.latency[j][t] * y / kBitsPerUnit;
        energy += data.energy[j][t] * y / kBitsPerUnit;
      }
      const double local = data.local_latency * plan.y_uav[k][t] / kBitsPerUnit;
      expected += p.probs[k] * std::max(local, offload);
    }
    worst_energy = std::max(worst_energy, energy);
  }
  plan.expected_latency_s = expected;
  plan.energy_j = data.energy_fly + worst_energy;
  return plan;
}

}  // namespace

OffloadPlan solve_dro(const Scenario& scenario, const ChannelRealization& rates,
                      const AmbiguitySet& amb, const SolveOptions& options) {
  amb.validate();
  const ProblemData data =
      make_problem_data(scenario, rates, amb.support, options.allow_local);
  require_capacity(data, amb.support);
  const WorstCase wc = worst_case_distribution(data, amb, options.branch.lp);
  OffloadPlan plan = plan_at(data, amb.support, wc.p, options);
  plan.worst_case_objective_s = wc.objective;
  return plan;
}

OffloadPlan solve_fixed(const Scenario& scenario,
                        const ChannelRealization& rates,
                        const DiscreteDistribution& p,
                        const SupportSet& support,
                        const SolveOptions& options) {
  p.validate();
  const ProblemData data =
      make_problem_data(scenario, rates, support, options.allow_local);
  check_weights(data, p.probs);
  require_capacity(data, support);
  OffloadPlan plan = plan_at(data, support, p, options);
  plan.worst_case_objective_s = plan.relaxed_latency_s;
  return plan;
}

std::vector<std::string> plan_violations(const OffloadPlan& plan,
                                         const Scenario& scenario,
                                         double tolerance) {
  std::vector<std::string> out;
  const int T = plan.slots;
  const int K = plan.support.size();
  auto where = [](int k, int t) {
    return " (k=" + std::to_string(k) + ", t=" + std::to_string(t) + ")";
  };
  for (int t = 0; t < T; ++t) {
    int selected = 0;
    for (const auto& row : plan.x_bs) {
      if (row[t] != 0 && row[t] != 1) out.push_back("non-binary BS access");
      selected += row[t];
    }
    for (const auto& row : plan.x_sat) {
      if (row[t] != 0 && row[t] != 1) out.push_back("non-binary satellite access");
      selected += row[t];
    }
    if (selected != 1) {
      out.push_back("slot " + std::to_string(t) + " selects " +
                    std::to_string(selected) + " servers");
    }
  }
  for (int k = 0; k < K; ++k) {
    const double xi = plan.support.points[k];
    const double tol = tolerance * std::max(1.0, xi);
    for (int t = 0; t < T; ++t) {
      double total = plan.y_uav[k][t];
      if (plan.y_uav[k][t] < -tol) out.push_back("negative UAV share" + where(k, t));
      if (!plan.allow_local && plan.y_uav[k][t] > tol) {
        out.push_back("local compute in a plan that forbids it" + where(k, t));
      }
      if (plan.y_uav[k][t] > scenario.uav.capacity_bits + tol) {
        out.push_back("UAV capacity exceeded" + where(k, t));
      }
      for (int b = 0; b < plan.num_bs; ++b) {
        const double y = plan.y_bs[b][k][t];
        total += y;
        if (y < -tol) out.push_back("negative BS share" + where(k, t));
        if (y > scenario.base_stations[b].capacity_bits * plan.x_bs[b][t] + tol) {
          out.push_back("BS " + std::to_string(b) + " over capacity or unselected" +
                        where(k, t));
        }
      }
      for (int s = 0; s < plan.num_sat; ++s) {
        const double y = plan.y_sat[s][k][t];
        total += y;
        if (y < -tol) out.push_back("negative satellite share" + where(k, t));
        if (y > scenario.satellites[s].capacity_bits * plan.x_sat[s][t] + tol) {
          out.push_back("satellite " + std::to_string(s) +
                        " over capacity or unselected" + where(k, t));
        }
      }
      if (std::abs(total - xi) > tol) {
        out.push_back("volume not balanced" + where(k, t));
      }
    }
  }
  return out;
}

Evaluation evaluate_plan(const OffloadPlan& plan,
                         const std::vector<double>& realized,
                         const Scenario& scenario,
                         const ChannelRealization& rates,
                         const SupportSet* snap_to) {
  check_rates(scenario, rates);
  if (static_cast<int>(realized.size()) != plan.slots) {
    throw std::invalid_argument("need one realized volume per slot");
  }
  const Workload& w = scenario.workload;
  Evaluation ev;
  for (int t = 0; t < plan.slots; ++t) {
    double v = realized[t];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("realized volume must be finite and >= 0");
    }
    const int k_plan = plan.support.nearest_index(v);
    if (snap_to != nullptr) {
      v = snap_to->points[snap_to->nearest_index(v)];
    } else if (std::abs(v - plan.support.points[k_plan]) >
               1e-9 * std::max(1.0, v)) {
      throw std::invalid_argument("realized volume " + std::to_string(v) +
                                  " is not a support point of the plan");
    }
    const int k = plan.support.nearest_index(v);
    const double xi = plan.support.points[k];
    const int j = plan.chosen_server(t);
    if (j < 0) throw std::invalid_argument("plan selects no server");
    const bool is_bs = j < plan.num_bs;

    // The plan's split for the nearest support point, rescaled. The server
    // takes whatever the UAV does not.
    double local = xi > 0.0 ? plan.y_uav[k][t] * v / xi : 0.0;
    const double cu = plan.allow_local ? scenario.uav.capacity_bits : 0.0;
    const double cs = is_bs ? scenario.base_stations[j].capacity_bits
                            : scenario.satellites[j - plan.num_bs].capacity_bits;
    local = std::min(local, cu);
    double server = v - local;
    double dropped = 0.0;
    if (server > cs) {
      double extra = server - cs;
      server = cs;
      const double moved = std::min(extra, cu - local);
      local += moved;
      extra -= moved;
      dropped = extra;
    }

    double penalty = 0.0;
    if (dropped > 1e-9 * std::max(1.0, v)) {
      ++ev.drops;
      ev.dropped_bits += dropped;
      penalty = scenario.retransmission_penalty_s;
    }
    const double t_local = latency_local(local, scenario.uav.cpu_hz,
                                         w.cycles_per_bit);
    double t_off = 0.0;
    if (is_bs) {
      const BaseStation& bs = scenario.base_stations[j];
      t_off = latency_bs(server, rates.rate_ub[j][t], rates.rate_bu[j][t],
                         bs.cpu_hz, w.cycles_per_bit, w.return_ratio);
      ev.energy_j += energy_bs(server, rates.rate_ub[j][t], bs.link.tx_power_up_w);
    } else {
      const int s = j - plan.num_bs;
      const Satellite& sat = scenario.satellites[s];
      t_off = latency_sat(server, rates.rate_us[s][t], rates.rate_su[s][t],
                          sat.cloud_rate_bps, sat.cpu_hz, w.cycles_per_bit,
                          w.return_ratio);
      ev.energy_j += energy_sat(server, rates.rate_us[s][t], sat.cloud_rate_bps,
                                sat.link.tx_power_up_w, sat.tx_power_w);
    }
    const double slot = std::max(t_local, t_off) + penalty;
    ev.slot_latency_s.push_back(slot);
    ev.latency_s += slot;
  }
  ev.energy_j += energy_fly(scenario.propulsion, scenario.kinematics,
                            scenario.slots);
  return ev;
}

}  // namespace sagin
