#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sagin/ambiguity.hpp"
#include "sagin/channel.hpp"
#include "sagin/lp.hpp"
#include "sagin/scenario.hpp"

namespace sagin {

// Task volumes inside the LPs are expressed in megabits. Keeping the
// coefficients near 1 spares the dense simplex a lot of cancellation.
inline constexpr double kBitsPerUnit = 1e6;

// Raised when no server assignment can hold some support point, or when the
// energy budget cannot be met.
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-unit coefficients of one planning instance. Servers are indexed with
// base stations first, then satellites.
struct ProblemData {
  int slots = 0;
  int num_bs = 0;
  int num_sat = 0;
  int num_points = 0;
  std::vector<double> volume;        // [k], units
  double uav_capacity = 0.0;         // units per slot
  double local_latency = 0.0;        // s per unit
  std::vector<double> capacity;      // [j], units per slot
  std::vector<std::vector<double>> latency;  // [j][t], s per unit
  std::vector<std::vector<double>> energy;   // [j][t], J per unit
  double energy_fly = 0.0;
  double energy_budget = 0.0;
  bool allow_local = true;

  int num_servers() const { return num_bs + num_sat; }
};

ProblemData make_problem_data(const Scenario& scenario,
                              const ChannelRealization& rates,
                              const SupportSet& support, bool allow_local = true);

// Partial assignment of the access variables, indexed t * S + j:
// -1 free, 0 or 1 fixed.
using AccessFixing = std::vector<int>;

struct InnerLayout {
  std::vector<std::vector<int>> x;                 // [t][j]
  std::vector<std::vector<int>> y_uav;             // [k][t]
  std::vector<std::vector<std::vector<int>>> y;    // [j][k][t]
  std::vector<std::vector<int>> q;                 // [k][t]

  // Row indices, used to read multipliers back.
  std::vector<int> row_slot;                          // [t]
  std::vector<std::vector<int>> row_volume;           // [k][t]
  std::vector<std::vector<int>> row_uav_cap;          // [k][t], -1 if absent
  std::vector<std::vector<std::vector<int>>> row_cap; // [j][k][t]
  std::vector<std::vector<int>> row_local;            // [k][t]
  std::vector<std::vector<int>> row_offload;          // [k][t]
  std::vector<int> row_energy;                        // [k]
};

struct InnerProblem {
  lp::LinearProgram lp;
  InnerLayout layout;
};

// Relaxed expected-latency LP at a fixed distribution. The weights are the
// objective coefficients of Q_kt (normally p_k).
InnerProblem build_inner_lp(const ProblemData& data,
                            const std::vector<double>& weights,
                            const AccessFixing& fixing = {});

InnerProblem build_inner_lp(const Scenario& scenario,
                            const ChannelRealization& rates,
                            const DiscreteDistribution& p,
                            const SupportSet& support,
                            const AccessFixing& fixing = {});

// Multipliers of the relaxed LP in Lagrangian form: every inequality
// multiplier is nonnegative, slot and volume multipliers are free.
struct DualCertificate {
  std::vector<double> lambda_slot;                     // [t]
  std::vector<std::vector<double>> nu;                 // [k][t]
  std::vector<std::vector<double>> lambda_local;       // [k][t]
  std::vector<std::vector<double>> lambda_offload;     // [k][t]
  std::vector<double> lambda_energy;                   // [k]
  std::vector<std::vector<double>> mu_uav;             // [k][t]
  std::vector<std::vector<std::vector<double>>> mu_bs;   // [b][k][t]
  std::vector<std::vector<std::vector<double>>> mu_sat;  // [s][k][t]
};

DualCertificate extract_certificate(const ProblemData& data,
                                    const InnerLayout& layout,
                                    const lp::Solution& solution);

double certificate_objective(const ProblemData& data,
                             const DualCertificate& cert);

// Largest violation of the dual constraints and sign conditions at p.
double certificate_violation(const ProblemData& data,
                             const std::vector<double>& p,
                             const DualCertificate& cert);

struct DualLayout {
  std::vector<int> p;                                // [k], outer only
  std::vector<int> lambda_slot;
  std::vector<std::vector<int>> nu;
  std::vector<std::vector<int>> lambda_local;
  std::vector<std::vector<int>> lambda_offload;
  std::vector<int> lambda_energy;
  std::vector<std::vector<int>> mu_uav;
  std::vector<std::vector<std::vector<int>>> mu;     // [j][k][t]
  std::vector<int> membership_aux;
};

struct DualProblem {
  lp::LinearProgram lp;
  DualLayout layout;
};

// Hand-derived dual of the relaxed LP at a fixed p (maximization).
DualProblem build_dual_lp(const ProblemData& data, const std::vector<double>& p);

// Worst-case LP: the same dual with p as variables, constrained to the
// ambiguity set.
DualProblem build_outer_lp(const ProblemData& data, const AmbiguitySet& amb);

DualProblem build_outer_lp(const Scenario& scenario,
                           const ChannelRealization& rates,
                           const AmbiguitySet& amb);

DualCertificate certificate_from_dual(const ProblemData& data,
                                      const DualLayout& layout,
                                      const lp::Solution& solution);

struct WorstCase {
  DiscreteDistribution p;
  double objective = 0.0;
  int iterations = 0;
};

WorstCase worst_case_distribution(const ProblemData& data,
                                  const AmbiguitySet& amb,
                                  const lp::SolverOptions& options = {});

WorstCase worst_case_distribution(const Scenario& scenario,
                                  const ChannelRealization& rates,
                                  const AmbiguitySet& amb);

struct OffloadPlan {
  int slots = 0;
  int num_bs = 0;
  int num_sat = 0;
  SupportSet support;
  std::vector<std::vector<int>> x_bs;    // [b][t]
  std::vector<std::vector<int>> x_sat;   // [s][t]
  std::vector<std::vector<double>> y_uav;                 // [k][t], bits
  std::vector<std::vector<std::vector<double>>> y_bs;     // [b][k][t], bits
  std::vector<std::vector<std::vector<double>>> y_sat;    // [s][k][t], bits
  DiscreteDistribution worst_case_p;
  // Sum over slots of the p-weighted slot latency at the integral plan.
  double expected_latency_s = 0.0;
  // Optimum of the worst-case LP (relaxed access decisions).
  double worst_case_objective_s = 0.0;
  // Relaxed LP optimum at worst_case_p before any branching.
  double relaxed_latency_s = 0.0;
  // Propulsion plus the transmission energy of the costliest support point.
  double energy_j = 0.0;
  int branch_iterations = 0;
  bool relaxed = false;
  bool allow_local = true;

  // Server index (base stations first) chosen in slot t, or -1.
  int chosen_server(int t) const;
};

struct BranchOptions {
  // Enumerate every per-slot server choice instead of diving. For testing.
  bool exhaustive = false;
  lp::SolverOptions lp;
};

struct BranchResult {
  AccessFixing access;         // fully fixed, t * S + j
  double objective = 0.0;      // expected latency at the integral point
  double relaxed_objective = 0.0;
  int iterations = 0;
  int lp_solves = 0;
};

// Most fractional access entry (largest min(x, 1 - x)); ties go to the lowest
// index. Entries within 1e-6 of 0 or 1 count as integral. Returns -1 if none.
int select_branch_variable(const std::vector<double>& x);

BranchResult branch_and_bound(const ProblemData& data,
                              const std::vector<double>& p,
                              const BranchOptions& options = {});

struct SolveOptions {
  bool allow_local = true;
  BranchOptions branch;
};

// Worst-case distribution, then the branching dive at that distribution.
OffloadPlan solve_dro(const Scenario& scenario, const ChannelRealization& rates,
                      const AmbiguitySet& amb, const SolveOptions& options = {});

// Plan for a fixed distribution (no ambiguity).
OffloadPlan solve_fixed(const Scenario& scenario,
                        const ChannelRealization& rates,
                        const DiscreteDistribution& p,
                        const SupportSet& support,
                        const SolveOptions& options = {});

// Lists every broken structural invariant: single selection per slot, volume
// balance, capacity caps, zero allocation on unselected servers, local
// compute forbidden when the plan does not allow it.
std::vector<std::string> plan_violations(const OffloadPlan& plan,
                                         const Scenario& scenario,
                                         double tolerance = 1e-6);

struct Evaluation {
  double latency_s = 0.0;
  double energy_j = 0.0;
  int drops = 0;
  double dropped_bits = 0.0;
  std::vector<double> slot_latency_s;
};

// Replays the plan against one realized volume per slot. When `snap_to` is
// given, each value is first moved to its nearest point there; otherwise each
// value must be one of the plan's support points. The allocation of the
// plan's nearest support point is rescaled to the realized volume, capped at
// the UAV and server capacities, and anything left over is dropped with the
// retransmission penalty added once for that slot.
Evaluation evaluate_plan(const OffloadPlan& plan,
                         const std::vector<double>& realized,
                         const Scenario& scenario,
                         const ChannelRealization& rates,
                         const SupportSet* snap_to = nullptr);

}  // namespace sagin
