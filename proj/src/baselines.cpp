#include "sagin/baselines.hpp"

#include <numeric>
#include <stdexcept>

namespace sagin {

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::kDro: return "dro";
    case Policy::kGreedy: return "greedy";
    case Policy::kDeterministic: return "deterministic";
    case Policy::kGreedyDeterministic: return "greedy-deterministic";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  if (name == "dro") return Policy::kDro;
  if (name == "greedy") return Policy::kGreedy;
  if (name == "deterministic") return Policy::kDeterministic;
  if (name == "greedy-deterministic" || name == "greedy_deterministic") {
    return Policy::kGreedyDeterministic;
  }
  throw std::invalid_argument("unknown policy '" + name + "'");
}

bool metric_independent(Policy policy) {
  return policy == Policy::kDeterministic ||
         policy == Policy::kGreedyDeterministic;
}

OffloadPlan greedy_plan(const Scenario& scenario,
                        const ChannelRealization& rates,
                        const AmbiguitySet& amb) {
  SolveOptions options;
  options.allow_local = false;
  return solve_dro(scenario, rates, amb, options);
}

namespace {

OffloadPlan point_estimate_plan(const Scenario& scenario,
                                const ChannelRealization& rates,
                                const SupportSet& support, bool allow_local) {
  support.validate();
  const double mean =
      std::accumulate(support.points.begin(), support.points.end(), 0.0) /
      support.size();
  SolveOptions options;
  options.allow_local = allow_local;
  return solve_fixed(scenario, rates, DiscreteDistribution{{1.0}},
                     SupportSet{{mean}}, options);
}

}  // namespace

OffloadPlan deterministic_plan(const Scenario& scenario,
                               const ChannelRealization& rates,
                               const SupportSet& support) {
  return point_estimate_plan(scenario, rates, support, true);
}

OffloadPlan greedy_deterministic_plan(const Scenario& scenario,
                                      const ChannelRealization& rates,
                                      const SupportSet& support) {
  return point_estimate_plan(scenario, rates, support, false);
}

OffloadPlan make_plan(Policy policy, const Scenario& scenario,
                      const ChannelRealization& rates, const AmbiguitySet& amb) {
  switch (policy) {
    case Policy::kDro: return solve_dro(scenario, rates, amb);
    case Policy::kGreedy: return greedy_plan(scenario, rates, amb);
    case Policy::kDeterministic:
      return deterministic_plan(scenario, rates, amb.support);
    case Policy::kGreedyDeterministic:
      return greedy_deterministic_plan(scenario, rates, amb.support);
  }
  throw std::invalid_argument("unknown policy");
}

}  // namespace sagin
