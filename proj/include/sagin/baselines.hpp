#pragma once

#include <string>

#include "sagin/dro.hpp"

namespace sagin {

enum class Policy { kDro, kGreedy, kDeterministic, kGreedyDeterministic };

const char* to_string(Policy policy);
// Accepts "dro", "greedy", "deterministic", "greedy-deterministic".
Policy parse_policy(const std::string& name);

// Policies that ignore the ambiguity set.
bool metric_independent(Policy policy);

// DRO planning with the UAV's own processor switched off.
OffloadPlan greedy_plan(const Scenario& scenario,
                        const ChannelRealization& rates,
                        const AmbiguitySet& amb);

// Plans for the mean of the support points only.
OffloadPlan deterministic_plan(const Scenario& scenario,
                               const ChannelRealization& rates,
                               const SupportSet& support);

OffloadPlan greedy_deterministic_plan(const Scenario& scenario,
                                      const ChannelRealization& rates,
                                      const SupportSet& support);

OffloadPlan make_plan(Policy policy, const Scenario& scenario,
                      const ChannelRealization& rates, const AmbiguitySet& amb);

}  // namespace sagin
