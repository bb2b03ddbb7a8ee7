#pragma once

#include <cstddef>

#include "coast/sim/env_state.hpp"

namespace coast::sim {

// Exact probability that an agent clicking the centre of a uniformly chosen
// visible element reaches success within `steps` actions. Enumerates the
// abstract state graph once, then propagates probability mass over it.
// Throws StateSpaceBudgetExceeded past `node_cap` abstract states.
double random_click_success_probability(const EnvState& start, int steps, std::size_t node_cap = 2'000'000);

}  // namespace coast::sim
