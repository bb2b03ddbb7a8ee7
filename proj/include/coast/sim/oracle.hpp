#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coast/sim/env_state.hpp"

namespace coast::sim {

COAST_DEFINE_ERROR(Unsolvable);
COAST_DEFINE_ERROR(StateSpaceBudgetExceeded);

// One plan step. `target` / `drag_target` name the elements the pointer
// coordinates were resolved against, so the step can be re-aimed on a
// jittered layout.
struct PlanStep {
    env::Action action;
    std::string target;
    std::string drag_target;
};

struct Plan {
    std::vector<PlanStep> steps;
    std::size_t expanded = 0;

    std::vector<env::Action> actions() const;
};

struct OracleOptions {
    std::size_t node_cap = 1'000'000;
};

// Breadth-first search over abstract states. Ties break by rule
// declaration order, so the plan is deterministic for a given spec.
Plan oracle_solve(const SpecPtr& spec, const OracleOptions& options = {});
Plan oracle_solve_from(const EnvState& start, const OracleOptions& options = {});

// Candidate moves in the order the search tries them.
std::vector<PlanStep> candidate_actions(const EnvState& state);

// Re-resolves pointer coordinates against the state's current layout.
// Falls back to the recorded action when the target is not visible.
env::Action concretize(const PlanStep& step, const EnvState& state);

}  // namespace coast::sim
