#pragma once

#include <string>

#include "coast/sim/env_state.hpp"
#include "coast/sim/game_spec.hpp"

namespace coast::test {

inline const char* const kFixtures[] = {"tea_room", "grim_hidden", "office_escape", "pico_date", "court_sim"};

inline std::string fixture_path(const std::string& name) { return std::string(COAST_FIXTURE_DIR) + "/" + name + ".json"; }

inline sim::SpecPtr fixture(const std::string& name) { return sim::load_spec_file(fixture_path(name)); }

}  // namespace coast::test

#include <random>

#include "coast/sim/oracle.hpp"

namespace coast::test {

// A terminal state somewhere along the game: an oracle-plan prefix mixed
// with random legal moves, then finish.
inline sim::EnvState random_terminal_state(const sim::SpecPtr& spec, const sim::Plan& plan, std::mt19937_64& rng) {
    auto state = sim::init(spec, rng() % 4);
    const std::size_t prefix = rng() % (plan.steps.size() + 1);
    const int wander = static_cast<int>(rng() % 12);
    for (std::size_t i = 0; i < prefix && !state.terminal; ++i) {
        if (rng() % 4 == 0) {
            const auto moves = sim::candidate_actions(state);
            if (!moves.empty()) {
                const auto& m = moves[rng() % moves.size()];
                if (m.action.kind() != env::ActionKind::finish) sim::step_in_place(state, sim::concretize(m, state), false);
            }
        }
        if (state.terminal) break;
        sim::step_in_place(state, sim::concretize(plan.steps[i], state), false);
    }
    for (int i = 0; i < wander && !state.terminal; ++i) {
        const auto moves = sim::candidate_actions(state);
        if (moves.empty()) break;
        const auto& m = moves[rng() % moves.size()];
        if (m.action.kind() == env::ActionKind::finish) continue;
        sim::step_in_place(state, sim::concretize(m, state), false);
    }
    if (!state.terminal) sim::step_in_place(state, env::Action::finish(), false);
    return state;
}

}  // namespace coast::test
