#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coast/env/observation.hpp"
#include "coast/sim/game_spec.hpp"

namespace coast::sim {

// Hidden runtime state of one game instance. Plain value: copy to clone.
struct EnvState {
    SpecPtr spec;
    std::uint64_t seed = 0;
    // Cosmetic jitter per element. Fixed at init, so clones share it.
    std::shared_ptr<const std::vector<env::Point>> offsets;

    int scene = 0;
    std::vector<std::uint8_t> flags;
    std::vector<std::uint8_t> inventory;
    std::vector<int> counters;
    int selected = -1;  // selected inventory item
    int focus = -1;     // focused input element
    int dialogue_rule = -1;
    int step_index = 0;
    bool terminal = false;
    bool success = false;
    std::vector<std::uint8_t> clues_seen;
    std::vector<std::uint8_t> clues_used;

    bool operator==(const EnvState& other) const;
};

// A visible, clickable thing: an authored element or an inventory slot.
struct VisibleRef {
    bool slot = false;
    int index = -1;  // element index, or item index for slots
    env::Rect rect;
    int z = 0;
    std::string_view id;  // points into the spec
};

// Seed 0 (the default) is the canonical layout; other seeds jitter element
// rectangles within their declared bounds.
EnvState init(SpecPtr spec, std::optional<std::uint64_t> seed = std::nullopt);

env::Observation render(const EnvState& state);

std::vector<VisibleRef> visible_refs(const EnvState& state);

// Throws env::InvalidAction or env::ActionOnTerminalState. Search code may
// skip rendering the resulting observation.
env::StepOutcome step_in_place(EnvState& state, const env::Action& action, bool render_observation = true);
std::pair<EnvState, env::StepOutcome> step(const EnvState& state, const env::Action& action);

env::MilestoneStatus milestone_vector(const EnvState& state);

bool evaluate(const Condition& condition, const EnvState& state);
bool evaluate(const Evidence& evidence, const env::Observation& obs);

// Point inside the element's current rectangle that hit-tests to it.
// Accepts authored ids and "inv:<item>" slot ids.
std::optional<env::Point> locate(const EnvState& state, std::string_view element_id);
std::optional<env::Point> locate(const std::vector<VisibleRef>& refs, std::string_view element_id);

// Search identity: ignores cosmetic layout, dialogue and bookkeeping.
std::string abstract_key(const EnvState& state);

// Copy with terminal cleared so verification probes can act on it.
EnvState resume(const EnvState& state);

// clue_observed events for clues visible in the initial observation.
std::vector<env::Event> initial_clue_events(const EnvState& state);

Json state_to_json(const EnvState& state);
// Throws SchemaError on malformed snapshots or a spec hash mismatch.
EnvState state_from_json(SpecPtr spec, const Json& value);

}  // namespace coast::sim
