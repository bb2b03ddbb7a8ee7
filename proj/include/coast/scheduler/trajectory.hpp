#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coast/env/observation.hpp"
#include "coast/policy/policy.hpp"
#include "coast/sim/env_state.hpp"

namespace coast::scheduler {

enum class Phase { seek, map, solve, baseline, judge };

std::string_view to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view name);

// One scheduler step. Map steps carry no action and leave t unchanged;
// every other step advances t by one, even when the reply was discarded
// (then `action` is empty and `note` says why).
struct StepRecord {
    int index = 0;
    int t = 0;  // env steps taken before this one
    Phase phase = Phase::seek;
    std::optional<env::Action> action;
    std::string obs_digest;
    std::vector<env::Event> events;
    std::optional<int> policy_ref;
    std::optional<std::string> hint;  // injected into this step's context
    std::string note;
};

struct TranscriptRecord {
    int ref = 0;
    policy::Role role = policy::Role::seek;
    int t = 0;
    std::string backend;
    std::vector<policy::TranscriptEntry> entries;
    std::string error;
};

struct Trajectory {
    std::vector<StepRecord> steps;
    std::vector<TranscriptRecord> transcripts;
    std::vector<env::Event> initial_events;  // clue_observed at step 0
    std::string initial_digest;
    sim::EnvState final_state;
    int t = 0;

    bool success() const { return final_state.success; }
    int count(Phase phase) const;
    // Every env event in order, including the initial clue sightings.
    std::vector<env::Event> all_events() const;
};

}  // namespace coast::scheduler
