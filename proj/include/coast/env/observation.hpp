#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coast/env/action.hpp"
#include "coast/util/error.hpp"
#include "coast/util/json.hpp"

namespace coast::env {

COAST_DEFINE_ERROR(InvalidAction);
COAST_DEFINE_ERROR(ActionOnTerminalState);

struct VisibleElement {
    std::string id;
    std::string label;
    std::string kind;
    Rect rect;
    std::optional<std::string> text;
    bool operator==(const VisibleElement&) const = default;
};

// What the agent sees after a step: a symbolic rendering of the scene.
struct Observation {
    int step_index = 0;
    std::string scene_label;
    std::vector<VisibleElement> visible_elements;
    std::vector<std::string> inventory_view;
    std::map<std::string, double> hud_values;
    std::optional<std::string> dialogue_text;

    const VisibleElement* find(std::string_view element_id) const;
    bool operator==(const Observation&) const = default;
};

Json to_json(const Observation& obs);
Observation observation_from_json(const Json& value);

// Digest over the canonical JSON form; equal observations give equal digests.
std::string digest(const Observation& obs);

enum class EventKind {
    item_acquired,
    lock_opened,
    dialogue_shown,
    score_changed,
    milestone_reached,
    terminal_success,
    no_effect,
    clue_observed,
    clue_used,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

// `subject` names the item, lock flag, counter, milestone or clue involved.
// `step` is only meaningful for clue events: the observation index at which
// a clue became visible, or the step whose action used it.
struct Event {
    EventKind kind = EventKind::no_effect;
    std::string subject;
    double delta = 0.0;
    int step = 0;
    bool operator==(const Event&) const = default;
};

Json to_json(const Event& event);
Event event_from_json(const Json& value);

// Events that count as a "meaningful in-game change".
bool is_meaningful(EventKind kind);

struct StepOutcome {
    Observation observation;
    std::vector<Event> events;
    bool terminal = false;

    bool has(EventKind kind) const;
};

struct DiscreteMilestone {
    std::string id;
    bool achieved = false;
    bool operator==(const DiscreteMilestone&) const = default;
};

struct ContinuousReading {
    std::string milestone_id;
    std::string counter;
    double raw = 0.0;
    double normalizer = 1.0;
    std::string normalizer_source;  // "max_attainable" or "human_reference"
    bool operator==(const ContinuousReading&) const = default;
};

// Ground-truth progress. Never part of an Observation.
struct MilestoneStatus {
    std::vector<DiscreteMilestone> discrete;
    std::vector<ContinuousReading> continuous;

    int achieved_count() const;
    // Length of the achieved prefix in authored order.
    int achieved_prefix() const;
    // Raw value of the first continuous counter (0 if none).
    double continuous_raw() const;
    bool operator==(const MilestoneStatus&) const = default;
};

Json to_json(const MilestoneStatus& status);

// Candidate for click resolution. `order_key` breaks the final tie
// (lowest wins); it is normally the element id.
struct HitCandidate {
    Rect rect;
    int z = 0;
    std::string_view order_key;
};

// Smallest containing rectangle wins; ties go to the highest z, then the
// lowest order_key. Returns the index into `candidates`, or nullopt on a miss.
std::optional<std::size_t> hit_test(std::span<const HitCandidate> candidates, Point p);

}  // namespace coast::env
