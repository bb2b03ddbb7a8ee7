#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coast/env/action.hpp"
#include "coast/memory/clue_type.hpp"
#include "coast/util/error.hpp"
#include "coast/util/json.hpp"

namespace coast::sim {

COAST_DEFINE_ERROR(DanglingReference);
COAST_DEFINE_ERROR(UnreachableSuccess);

enum class CmpOp { lt, le, eq, ne, ge, gt };

bool compare(double lhs, CmpOp op, double rhs);

// Guard over hidden state: flags, inventory, current scene and counters.
struct Condition {
    enum class Kind { always, never, flag, has, scene, counter, all, any, negate };
    Kind kind = Kind::always;
    int index = -1;
    CmpOp op = CmpOp::ge;
    int value = 0;
    std::vector<Condition> children;
};

// Predicate over an Observation; what the judge can actually check after
// probing.
struct Evidence {
    enum class Kind { always, never, visible, hud, inventory, text, all, any, negate };
    Kind kind = Kind::always;
    std::string ref;   // element id, counter id or inventory label
    std::string text;  // substring for Kind::text
    CmpOp op = CmpOp::ge;
    double value = 0.0;
    std::vector<Evidence> children;
};

struct ElementDef {
    std::string id;
    std::string label;
    std::string kind;
    env::Rect rect;
    int z = 0;
    std::optional<std::string> text;
    Condition visible_when;
    int jitter_x = 0;
    int jitter_y = 0;
    int scene = -1;  // -1: overlay element shown in every scene
};

struct SceneDef {
    std::string id;
    std::string label;
    std::vector<int> elements;
};

struct FlagDef {
    std::string id;
    bool initial = false;
    bool lock = false;  // turning it on emits lock_opened
};

struct CounterDef {
    std::string id;
    std::string label;
    int initial = 0;
    int min = 0;
    int max = 0;
    Condition hud_when;  // counter appears in hud_values while this holds
};

struct ItemDef {
    std::string id;
    std::string label;
};

struct Trigger {
    env::ActionKind action = env::ActionKind::left_click;
    int element = -1;  // target element; -1 for global keyboard/scroll rules
    int target = -1;   // drag destination
    int item = -1;     // selected inventory item required
    std::string text;  // typed text or key name
    std::optional<env::ScrollDirection> direction;
    double min_duration = 0.0;
};

struct Effects {
    std::vector<std::pair<int, bool>> set_flags;
    std::vector<int> grant;
    std::vector<int> consume;
    std::vector<std::pair<int, int>> counter_deltas;
    int goto_scene = -1;
    std::optional<std::string> dialogue;
};

struct RuleDef {
    std::string id;
    Trigger on;
    Condition when;
    Effects effects;
};

struct ClueAnnotation {
    int element = -1;
    std::string name;
    std::string description;
    memory::ClueType type = memory::ClueType::item;
    bool interactable = true;
    std::string usage_hint;
    std::string subtask;        // authored expected action for the mapper
    std::vector<int> used_by;   // rules whose firing counts as acting on the clue
};

enum class MilestoneKind { sequential, counting, continuous };

std::string_view to_string(MilestoneKind kind);
std::optional<MilestoneKind> milestone_kind_from_string(std::string_view name);

// Probe step. When `element` is set the click coordinates are resolved
// against the live layout at judge time.
struct ProbeAction {
    env::Action action;
    std::optional<std::string> element;
};

struct ContinuousCounter {
    int counter = -1;
    double normalizer = 1.0;
    std::string source = "max_attainable";
};

struct MilestoneDef {
    std::string id;
    std::string label;
    MilestoneKind kind = MilestoneKind::sequential;
    Condition predicate;
    std::vector<ProbeAction> probe;
    Evidence evidence;
    std::vector<ContinuousCounter> counters;
};

enum class Genre { mystery, hidden_object, room_escape, visual_novel, simulation };

std::string_view to_string(Genre genre);
std::optional<Genre> genre_from_string(std::string_view name);

// Immutable after load; share through std::shared_ptr<const GameSpec>.
struct GameSpec {
    int spec_version = 1;
    std::string game_id;
    std::string title;
    std::string description;
    Genre genre = Genre::mystery;
    MilestoneKind judge_strategy = MilestoneKind::sequential;
    env::Viewport viewport;
    int step_budget = 1000;
    std::string task_query;
    std::vector<std::string> info;
    std::string completion;

    int start_scene = 0;
    std::vector<SceneDef> scenes;
    std::vector<ElementDef> elements;
    std::vector<int> overlay;
    std::vector<FlagDef> flags;
    std::vector<CounterDef> counters;
    std::vector<ItemDef> items;
    std::vector<int> initial_inventory;
    std::vector<RuleDef> rules;
    std::vector<ClueAnnotation> clues;
    std::vector<MilestoneDef> milestones;
    Condition success;
    std::vector<std::string> hints;

    // Derived lookups.
    std::unordered_map<std::string, int> element_index;
    std::unordered_map<std::string, int> scene_index;
    std::unordered_map<std::string, int> flag_index;
    std::unordered_map<std::string, int> counter_index;
    std::unordered_map<std::string, int> item_index;
    std::unordered_map<std::string, int> rule_index;
    std::vector<std::vector<int>> rules_by_element;
    std::vector<int> keyboard_rules;  // rules not bound to a clicked element
    std::vector<int> clue_by_element;  // -1 when the element carries no clue
    std::vector<std::string> slot_ids;  // "inv:<item>" per item

    Json document;     // canonical source document
    std::string hash;  // digest of the canonical document

    int slot_capacity() const { return (viewport.width - kSlotMargin) / kSlotPitch; }
    env::Rect slot_rect(int slot) const {
        return {kSlotMargin + slot * kSlotPitch, viewport.height - kSlotPitch, kSlotSize, kSlotSize};
    }

    static constexpr int kSlotMargin = 8;
    static constexpr int kSlotPitch = 56;
    static constexpr int kSlotSize = 48;
};

using SpecPtr = std::shared_ptr<const GameSpec>;

struct LoadOptions {
    bool verify = false;  // certify success reachability with the oracle
    std::size_t node_cap = 1'000'000;
};

// Parses and validates a spec document. Throws SchemaError,
// DanglingReference, or UnreachableSuccess (verify only).
SpecPtr load_spec(const Json& document, const LoadOptions& options = {});
SpecPtr load_spec_text(std::string_view text, const LoadOptions& options = {});
SpecPtr load_spec_file(const std::string& path, const LoadOptions& options = {});

}  // namespace coast::sim
