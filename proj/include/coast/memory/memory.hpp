#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "coast/memory/clue_type.hpp"
#include "coast/util/error.hpp"
#include "coast/util/json.hpp"

namespace coast::memory {

struct Clue {
    std::string name;
    std::string description;
    std::string location;
    ClueType type = ClueType::item;
    bool interactable = true;
    std::string usage_hint;
    int first_observed_step = 0;

    bool operator==(const Clue&) const = default;
};

struct EpisodicRecord {
    std::string action_summary;
    std::string place;
    int step_index = 0;

    bool operator==(const EpisodicRecord&) const = default;
};

// Case-folded, whitespace-collapsed (name, location).
std::string dedup_key(const Clue& clue);

Json to_json(const Clue& clue);
Clue clue_from_json(const Json& value, const std::string& path = "$");
Json to_json(const EpisodicRecord& record);
EpisodicRecord episode_from_json(const Json& value, const std::string& path = "$");

// Append-only clue store M plus the episodic trajectory summaries.
class ClueMemory {
public:
    // Returns how many clues were actually inserted; duplicates by
    // dedup_key are skipped. Throws SchemaError for an empty name or
    // location, before anything is inserted.
    std::size_t add_clues(std::span<const Clue> clues);
    std::size_t add_clue(const Clue& clue) { return add_clues(std::span<const Clue>(&clue, 1)); }
    void add_episode(EpisodicRecord record);

    bool contains(const Clue& clue) const { return keys_.count(dedup_key(clue)) != 0; }
    const std::vector<Clue>& clues() const { return clues_; }
    const std::vector<EpisodicRecord>& episodes() const { return episodes_; }
    std::size_t size() const { return clues_.size(); }
    bool empty() const { return clues_.empty(); }

    bool operator==(const ClueMemory& other) const {
        return clues_ == other.clues_ && episodes_ == other.episodes_;
    }

private:
    std::vector<Clue> clues_;
    std::vector<EpisodicRecord> episodes_;
    std::unordered_set<std::string> keys_;
};

double estimate_token_footprint(const ClueMemory& memory, double tokens_per_clue);

struct GoalCandidate {
    Clue clue;
    std::string related_memory;
    std::string expected_action;
    std::string goal_id;

    bool operator==(const GoalCandidate&) const = default;
};

// Stable under case and whitespace changes in either part.
std::string goal_id(std::string_view clue_name, std::string_view expected_action);
GoalCandidate make_goal(Clue clue, std::string related_memory, std::string expected_action);

// Drops resolved goals, keeps the first of any in-batch duplicate and
// truncates to `cap` in mapper order.
std::vector<GoalCandidate> filter_goals(const std::vector<GoalCandidate>& candidates,
                                        const std::set<std::string>& resolved, std::size_t cap);

// Pending goals G and the resolved set G_R; the two never intersect.
class GoalSet {
public:
    void assign(const std::vector<GoalCandidate>& candidates, std::size_t cap);
    void resolve(const std::string& goal_id);
    bool is_resolved(const std::string& goal_id) const { return resolved_.count(goal_id) != 0; }

    const std::vector<GoalCandidate>& pending() const { return pending_; }
    const std::set<std::string>& resolved() const { return resolved_; }

private:
    std::vector<GoalCandidate> pending_;
    std::set<std::string> resolved_;
};

// Canonical document {clues, episodes}; dump with util::canonical_dump.
Json snapshot(const ClueMemory& memory);
std::string snapshot_text(const ClueMemory& memory);
ClueMemory restore(const Json& document);
ClueMemory restore_text(std::string_view text);

}  // namespace coast::memory
