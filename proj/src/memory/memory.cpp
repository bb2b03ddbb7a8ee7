#include "coast/memory/memory.hpp"

#include <algorithm>
#include <stdexcept>

#include "coast/util/hash.hpp"
#include "coast/util/text.hpp"

namespace coast::memory {

std::string dedup_key(const Clue& clue) {
    return util::normalize_key(clue.name) + '\x1f' + util::normalize_key(clue.location);
}

Json to_json(const Clue& clue) {
    return {{"name", clue.name},
            {"description", clue.description},
            {"location", clue.location},
            {"type", std::string(to_string(clue.type))},
            {"interactable", clue.interactable},
            {"usage_hint", clue.usage_hint},
            {"first_observed_step", clue.first_observed_step}};
}

Clue clue_from_json(const Json& value, const std::string& path) {
    util::JsonReader r(value, path);
    r.only({"name", "description", "location", "type", "interactable", "usage_hint", "first_observed_step"});
    Clue c;
    c.name = r.at("name").nonempty_str();
    c.description = r.at("description").str();
    c.location = r.at("location").nonempty_str();
    const auto type = r.at("type").str();
    auto t = clue_type_from_string(type);
    if (!t) r.at("type").fail("unknown clue type '" + type + "'");
    c.type = *t;
    c.interactable = r.at("interactable").boolean();
    c.usage_hint = r.at("usage_hint").str();
    const auto step = r.at("first_observed_step").int32();
    if (step < 0) r.at("first_observed_step").fail("must be non-negative");
    c.first_observed_step = step;
    return c;
}

Json to_json(const EpisodicRecord& record) {
    return {{"action_summary", record.action_summary}, {"place", record.place}, {"step_index", record.step_index}};
}

EpisodicRecord episode_from_json(const Json& value, const std::string& path) {
    util::JsonReader r(value, path);
    r.only({"action_summary", "place", "step_index"});
    EpisodicRecord e{r.at("action_summary").str(), r.at("place").str(), r.at("step_index").int32()};
    if (e.step_index < 0) r.at("step_index").fail("must be non-negative");
    return e;
}

std::size_t ClueMemory::add_clues(std::span<const Clue> clues) {
    for (const auto& c : clues) {
        if (util::trim(c.name).empty()) throw SchemaError("clue name must be non-empty");
        if (util::trim(c.location).empty()) throw SchemaError("clue '" + c.name + "' needs a location");
        if (c.first_observed_step < 0) throw SchemaError("clue '" + c.name + "' has a negative step");
    }
    std::size_t added = 0;
    for (const auto& c : clues) {
        if (keys_.insert(dedup_key(c)).second) {
            clues_.push_back(c);
            ++added;
        }
    }
    return added;
}

void ClueMemory::add_episode(EpisodicRecord record) {
    if (record.step_index < 0) throw SchemaError("episodic record has a negative step");
    episodes_.push_back(std::move(record));
}

double estimate_token_footprint(const ClueMemory& memory, double tokens_per_clue) {
    if (!(tokens_per_clue > 0.0)) throw std::invalid_argument("tokens_per_clue must be positive");
    return static_cast<double>(memory.size()) * tokens_per_clue;
}

std::string goal_id(std::string_view clue_name, std::string_view expected_action) {
    return util::digest_hex(util::normalize_key(clue_name) + '\x1f' + util::normalize_key(expected_action));
}

GoalCandidate make_goal(Clue clue, std::string related_memory, std::string expected_action) {
    GoalCandidate g{std::move(clue), std::move(related_memory), std::move(expected_action), {}};
    g.goal_id = goal_id(g.clue.name, g.expected_action);
    return g;
}

std::vector<GoalCandidate> filter_goals(const std::vector<GoalCandidate>& candidates,
                                        const std::set<std::string>& resolved, std::size_t cap) {
    if (cap == 0) throw std::invalid_argument("goal cap must be at least 1");
    std::vector<GoalCandidate> out;
    std::set<std::string> seen;
    for (const auto& c : candidates) {
        if (out.size() == cap) break;
        if (resolved.count(c.goal_id) || !seen.insert(c.goal_id).second) continue;
        out.push_back(c);
    }
    return out;
}

void GoalSet::assign(const std::vector<GoalCandidate>& candidates, std::size_t cap) {
    pending_ = filter_goals(candidates, resolved_, cap);
}

void GoalSet::resolve(const std::string& id) {
    resolved_.insert(id);
    std::erase_if(pending_, [&](const GoalCandidate& g) { return g.goal_id == id; });
}

Json snapshot(const ClueMemory& memory) {
    Json clues = Json::array();
    for (const auto& c : memory.clues()) clues.push_back(to_json(c));
    Json episodes = Json::array();
    for (const auto& e : memory.episodes()) episodes.push_back(to_json(e));
    return {{"clues", std::move(clues)}, {"episodes", std::move(episodes)}};
}

std::string snapshot_text(const ClueMemory& memory) { return util::canonical_dump(snapshot(memory)); }

ClueMemory restore(const Json& document) {
    util::JsonReader r(document, "$");
    r.expect_object();
    r.only({"clues", "episodes"});
    ClueMemory m;
    for (const auto& c : r.at("clues").elements()) {
        if (m.add_clue(clue_from_json(c.json(), c.path())) == 0) c.fail("duplicate clue in snapshot");
    }
    for (const auto& e : r.at("episodes").elements()) m.add_episode(episode_from_json(e.json(), e.path()));
    return m;
}

ClueMemory restore_text(std::string_view text) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw SchemaError("$: memory snapshot is not valid JSON");
    return restore(doc);
}

}  // namespace coast::memory
