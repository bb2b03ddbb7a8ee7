#include "coast/policy/respo.hpp"

#include <array>
#include <utility>

#include "coast/util/text.hpp"

namespace coast::policy {
namespace {

using util::JsonReader;

constexpr std::string_view kOpen = "<RESPO>";
constexpr std::string_view kClose = "</RESPO>";

constexpr std::array<std::pair<Role, std::string_view>, 4> kRoleNames{{
    {Role::seek, "seek"},
    {Role::map, "map"},
    {Role::solve, "solve"},
    {Role::baseline, "baseline"},
}};

// Prompt clue objects name the label `clue` (seeker) or `name` (mapper).
memory::Clue parse_clue(const JsonReader& r) {
    r.only({"clue", "name", "description", "location", "type", "interactable", "usage_hint"});
    if (r.has("clue") && r.has("name")) r.fail("clue label given as both 'clue' and 'name'");
    memory::Clue c;
    c.name = (r.has("clue") ? r.at("clue") : r.at("name")).nonempty_str();
    c.description = r.at("description").str();
    c.location = r.at("location").nonempty_str();
    const auto type = r.at("type").str();
    auto t = memory::clue_type_from_string(type);
    if (!t) r.at("type").fail("unknown clue type '" + type + "'");
    c.type = *t;
    c.interactable = r.at("interactable").boolean();
    c.usage_hint = r.at("usage_hint").str();
    return c;
}

memory::EpisodicRecord parse_episode(const JsonReader& r) {
    r.only({"action", "place"});
    return {r.at("action").str(), r.at("place").str(), 0};
}

std::vector<memory::EpisodicRecord> parse_episodes(const JsonReader& r) {
    std::vector<memory::EpisodicRecord> out;
    for (const auto& e : r.elements()) out.push_back(parse_episode(e));
    return out;
}

env::Action parse_action(const JsonReader& r) { return env::action_from_json(r.json(), r.path()); }

SeekerResponse parse_seeker(const Json& body) {
    JsonReader r(body, "$");
    r.only({"clues", "episodic_memory", "proposed_action"});
    SeekerResponse out;
    for (const auto& c : r.at("clues").elements()) out.clues.push_back(parse_clue(c));
    out.episodic_memory = parse_episodes(r.at("episodic_memory"));
    out.proposed_action = parse_action(r.at("proposed_action"));
    return out;
}

MapperResponse parse_mapper(const Json& body) {
    JsonReader r(body, "$");
    MapperResponse out;
    for (const auto& m : r.elements()) {
        m.only({"clue", "related_memory", "expected_action"});
        auto clue = parse_clue(m.at("clue"));
        auto related = m.at("related_memory").str();
        auto expected = m.at("expected_action").nonempty_str();
        // Self-cap: the prompt asks for at most five matches.
        if (out.candidates.size() < kMapperSelfCap) {
            out.candidates.push_back(memory::make_goal(std::move(clue), std::move(related), std::move(expected)));
        }
    }
    return out;
}

SolverResponse parse_solver(const Json& body) {
    JsonReader r(body, "$");
    r.only({"episodic_memory", "mapping_result", "result", "proposed_action"});
    SolverResponse out;
    out.episodic_memory = parse_episodes(r.at("episodic_memory"));
    if (out.episodic_memory.empty()) r.at("episodic_memory").fail("needs at least one entry");
    if (auto mr = r.maybe("mapping_result")) {
        for (const auto& m : mr->elements()) {
            m.only({"clue", "related_memory", "goal", "reasoning", "result"});
            out.mapping_result.push_back({m.at("clue").str(), m.str_or("related_memory", ""),
                                          m.str_or("goal", ""), m.str_or("reasoning", "")});
        }
    }
    const auto result = r.at("result").str();
    if (result == "Success") {
        out.success = true;
    } else if (result != "Fail") {
        r.at("result").fail("result must be Success or Fail, got '" + result + "'");
    }
    out.proposed_action = parse_action(r.at("proposed_action"));
    return out;
}

BaselineResponse parse_baseline(const Json& body) {
    JsonReader r(body, "$");
    r.only({"proposed_action", "reasoning"});
    return {parse_action(r.at("proposed_action")), r.str_or("reasoning", "")};
}

Parsed parse_body(Role role, std::string_view body) {
    const auto trimmed = util::trim(body);
    if (trimmed == "[Nobody]") {
        if (role == Role::map) return MapperResponse{};
        return Discarded{"[Nobody] is only valid for the mapper"};
    }
    if (trimmed == "[Done]") {
        if (role == Role::baseline) return BaselineResponse{env::Action::finish(), "[Done]"};
        return Discarded{"[Done] is only valid for the baseline agent"};
    }
    Json json = Json::parse(trimmed, nullptr, false);
    if (json.is_discarded()) return Discarded{"malformed body"};
    try {
        switch (role) {
            case Role::seek: return parse_seeker(json);
            case Role::map: return parse_mapper(json);
            case Role::solve: return parse_solver(json);
            case Role::baseline: return parse_baseline(json);
        }
    } catch (const SchemaError& e) {
        return Discarded{std::string("schema violation: ") + e.what()};
    } catch (const std::exception& e) {
        return Discarded{std::string("schema violation: ") + e.what()};
    }
    return Discarded{"unknown role"};
}

Json clue_body(const memory::Clue& c, std::string_view label_key) {
    return {{std::string(label_key), c.name},
            {"description", c.description},
            {"location", c.location},
            {"type", std::string(memory::to_string(c.type))},
            {"interactable", c.interactable},
            {"usage_hint", c.usage_hint}};
}

Json episodes_body(const std::vector<memory::EpisodicRecord>& records) {
    Json out = Json::array();
    for (const auto& e : records) out.push_back({{"action", e.action_summary}, {"place", e.place}});
    return out;
}

std::string wrap(const Json& body) {
    return std::string(kOpen) + util::canonical_dump(body) + std::string(kClose);
}

}  // namespace

std::string_view to_string(Role role) {
    for (const auto& [r, name] : kRoleNames) {
        if (r == role) return name;
    }
    return "seek";
}

std::optional<Role> role_from_string(std::string_view name) {
    for (const auto& [r, n] : kRoleNames) {
        if (n == name) return r;
    }
    return std::nullopt;
}

Parsed parse_respo(Role role, std::string_view raw) {
    try {
        bool saw_block = false;
        Parsed first = Discarded{"missing <RESPO> tags"};
        std::size_t from = 0;
        while (true) {
            auto open = raw.find(kOpen, from);
            if (open == std::string_view::npos) break;
            auto start = open + kOpen.size();
            auto close = raw.find(kClose, start);
            if (close == std::string_view::npos) {
                if (!saw_block) first = Discarded{"unterminated <RESPO> block"};
                break;
            }
            auto parsed = parse_body(role, raw.substr(start, close - start));
            const bool malformed =
                is_discarded(parsed) && std::get<Discarded>(parsed).reason == "malformed body";
            // First well-formed block decides; malformed ones are skipped.
            if (!malformed) return parsed;
            if (!saw_block) first = std::move(parsed);
            saw_block = true;
            from = close + kClose.size();
        }
        return first;
    } catch (const std::exception& e) {
        return Discarded{std::string("unparseable response: ") + e.what()};
    }
}

std::optional<env::Action> proposed_action(const Parsed& parsed) {
    if (auto* s = std::get_if<SeekerResponse>(&parsed)) return s->proposed_action;
    if (auto* s = std::get_if<SolverResponse>(&parsed)) return s->proposed_action;
    if (auto* s = std::get_if<BaselineResponse>(&parsed)) return s->proposed_action;
    return std::nullopt;
}

std::string render_respo(const SeekerResponse& r) {
    Json clues = Json::array();
    for (const auto& c : r.clues) clues.push_back(clue_body(c, "clue"));
    return wrap({{"clues", clues},
                 {"episodic_memory", episodes_body(r.episodic_memory)},
                 {"proposed_action", env::to_json(r.proposed_action)}});
}

std::string render_respo(const MapperResponse& r) {
    if (r.candidates.empty()) return std::string(kOpen) + "[Nobody]" + std::string(kClose);
    Json out = Json::array();
    for (const auto& g : r.candidates) {
        out.push_back({{"clue", clue_body(g.clue, "name")},
                       {"related_memory", g.related_memory},
                       {"expected_action", g.expected_action}});
    }
    return wrap(out);
}

std::string render_respo(const SolverResponse& r) {
    Json mapping = Json::array();
    for (const auto& m : r.mapping_result) {
        mapping.push_back({{"clue", m.clue}, {"related_memory", m.related_memory}, {"goal", m.goal},
                           {"reasoning", m.reasoning}});
    }
    return wrap({{"episodic_memory", episodes_body(r.episodic_memory)},
                 {"mapping_result", mapping},
                 {"result", r.success ? "Success" : "Fail"},
                 {"proposed_action", env::to_json(r.proposed_action)}});
}

std::string render_respo(const BaselineResponse& r) {
    Json body{{"proposed_action", env::to_json(r.proposed_action)}};
    if (!r.reasoning.empty()) body["reasoning"] = r.reasoning;
    return wrap(body);
}

}  // namespace coast::policy
