#include <doctest.h>

#include "coast/memory/memory.hpp"
#include "coast/util/json.hpp"

using namespace coast;
using memory::Clue;
using memory::ClueType;

namespace {

Clue clue(std::string name, std::string location, std::string hint = "") {
    Clue c;
    c.name = std::move(name);
    c.location = std::move(location);
    c.description = "seen";
    c.usage_hint = std::move(hint);
    return c;
}

memory::GoalCandidate goal(const std::string& name, const std::string& action = "use it") {
    return memory::make_goal(clue(name, "room"), "memory", action);
}

}  // namespace

TEST_CASE("dedup by name and location") {
    memory::ClueMemory m;
    CHECK(m.add_clue(clue("gold key", "entrance")) == 1);
    CHECK(m.add_clue(clue("gold key", "entrance")) == 0);
    CHECK(m.size() == 1);
    CHECK(m.add_clue(clue("gold key", "entrance", "differs only here")) == 0);
    CHECK(m.add_clue(clue("  Gold   KEY ", "ENTRANCE")) == 0);
    CHECK(m.size() == 1);
}

TEST_CASE("distinct clues keep insertion order") {
    memory::ClueMemory m;
    const std::vector<Clue> batch{clue("a", "x"), clue("b", "x"), clue("c", "y")};
    CHECK(m.add_clues(batch) == 3);
    REQUIRE(m.size() == 3);
    CHECK(m.clues()[0].name == "a");
    CHECK(m.clues()[1].name == "b");
    CHECK(m.clues()[2].name == "c");
}

TEST_CASE("invalid clues are rejected before any insert") {
    memory::ClueMemory m;
    const std::vector<Clue> batch{clue("a", "x"), clue("", "x")};
    CHECK_THROWS_AS(m.add_clues(batch), SchemaError);
    CHECK(m.empty());
}

TEST_CASE("goal filtering") {
    std::vector<memory::GoalCandidate> seven;
    for (int i = 0; i < 7; ++i) seven.push_back(goal("clue " + std::to_string(i)));
    auto kept = memory::filter_goals(seven, {}, 5);
    REQUIRE(kept.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(kept[i].clue.name == "clue " + std::to_string(i));

    std::set<std::string> resolved;
    for (const auto& g : seven) resolved.insert(g.goal_id);
    CHECK(memory::filter_goals(seven, resolved, 5).empty());

    std::vector<memory::GoalCandidate> dup{goal("a"), goal("b"), goal("A "), goal("c")};
    kept = memory::filter_goals(dup, {}, 5);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].clue.name == "a");
    CHECK(kept[1].clue.name == "b");
    CHECK(kept[2].clue.name == "c");
}

TEST_CASE("goal ids ignore case and spacing") {
    CHECK(memory::goal_id("Gold Key", "Unlock the door") == memory::goal_id(" gold  key", "unlock THE door "));
    CHECK(memory::goal_id("gold key", "unlock the door") != memory::goal_id("gold key", "open the drawer"));
}

TEST_CASE("goal set keeps pending and resolved disjoint") {
    memory::GoalSet gs;
    gs.assign({goal("a"), goal("b")}, 5);
    REQUIRE(gs.pending().size() == 2);
    const auto id = gs.pending()[0].goal_id;
    gs.resolve(id);
    CHECK(gs.is_resolved(id));
    CHECK(gs.pending().size() == 1);
    gs.assign({goal("a"), goal("b"), goal("c")}, 5);
    CHECK(gs.pending().size() == 2);
    for (const auto& g : gs.pending()) CHECK_FALSE(gs.is_resolved(g.goal_id));
}

TEST_CASE("token footprint") {
    memory::ClueMemory m;
    CHECK(memory::estimate_token_footprint(m, 85) == 0);
    for (int i = 0; i < 10; ++i) m.add_clue(clue("c" + std::to_string(i), "x"));
    CHECK(memory::estimate_token_footprint(m, 85) == 850);
    for (int i = 10; i < 150; ++i) m.add_clue(clue("c" + std::to_string(i), "x"));
    CHECK(memory::estimate_token_footprint(m, 85) == 12750);
}

TEST_CASE("snapshot round trip is byte stable") {
    memory::ClueMemory m;
    auto c = clue("safe code", "office", "type into keypad");
    c.type = ClueType::code;
    c.interactable = false;
    c.first_observed_step = 12;
    m.add_clue(c);
    m.add_clue(clue("gold key", "entrance"));
    m.add_clue(clue("ledger", "office"));
    m.add_episode({"left_click(1, 2)", "office", 3});
    const auto text = memory::snapshot_text(m);
    CHECK(text == memory::snapshot_text(m));
    const auto back = memory::restore_text(text);
    CHECK(back == m);
    CHECK(memory::snapshot_text(back) == text);
    CHECK(back.contains(clue("GOLD KEY", "entrance")));
}

TEST_CASE("restore rejects broken documents") {
    memory::ClueMemory m;
    m.add_clue(clue("gold key", "entrance"));
    const auto text = memory::snapshot_text(m);
    CHECK_THROWS_AS(memory::restore_text(text.substr(0, text.size() / 2)), SchemaError);
    CHECK_THROWS_AS(memory::restore(Json{{"clues", Json::array({{{"name", "x"}}})}, {"episodes", Json::array()}}),
                    SchemaError);
    CHECK_THROWS_AS(memory::restore(Json::array()), SchemaError);
}

TEST_CASE("clue types are a closed set") {
    for (auto t : {ClueType::item, ClueType::note, ClueType::code, ClueType::visual_cue, ClueType::status,
                   ClueType::conversation}) {
        CHECK(memory::clue_type_from_string(memory::to_string(t)) == t);
    }
    CHECK_FALSE(memory::clue_type_from_string("weapon"));
}
