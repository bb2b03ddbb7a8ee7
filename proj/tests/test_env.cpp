#include <doctest.h>

#include "coast/env/action.hpp"
#include "coast/env/observation.hpp"
#include "coast/util/csv.hpp"
#include "coast/util/hash.hpp"
#include "coast/util/json.hpp"

using namespace coast;
using env::Action;
using env::ScrollDirection;

TEST_CASE("actions inside the viewport validate") {
    env::Viewport vp{800, 600};
    CHECK_FALSE(env::validate_action(Action::left_click(10, 10), vp));
    CHECK_FALSE(env::validate_action(Action::left_click(799, 599), vp));
    CHECK_FALSE(env::validate_action(Action::finish(), vp));
    CHECK_FALSE(env::validate_action(Action::type_text("1234"), vp));
}

TEST_CASE("action validation reasons") {
    env::Viewport vp{800, 600};
    auto scroll = env::validate_action(Action::scroll(ScrollDirection::down, 0), vp);
    REQUIRE(scroll);
    CHECK(scroll->find("non-positive amount") != std::string::npos);
    auto oob = env::validate_action(Action::left_click(900, 10), vp);
    REQUIRE(oob);
    CHECK(oob->find("out of bounds") != std::string::npos);
    CHECK(env::validate_action(Action::drag({0, 0}, {800, 0}), vp));
    CHECK(env::validate_action(Action::key_press(""), vp));
    CHECK(env::validate_action(Action::hold_key("a", -1.0), vp));
}

TEST_CASE("action json round trip") {
    const std::vector<Action> actions{
        Action::left_click(3, 4),
        Action::click(env::ActionKind::double_click, 5, 6),
        Action::drag({1, 2}, {3, 4}),
        Action::scroll(ScrollDirection::left, 2),
        Action::key_press("Enter"),
        Action::type_text("hello"),
        Action::hold_key("w", 0.5),
        Action::finish(),
    };
    for (const auto& a : actions) {
        const auto j = env::to_json(a);
        CHECK(env::action_from_json(j) == a);
        CHECK(util::canonical_dump(env::to_json(env::action_from_json(j))) == util::canonical_dump(j));
    }
}

TEST_CASE("strict action decoding") {
    CHECK_THROWS_AS(env::action_from_json(Json{{"type", "left_click"}, {"x", 1}}), SchemaError);
    CHECK_THROWS_AS(env::action_from_json(Json{{"type", "teleport"}}), SchemaError);
    CHECK_THROWS_AS(env::action_from_json(Json{{"type", "finish"}, {"extra", 1}}), SchemaError);
    CHECK_THROWS_AS(env::action_from_json(Json::array()), SchemaError);
    CHECK_THROWS_AS(env::action_from_json(Json{{"type", "left_click"}, {"x", "1"}, {"y", 2}}), SchemaError);
}

TEST_CASE("describe is readable") {
    CHECK(env::describe(Action::left_click(10, 10)) == "left_click(10, 10)");
}

TEST_CASE("hit test prefers the smallest rectangle, then z, then id") {
    std::vector<env::HitCandidate> c{
        {{0, 0, 100, 100}, 0, "big"},
        {{10, 10, 20, 20}, 0, "small_b"},
        {{10, 10, 20, 20}, 0, "small_a"},
        {{10, 10, 20, 20}, 1, "small_z"},
    };
    CHECK(env::hit_test(c, {15, 15}) == std::optional<std::size_t>(3));
    c.pop_back();
    CHECK(env::hit_test(c, {15, 15}) == std::optional<std::size_t>(2));
    CHECK(env::hit_test(c, {50, 50}) == std::optional<std::size_t>(0));
    CHECK_FALSE(env::hit_test(c, {150, 50}));
}

TEST_CASE("observation digest is a function of content") {
    env::Observation a;
    a.scene_label = "hall";
    a.visible_elements.push_back({"door", "Door", "door", {1, 2, 3, 4}, std::nullopt});
    a.hud_values["score"] = 3;
    auto b = a;
    CHECK(env::digest(a) == env::digest(b));
    CHECK(env::observation_from_json(env::to_json(a)) == a);
    b.hud_values["score"] = 4;
    CHECK(env::digest(a) != env::digest(b));
}

TEST_CASE("event kinds and meaningful changes") {
    for (auto k : {env::EventKind::item_acquired, env::EventKind::lock_opened, env::EventKind::score_changed,
                   env::EventKind::milestone_reached}) {
        CHECK(env::is_meaningful(k));
        CHECK(env::event_kind_from_string(env::to_string(k)) == k);
    }
    CHECK_FALSE(env::is_meaningful(env::EventKind::no_effect));
    CHECK_FALSE(env::is_meaningful(env::EventKind::clue_observed));
    env::Event e{env::EventKind::clue_used, "gold key", 0.0, 7};
    CHECK(env::event_from_json(env::to_json(e)) == e);
}

TEST_CASE("milestone status helpers") {
    env::MilestoneStatus s;
    s.discrete = {{"a", true}, {"b", false}, {"c", true}};
    CHECK(s.achieved_count() == 2);
    CHECK(s.achieved_prefix() == 1);
    CHECK(s.continuous_raw() == 0.0);
    s.continuous.push_back({"m", "score", 40, 100, "max_attainable"});
    CHECK(s.continuous_raw() == 40);
}

TEST_CASE("canonical dump sorts keys and is stable") {
    Json a = Json::parse(R"({"b": 1, "a": [1, 2, {"d": 0, "c": 0.5}]})");
    Json b = Json::parse(R"({"a": [1, 2, {"c": 0.5, "d": 0}], "b": 1})");
    CHECK(util::canonical_dump(a) == util::canonical_dump(b));
    CHECK(util::canonical_dump(Json::parse(util::canonical_dump(a))) == util::canonical_dump(a));
}

TEST_CASE("fnv1a reference vectors") {
    CHECK(util::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(util::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(util::digest_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("csv parsing handles quotes") {
    const auto rows = util::parse_csv("game,n\n\"Dakota, the \"\"brave\"\"\",3\r\nx,4\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "Dakota, the \"brave\"");
    CHECK(rows[1][1] == "3");
    CHECK(rows[2][1] == "4");
    CHECK(util::csv_field("a,b") == "\"a,b\"");
    CHECK(util::csv_field("plain") == "plain");
}
