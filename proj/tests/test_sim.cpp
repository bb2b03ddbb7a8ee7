#include <doctest.h>

#include <set>

#include "coast/sim/generator.hpp"
#include "coast/sim/oracle.hpp"
#include "coast/sim/random_walk.hpp"
#include "coast/util/json.hpp"
#include "support.hpp"

using namespace coast;
using env::Action;
using env::EventKind;

namespace {

// One room, one door, optional key.
Json tiny_doc(bool with_key_rule) {
    Json doc = Json::parse(R"({
      "spec_version": 1, "game_id": "tiny", "title": "Tiny", "description": "A door.",
      "genre_tag": "room_escape", "judge_strategy": "counting", "step_budget": 10,
      "task_query": "Leave.", "start_scene": "room",
      "flags": [{"id": "open", "lock": true}],
      "items": [{"id": "key", "label": "Key"}],
      "scenes": [{"id": "room", "label": "Room", "elements": [
        {"id": "door", "label": "Door", "kind": "door", "rect": [100, 100, 100, 200]},
        {"id": "mat", "label": "Mat", "kind": "object", "rect": [300, 400, 100, 40]}]}],
      "rules": [
        {"id": "unlock", "on": {"element": "door", "item": "key"}, "effects": {"set": {"open": true}}}],
      "milestones": [{"id": "opened", "kind": "counting", "predicate": {"flag": "open"}, "evidence": true}],
      "success_condition": {"flag": "open"}
    })");
    if (with_key_rule) doc["rules"].push_back(Json::parse(R"({"id": "lift", "on": {"element": "mat"}, "effects": {"grant": ["key"]}})"));
    return doc;
}

bool has_event(const env::StepOutcome& o, EventKind k) { return o.has(k); }

}  // namespace

TEST_CASE("tea_room loads with its authored shape") {
    auto spec = test::fixture("tea_room");
    CHECK(spec->scenes.size() == 5);
    CHECK(spec->milestones.size() == 6);
    CHECK(spec->hash.size() == 16);
}

TEST_CASE("every bundled fixture loads and verifies") {
    for (const char* name : test::kFixtures) {
        CAPTURE(name);
        CHECK_NOTHROW(sim::load_spec_file(test::fixture_path(name), sim::LoadOptions{true}));
    }
}

TEST_CASE("spec loader rejects bad documents") {
    auto doc = tiny_doc(true);
    CHECK_NOTHROW(sim::load_spec(doc));
    auto missing = doc;
    missing.erase("success_condition");
    CHECK_THROWS_AS(sim::load_spec(missing), SchemaError);
    auto dangling = doc;
    dangling["rules"][0]["on"]["element"] = "window";
    CHECK_THROWS_AS(sim::load_spec(dangling), sim::DanglingReference);
    CHECK_THROWS_AS(sim::load_spec(tiny_doc(false), sim::LoadOptions{true}), sim::UnreachableSuccess);
    CHECK_THROWS_AS(sim::load_spec_file("/nonexistent/spec.json"), SchemaError);
}

TEST_CASE("tea_room initial observation") {
    auto state = sim::init(test::fixture("tea_room"));
    auto obs = sim::render(state);
    CHECK(obs.scene_label == "tea_room.entrance");
    CHECK(obs.visible_elements.size() == 4);
    CHECK(sim::render(state) == obs);
}

TEST_CASE("hidden drawer contents stay hidden until the drawer opens") {
    auto spec = test::fixture("tea_room");
    auto state = sim::init(spec);
    state.scene = spec->scene_index.at("kitchen");
    CHECK(state.flags[spec->flag_index.at("drawer_open")] == 0);
    CHECK(sim::render(state).find("brass_key") == nullptr);
    auto p = sim::locate(state, "drawer");
    REQUIRE(p);
    sim::step_in_place(state, Action::left_click(p->x, p->y));
    CHECK(sim::render(state).find("brass_key") != nullptr);
}

TEST_CASE("clicking empty space has no effect") {
    auto state = sim::init(test::fixture("tea_room"));
    const auto before = state;
    auto out = sim::step_in_place(state, Action::left_click(5, 590));
    REQUIRE(out.events.size() == 1);
    CHECK(out.events[0].kind == EventKind::no_effect);
    CHECK(state.scene == before.scene);
    CHECK(state.flags == before.flags);
    CHECK(state.inventory == before.inventory);
}

TEST_CASE("taking the gold key") {
    auto spec = test::fixture("tea_room");
    auto state = sim::init(spec);
    auto p = sim::locate(state, "gold_key");
    REQUIRE(p);
    auto out = sim::step_in_place(state, Action::left_click(p->x, p->y));
    CHECK(has_event(out, EventKind::item_acquired));
    CHECK(state.inventory[spec->item_index.at("gold_key")]);
    CHECK(std::find(out.observation.inventory_view.begin(), out.observation.inventory_view.end(), "Gold key") !=
          out.observation.inventory_view.end());
}

TEST_CASE("finish before success ends the episode without success") {
    auto state = sim::init(test::fixture("tea_room"));
    auto out = sim::step_in_place(state, Action::finish());
    CHECK(state.terminal);
    CHECK_FALSE(state.success);
    CHECK_FALSE(has_event(out, EventKind::terminal_success));
    CHECK_THROWS_AS(sim::step_in_place(state, Action::left_click(1, 1)), env::ActionOnTerminalState);
}

TEST_CASE("invalid actions are rejected") {
    auto state = sim::init(test::fixture("tea_room"));
    CHECK_THROWS_AS(sim::step_in_place(state, Action::left_click(900, 10)), env::InvalidAction);
    CHECK_THROWS_AS(sim::step_in_place(state, Action::scroll(env::ScrollDirection::down, 0)), env::InvalidAction);
}

TEST_CASE("milestones at the start and after the oracle walkthrough") {
    auto spec = test::fixture("tea_room");
    auto state = sim::init(spec);
    for (const auto& m : sim::milestone_vector(state).discrete) CHECK_FALSE(m.achieved);
    const auto plan = sim::oracle_solve(spec);
    CHECK(plan.steps.size() == 41);
    env::StepOutcome last;
    for (const auto& a : plan.actions()) last = sim::step_in_place(state, a);
    CHECK(last.has(EventKind::terminal_success));
    const auto status = sim::milestone_vector(state);
    CHECK(status.discrete.size() == 6);
    CHECK(status.achieved_count() == 6);
}

TEST_CASE("continuous reading passes the HUD counter through") {
    auto spec = test::fixture("court_sim");
    auto state = sim::init(spec);
    state.counters[spec->counter_index.at("population")] = 40;
    const auto status = sim::milestone_vector(state);
    REQUIRE_FALSE(status.continuous.empty());
    CHECK(status.continuous_raw() == 40);
}

TEST_CASE("init is deterministic and the seed is cosmetic") {
    auto spec = test::fixture("tea_room");
    CHECK(sim::init(spec, 0) == sim::init(spec, 0));
    CHECK(sim::init(spec) == sim::init(spec, 0));
    auto a = sim::init(spec, 1), b = sim::init(spec, 2);
    CHECK(sim::milestone_vector(a) == sim::milestone_vector(b));
    CHECK(sim::abstract_key(a) == sim::abstract_key(b));
    CHECK(sim::render(a).visible_elements != sim::render(b).visible_elements);
}

TEST_CASE("oracle plans are replayable on jittered layouts") {
    for (const char* name : test::kFixtures) {
        CAPTURE(name);
        auto spec = test::fixture(name);
        const auto plan = sim::oracle_solve(spec);
        auto state = sim::init(spec, 11);
        for (const auto& step : plan.steps) sim::step_in_place(state, sim::concretize(step, state));
        CHECK(state.success);
        CHECK(static_cast<int>(plan.steps.size()) <= spec->step_budget);
    }
}

TEST_CASE("oracle plan lengths are stable") {
    const std::map<std::string, std::size_t> expected{
        {"tea_room", 41}, {"grim_hidden", 18}, {"office_escape", 22}, {"pico_date", 12}, {"court_sim", 14}};
    for (const auto& [name, len] : expected) {
        CAPTURE(name);
        CHECK(sim::oracle_solve(test::fixture(name)).steps.size() == len);
    }
}

TEST_CASE("trivial and impossible goals") {
    auto doc = tiny_doc(false);
    doc["success_condition"] = true;
    const auto plan = sim::oracle_solve(sim::load_spec(doc));
    REQUIRE(plan.steps.size() == 1);
    CHECK(plan.steps[0].action == Action::finish());
    CHECK_THROWS_AS(sim::oracle_solve(sim::load_spec(tiny_doc(false))), sim::Unsolvable);
    CHECK(sim::oracle_solve(sim::load_spec(tiny_doc(true))).steps.size() == 3);
}

TEST_CASE("state snapshots round trip") {
    auto spec = test::fixture("office_escape");
    auto state = sim::init(spec, 4);
    const auto plan = sim::oracle_solve(spec);
    for (std::size_t i = 0; i < plan.steps.size() / 2; ++i) sim::step_in_place(state, sim::concretize(plan.steps[i], state));
    const auto restored = sim::state_from_json(spec, sim::state_to_json(state));
    CHECK(restored == state);
    CHECK(sim::render(restored) == sim::render(state));
    CHECK_THROWS_AS(sim::state_from_json(test::fixture("tea_room"), sim::state_to_json(state)), SchemaError);
}

TEST_CASE("resume clears terminal without touching progress") {
    auto spec = test::fixture("grim_hidden");
    auto state = sim::init(spec);
    sim::step_in_place(state, Action::finish());
    auto r = sim::resume(state);
    CHECK_FALSE(r.terminal);
    CHECK(sim::milestone_vector(r) == sim::milestone_vector(state));
}

TEST_CASE("random click success probability is tiny within the budget") {
    for (const char* name : test::kFixtures) {
        CAPTURE(name);
        auto spec = test::fixture(name);
        const double p = sim::random_click_success_probability(sim::init(spec), spec->step_budget);
        CHECK(p < 1e-6);
        CHECK(p >= 0.0);
    }
}

TEST_CASE("random click probability on a two-click game") {
    // Mat then door-with-key: the agent clicks one of {door, mat, key slot}.
    auto spec = sim::load_spec(tiny_doc(true));
    auto start = sim::init(spec);
    CHECK(sim::random_click_success_probability(start, 1) == 0.0);
    CHECK(sim::random_click_success_probability(start, 200) > 0.0);
}

TEST_CASE("generator certifies the head-clue gap") {
    sim::GeneratorParams p;
    p.seed = 7;
    const auto g = sim::generate(p);
    CHECK(g.head_gap >= 50);
    CHECK(sim::measure_head_gap(g.spec, g.head_clue) == g.head_gap);
    CHECK(g.spec->scenes.size() == 5);
    CHECK(g.document.dump(2) == sim::generate(p).document.dump(2));
    auto other = p;
    other.seed = 8;
    CHECK(sim::generate(other).document.dump(2) != g.document.dump(2));
}

TEST_CASE("generator chain of one meets a zero gap bound") {
    sim::GeneratorParams p;
    p.chain_length = 1;
    p.target_gap_lower_bound = 0;
    const auto g = sim::generate(p);
    CHECK(g.head_gap >= 0);
    CHECK(g.spec->hash.size() == 16);
}

TEST_CASE("generator covers every genre") {
    for (auto genre : {sim::Genre::mystery, sim::Genre::hidden_object, sim::Genre::room_escape, sim::Genre::visual_novel,
                       sim::Genre::simulation}) {
        sim::GeneratorParams p;
        p.genre = genre;
        p.seed = 2;
        const auto g = sim::generate(p);
        CHECK(g.spec->genre == genre);
        CHECK(g.head_gap >= 50);
    }
}

TEST_CASE("generator rejects bad parameters") {
    sim::GeneratorParams p;
    p.n_scenes = 0;
    CHECK_THROWS_AS(sim::generate(p), std::invalid_argument);
    p = {};
    p.chain_length = 0;
    CHECK_THROWS_AS(sim::generate(p), std::invalid_argument);
}
