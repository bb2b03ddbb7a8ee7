#include <doctest.h>

#include <sstream>

#include "coast/policy/respo.hpp"
#include "coast/scheduler/scheduler.hpp"
#include "coast/sim/oracle.hpp"
#include "coast/util/json.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace coast;
using namespace coast::scheduler;
using policy::Role;
using test::kIdle;
using test::Synthetic;

namespace {

RunConfig config(Mode mode, int max_steps, int n_seek = 15, int n_solve = 5) {
    RunConfig c;
    c.mode = mode;
    c.max_steps = max_steps;
    c.n_seek = n_seek;
    c.n_solve = n_solve;
    return c;
}

std::vector<Phase> acting_phases(const Trajectory& t) {
    std::vector<Phase> out;
    for (const auto& s : t.steps) {
        if (s.phase != Phase::map) out.push_back(s.phase);
    }
    return out;
}

Episode oracle_episode(const std::string& name, Mode mode, std::optional<HintSchedule> hints = std::nullopt,
                       policy::OracleOptions opts = {}, std::uint64_t seed = 0) {
    auto spec = test::fixture(name);
    policy::OraclePolicy p(spec, seed, opts);
    auto cfg = RunConfig::defaults_for(*spec);
    cfg.mode = mode;
    cfg.max_steps = spec->step_budget;
    cfg.seed = seed;
    cfg.hints = hints;
    return run_episode(spec, PolicySet::all(p), cfg);
}

std::string log_of(const sim::GameSpec& spec, const RunConfig& cfg, const Episode& ep) {
    std::ostringstream out;
    write_log(out, spec, cfg, ep);
    return out.str();
}

}  // namespace

TEST_CASE("fresh mapper: fifty cycles of fifteen seeks and five solves") {
    auto spec = test::fixture("tea_room");
    Synthetic p(5);
    auto cfg = config(Mode::coast, 1000);
    const auto ep = run_coast(spec, PolicySet::all(p), cfg);
    CHECK(ep.trajectory.t == 1000);
    const auto phases = acting_phases(ep.trajectory);
    REQUIRE(phases.size() == 1000);
    int bad = 0;
    for (std::size_t i = 0; i < phases.size(); ++i) bad += phases[i] != (i % 20 < 15 ? Phase::seek : Phase::solve);
    CHECK(bad == 0);
    CHECK(ep.trajectory.count(Phase::map) == 50);
    CHECK(ep.dispatched_goals.size() == 250);
}

TEST_CASE("empty mapper: every step is a seek") {
    auto spec = test::fixture("tea_room");
    Synthetic p(0);
    const auto ep = run_coast(spec, PolicySet::all(p), config(Mode::coast, 20, 5, 5));
    CHECK(ep.trajectory.t == 20);
    CHECK(ep.trajectory.count(Phase::seek) == 20);
    CHECK(ep.trajectory.count(Phase::solve) == 0);
    CHECK(ep.trajectory.count(Phase::map) == 3);
}

TEST_CASE("solved goals are not dispatched again") {
    auto spec = test::fixture("tea_room");
    // Same five goals every time; the solver claims success.
    class Repeat : public Synthetic {
    public:
        Repeat() : Synthetic(0, true) {}
        policy::PolicyReply respond(Role role, const policy::PolicyContext& ctx) override {
            if (role != Role::map) return Synthetic::respond(role, ctx);
            policy::MapperResponse m;
            for (int i = 0; i < 5; ++i) {
                memory::Clue c;
                c.name = "fixed " + std::to_string(i);
                c.location = "x";
                m.candidates.push_back(memory::make_goal(c, "", "inspect"));
            }
            return {policy::render_respo(m), {}, ""};
        }
    } p;
    const auto ep = run_coast(spec, PolicySet::all(p), config(Mode::coast, 100));
    CHECK(ep.dispatched_goals.size() == 5);
    CHECK(ep.resolved_goals.size() == 5);
    CHECK(ep.trajectory.count(Phase::solve) == 5);
}

TEST_CASE("strict verification needs a meaningful event") {
    auto spec = test::fixture("tea_room");
    Synthetic p(5, true);
    auto cfg = config(Mode::coast, 40);
    cfg.verification = Verification::strict;
    const auto ep = run_coast(spec, PolicySet::all(p), cfg);
    CHECK(ep.resolved_goals.empty());
    cfg.verification = Verification::self_report;
    Synthetic q(5, true);
    CHECK(run_coast(spec, PolicySet::all(q), cfg).resolved_goals.size() == 10);
}

TEST_CASE("oracle COAST solves grim_hidden with every milestone") {
    const auto ep = oracle_episode("grim_hidden", Mode::coast);
    CHECK(ep.trajectory.success());
    CHECK(ep.trajectory.t < test::fixture("grim_hidden")->step_budget);
    CHECK(ep.report.mcr == 1.0);
    CHECK(ep.report.verdict.achieved == 12);
}

TEST_CASE("oracle COAST solves every fixture") {
    for (const char* name : test::kFixtures) {
        CAPTURE(name);
        const auto ep = oracle_episode(name, Mode::coast, std::nullopt, {}, 2);
        CHECK(ep.report.success);
        CHECK(ep.report.mcr == 1.0);
        CHECK(ep.trajectory.count(Phase::map) > 0);
        CHECK(!ep.memory.empty());
    }
}

TEST_CASE("random baseline runs to budget without success") {
    auto spec = test::fixture("tea_room");
    policy::RandomPolicy p(3);
    auto cfg = config(Mode::baseline, 50);
    cfg.seed = 3;
    const auto ep = run_baseline(spec, PolicySet::all(p), cfg);
    CHECK(ep.trajectory.t == 50);
    CHECK_FALSE(ep.report.success);
    CHECK(ep.report.steps == 50);
}

TEST_CASE("oracle baseline succeeds at plan length") {
    const auto ep = oracle_episode("tea_room", Mode::baseline);
    CHECK(ep.report.success);
    CHECK(ep.trajectory.t == static_cast<int>(sim::oracle_solve(test::fixture("tea_room")).steps.size()));
    CHECK(ep.trajectory.count(Phase::baseline) == ep.trajectory.t);
}

TEST_CASE("zero budget gives an empty episode") {
    auto spec = test::fixture("tea_room");
    Synthetic p(5);
    for (auto mode : {Mode::coast, Mode::baseline, Mode::seeker_only, Mode::seeker_solver}) {
        const auto ep = run_episode(spec, PolicySet::all(p), config(mode, 0));
        CHECK(ep.trajectory.steps.empty());
        CHECK(ep.trajectory.t == 0);
        CHECK_FALSE(ep.report.success);
    }
}

TEST_CASE("seeker_only only seeks") {
    auto spec = test::fixture("office_escape");
    policy::OraclePolicy p(spec, 0);
    const auto ep = run_ablation(spec, PolicySet::all(p), config(Mode::seeker_only, 30));
    CHECK(ep.trajectory.count(Phase::seek) == ep.trajectory.t);
    CHECK(ep.trajectory.steps.size() == static_cast<std::size_t>(ep.trajectory.t));
    Synthetic s(5);
    const auto idle = run_ablation(spec, PolicySet::all(s), config(Mode::seeker_only, 30));
    CHECK(idle.trajectory.t == 30);
    CHECK(idle.trajectory.count(Phase::seek) == 30);
}

TEST_CASE("seeker_solver bypasses the mapper and still solves grim_hidden") {
    const auto ep = oracle_episode("grim_hidden", Mode::seeker_solver);
    CHECK(ep.report.success);
    CHECK(ep.trajectory.count(Phase::map) == 0);
    CHECK(ep.trajectory.count(Phase::solve) > 0);
    CHECK_FALSE(ep.resolved_goals.empty());
}

TEST_CASE("runners refuse the wrong mode") {
    auto spec = test::fixture("tea_room");
    Synthetic p(0);
    CHECK_THROWS_AS(run_coast(spec, PolicySet::all(p), config(Mode::baseline, 5, 5)), ConfigError);
    CHECK_THROWS_AS(run_baseline(spec, PolicySet::all(p), config(Mode::coast, 5, 5)), ConfigError);
    CHECK_THROWS_AS(run_ablation(spec, PolicySet::all(p), config(Mode::coast, 5, 5)), ConfigError);
}

TEST_CASE("config validation") {
    auto c = config(Mode::coast, 10);
    CHECK_THROWS_AS(c.validate(), ConfigError);  // n_seek 15 > T 10
    c.n_seek = 10;
    CHECK_NOTHROW(c.validate());
    c.max_steps = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = config(Mode::coast, 100);
    c.goal_cap = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = config(Mode::coast, 100);
    c.hints = HintSchedule{{"a"}, HintSchedule::Trigger::periodic, 25};
    c.seed = 9;
    CHECK(to_json(run_config_from_json(to_json(c))) == to_json(c));
    auto defaults = RunConfig::defaults_for(*test::fixture("pico_date"));
    CHECK(defaults.n_seek == 5);
    CHECK(defaults.n_solve == 2);
    CHECK(RunConfig::defaults_for(*test::fixture("tea_room")).n_seek == 15);
}

TEST_CASE("stall hints fire after the threshold without progress") {
    HintSchedule s{{"h0", "h1"}, HintSchedule::Trigger::stall, 100};
    env::MilestoneStatus flat;
    flat.discrete = {{"m", false}};
    std::vector<env::MilestoneStatus> history(251, flat);
    for (int t = 0; t < 100; ++t) CHECK_FALSE(maybe_inject_hint(s, history, t));
    CHECK(maybe_inject_hint(s, history, 100) == std::optional<std::string>("h0"));
    CHECK(maybe_inject_hint(s, history, 200) == std::optional<std::string>("h1"));
    CHECK_FALSE(maybe_inject_hint(s, history, 250));
}

TEST_CASE("progress resets the stall clock") {
    HintSchedule s{{"h0"}, HintSchedule::Trigger::stall, 100};
    env::MilestoneStatus before, after;
    before.discrete = {{"m", false}};
    after.discrete = {{"m", true}};
    std::vector<env::MilestoneStatus> history(200, before);
    for (int t = 60; t < 200; ++t) history[t] = after;
    CHECK_FALSE(maybe_inject_hint(s, history, 100));
    CHECK(maybe_inject_hint(s, history, 160) == std::optional<std::string>("h0"));
}

TEST_CASE("periodic hints") {
    HintSchedule s{{"a", "b", "c", "d"}, HintSchedule::Trigger::periodic, 50};
    HintInjector inj(s);
    env::MilestoneStatus st;
    std::vector<int> fired;
    for (int t = 0; t <= 160; ++t) {
        if (inj.maybe_inject(st, t)) fired.push_back(t);
    }
    CHECK(fired == std::vector<int>{50, 100, 150});
    CHECK(inj.fired() == 3);
}

TEST_CASE("hint schedule json") {
    const auto s = hint_schedule_from_json(Json::parse(R"({"trigger": "periodic", "steps": 50, "hints": ["x"]})"));
    CHECK(s.trigger == HintSchedule::Trigger::periodic);
    CHECK(to_json(hint_schedule_from_json(to_json(s))) == to_json(s));
    CHECK_THROWS_AS(hint_schedule_from_json(Json::parse(R"({"trigger": "often", "steps": 5, "hints": []})")), SchemaError);
    CHECK_THROWS_AS(hint_schedule_from_json(Json::parse(R"({"trigger": "stall", "steps": 0, "hints": []})")), SchemaError);
}

TEST_CASE("hinted oracle beats the unhinted budget on the stall fixture") {
    auto spec = sim::load_spec_file(std::string(COAST_FIXTURE_DIR) + "/extra/hint_stall.json");
    auto run = [&](std::optional<HintSchedule> hints) {
        policy::OraclePolicy p(spec, 0, policy::OracleOptions{true});
        RunConfig cfg;
        cfg.mode = Mode::baseline;
        cfg.max_steps = spec->step_budget;
        cfg.hints = hints;
        return run_baseline(spec, PolicySet::all(p), cfg);
    };
    const auto unhinted = run(std::nullopt);
    CHECK_FALSE(unhinted.report.success);
    CHECK(unhinted.trajectory.t == spec->step_budget);
    const auto hinted = run(HintSchedule{spec->hints, HintSchedule::Trigger::stall, 100});
    CHECK(hinted.report.success);
    CHECK(hinted.trajectory.t < spec->step_budget);
    std::vector<int> hint_t;
    for (const auto& s : hinted.trajectory.steps) {
        if (s.hint) hint_t.push_back(s.t);
    }
    REQUIRE_FALSE(hint_t.empty());
    CHECK(hint_t[0] == 100);
}

TEST_CASE("logs replay clean") {
    for (const char* name : test::kFixtures) {
        CAPTURE(name);
        auto spec = test::fixture(name);
        for (auto mode : {Mode::coast, Mode::baseline}) {
            policy::OraclePolicy p(spec, 5);
            auto cfg = RunConfig::defaults_for(*spec);
            cfg.mode = mode;
            cfg.max_steps = spec->step_budget;
            cfg.seed = 5;
            const auto ep = run_episode(spec, PolicySet::all(p), cfg);
            std::istringstream in(log_of(*spec, cfg, ep));
            const auto r = replay_log(spec, in);
            CHECK(r.clean);
            CHECK(r.message == "CLEAN");
        }
    }
}

TEST_CASE("a tampered action diverges at that step") {
    auto spec = test::fixture("office_escape");
    policy::OraclePolicy p(spec, 0);
    auto cfg = RunConfig::defaults_for(*spec);
    cfg.mode = Mode::baseline;
    cfg.max_steps = spec->step_budget;
    const auto ep = run_episode(spec, PolicySet::all(p), cfg);
    std::istringstream in(log_of(*spec, cfg, ep));
    std::string out, line;
    int target = -1;
    while (std::getline(in, line)) {
        Json j = Json::parse(line);
        if (j["type"] == "step" && j["index"] == 4) {
            target = j["index"];
            j["action"] = env::to_json(env::Action::left_click(1, 1));
            line = util::canonical_dump(j);
        }
        out += line + "\n";
    }
    REQUIRE(target == 4);
    std::istringstream tampered(out);
    const auto r = replay_log(spec, tampered);
    CHECK_FALSE(r.clean);
    CHECK(r.divergence_index == std::optional<int>(4));
}

TEST_CASE("replay against another spec is a hash mismatch") {
    auto spec = test::fixture("pico_date");
    policy::OraclePolicy p(spec, 0);
    auto cfg = RunConfig::defaults_for(*spec);
    cfg.max_steps = spec->step_budget;
    const auto ep = run_episode(spec, PolicySet::all(p), cfg);
    std::istringstream in(log_of(*spec, cfg, ep));
    CHECK_THROWS_AS(replay_log(test::fixture("court_sim"), in), SpecHashMismatch);
}

TEST_CASE("a log reconstructs the episode from its header alone") {
    auto spec = test::fixture("court_sim");
    policy::OraclePolicy p(spec, 8);
    auto cfg = RunConfig::defaults_for(*spec);
    cfg.max_steps = spec->step_budget;
    cfg.seed = 8;
    const auto ep = run_episode(spec, PolicySet::all(p), cfg);
    std::istringstream in(log_of(*spec, cfg, ep));
    const auto h = read_log_header(in);
    CHECK(h.spec_hash == spec->hash);
    CHECK(to_json(h.config) == to_json(cfg));
    policy::OraclePolicy again(spec, 8);
    const auto ep2 = run_episode(spec, PolicySet::all(again), h.config);
    CHECK(log_of(*spec, h.config, ep2) == log_of(*spec, cfg, ep));
}

TEST_CASE("discarded replies still use a step") {
    auto spec = test::fixture("tea_room");
    class Garbage : public policy::Policy {
    public:
        policy::PolicyReply respond(Role, const policy::PolicyContext&) override { return {"not a reply", {}, ""}; }
        std::string backend() const override { return "garbage"; }
    } g;
    const auto ep = run_episode(spec, PolicySet::all(g), config(Mode::baseline, 7, 7));
    CHECK(ep.trajectory.t == 7);
    for (const auto& s : ep.trajectory.steps) {
        CHECK_FALSE(s.action);
        CHECK(s.note.rfind("discarded", 0) == 0);
    }
}
