#include "coast/scheduler/scheduler.hpp"

#include <array>
#include <chrono>
#include <deque>
#include <set>

namespace coast::scheduler {
namespace {

using policy::Role;

constexpr std::array<std::pair<Mode, std::string_view>, 4> kModes{{
    {Mode::coast, "coast"},
    {Mode::baseline, "baseline"},
    {Mode::seeker_only, "seeker_only"},
    {Mode::seeker_solver, "seeker_solver"},
}};

constexpr std::array<std::pair<Phase, std::string_view>, 5> kPhases{{
    {Phase::seek, "seek"},
    {Phase::map, "map"},
    {Phase::solve, "solve"},
    {Phase::baseline, "baseline"},
    {Phase::judge, "judge"},
}};

constexpr std::size_t kRecentWindow = 10;

std::string describe_events(const std::vector<env::Event>& events) {
    std::string out;
    for (const auto& e : events) {
        if (e.kind == env::EventKind::clue_observed || e.kind == env::EventKind::clue_used) continue;
        if (!out.empty()) out += ", ";
        out += std::string(env::to_string(e.kind));
        if (!e.subject.empty()) out += "(" + e.subject + ")";
    }
    return out.empty() ? "nothing happened" : out;
}

struct ActResult {
    policy::Parsed parsed = policy::Discarded{"not called"};
    std::vector<env::Event> events;
};

class Runner {
public:
    Runner(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config)
        : spec_(spec), policies_(policies), config_(config), state_(sim::init(spec, config.seed)) {
        config_.validate();
        brief_ = {spec->title, spec->description, spec->info, spec->completion};
        obs_ = sim::render(state_);
        ep_.trajectory.initial_events = sim::initial_clue_events(state_);
        ep_.trajectory.initial_digest = env::digest(obs_);
        if (config_.hints) injector_.emplace(*config_.hints);
        for (auto* p : {policies.seek, policies.map, policies.solve, policies.baseline}) {
            if (p && std::find(observers_.begin(), observers_.end(), p) == observers_.end()) observers_.push_back(p);
        }
        started_ = std::chrono::steady_clock::now();
    }

    bool running() const { return !state_.terminal && t_ < config_.max_steps; }

    ActResult act(Role role, Phase phase, const memory::GoalCandidate* goal = nullptr,
                  const std::vector<memory::GoalCandidate>& mapping = {}) {
        StepRecord rec;
        rec.index = static_cast<int>(ep_.trajectory.steps.size());
        rec.t = t_;
        rec.phase = phase;
        if (injector_) {
            if (auto h = injector_->maybe_inject(sim::milestone_vector(state_), t_)) {
                hints_.push_back(*h);
                rec.hint = *h;
            }
        }
        auto ctx = context();
        ctx.goal = goal;
        ctx.mapping = mapping;
        ActResult out;
        rec.policy_ref = call(policy_for(role), role, ctx, out.parsed);

        std::optional<env::Action> action = policy::proposed_action(out.parsed);
        if (auto* d = std::get_if<policy::Discarded>(&out.parsed)) rec.note = "discarded: " + d->reason;
        if (action) {
            if (auto why = env::validate_action(*action, spec_->viewport)) {
                rec.note = "invalid action: " + *why;
                action.reset();
            }
        }
        if (action) {
            auto outcome = sim::step_in_place(state_, *action);
            obs_ = std::move(outcome.observation);
            out.events = outcome.events;
            for (auto* p : observers_) p->observe(*action, outcome);
            rec.action = action;
            rec.events = out.events;
        }
        rec.obs_digest = env::digest(obs_);
        absorb(out.parsed, t_);
        remember(rec);
        ep_.trajectory.steps.push_back(std::move(rec));
        ++t_;
        return out;
    }

    std::vector<memory::GoalCandidate> map() {
        StepRecord rec;
        rec.index = static_cast<int>(ep_.trajectory.steps.size());
        rec.t = t_;
        rec.phase = Phase::map;
        auto ctx = context();
        policy::Parsed parsed = policy::Discarded{"not called"};
        rec.policy_ref = call(policies_.map, Role::map, ctx, parsed);
        std::vector<memory::GoalCandidate> candidates;
        if (auto* m = std::get_if<policy::MapperResponse>(&parsed)) {
            candidates = m->candidates;
        } else if (auto* d = std::get_if<policy::Discarded>(&parsed)) {
            rec.note = "discarded: " + d->reason;
        }
        goals_.assign(candidates, static_cast<std::size_t>(config_.goal_cap));
        rec.obs_digest = env::digest(obs_);
        ep_.trajectory.steps.push_back(std::move(rec));
        return goals_.pending();
    }

    void resolve(const std::string& id, const std::string& text) {
        if (goals_.is_resolved(id)) return;
        goals_.resolve(id);
        ep_.resolved_goals.push_back(id);
        resolved_text_.push_back(text);
    }

    bool goal_succeeded(const ActResult& r) const {
        auto* s = std::get_if<policy::SolverResponse>(&r.parsed);
        if (!s || !s->success) return false;
        if (config_.verification == Verification::self_report) return true;
        for (const auto& e : r.events) {
            if (env::is_meaningful(e.kind)) return true;
        }
        return false;
    }

    void dispatched(const std::string& id) { ep_.dispatched_goals.push_back(id); }
    const RunConfig& config() const { return config_; }

    Episode finish() {
        auto& traj = ep_.trajectory;
        traj.final_state = state_;
        traj.t = t_;
        ep_.memory = memory_;
        const auto verdict = judge::judge(state_);
        ep_.report = metrics::compute_report(traj, verdict, config_, *spec_);
        ep_.report.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        return std::move(ep_);
    }

private:
    policy::Policy* policy_for(Role role) const {
        switch (role) {
            case Role::seek: return policies_.seek;
            case Role::map: return policies_.map;
            case Role::solve: return policies_.solve;
            case Role::baseline: return policies_.baseline;
        }
        return nullptr;
    }

    policy::PolicyContext context() const {
        policy::PolicyContext ctx;
        ctx.brief = &brief_;
        ctx.task_query = config_.task_query;
        ctx.observation = &obs_;
        ctx.memory = &memory_;
        ctx.recent.assign(recent_.begin(), recent_.end());
        ctx.resolved = resolved_text_;
        ctx.hints = hints_;
        ctx.t = t_;
        if (config_.mode == Mode::baseline) {
            ctx.summary = std::to_string(t_) + " steps taken; " + std::to_string(meaningful_) +
                          " meaningful changes so far; current scene " + obs_.scene_label + ".";
        }
        return ctx;
    }

    int call(policy::Policy* p, Role role, const policy::PolicyContext& ctx, policy::Parsed& parsed) {
        TranscriptRecord tr;
        tr.ref = static_cast<int>(ep_.trajectory.transcripts.size());
        tr.role = role;
        tr.t = t_;
        policy::PolicyReply reply;
        if (!p) {
            reply.error = "NoPolicy";
        } else {
            tr.backend = p->backend();
            try {
                reply = p->respond(role, ctx);
            } catch (const Error& e) {
                reply.error = e.code();
                reply.transcript.push_back({0, "", "", e.what()});
            } catch (const std::exception& e) {
                reply.error = "PolicyError";
                reply.transcript.push_back({0, "", "", e.what()});
            }
        }
        parsed = reply.error.empty() ? policy::parse_respo(role, reply.raw) : policy::Discarded{reply.error};
        tr.entries = std::move(reply.transcript);
        tr.error = reply.error;
        ep_.trajectory.transcripts.push_back(std::move(tr));
        return ep_.trajectory.transcripts.back().ref;
    }

    void absorb(const policy::Parsed& parsed, int t) {
        if (auto* s = std::get_if<policy::SeekerResponse>(&parsed)) {
            auto clues = s->clues;
            for (auto& c : clues) c.first_observed_step = t;
            try {
                memory_.add_clues(clues);
            } catch (const SchemaError&) {
                // add_clues validates the whole batch first; a bad batch adds nothing.
            }
            for (auto e : s->episodic_memory) {
                e.step_index = t;
                memory_.add_episode(std::move(e));
            }
        } else if (auto* s = std::get_if<policy::SolverResponse>(&parsed)) {
            for (auto e : s->episodic_memory) {
                e.step_index = t;
                memory_.add_episode(std::move(e));
            }
        }
    }

    void remember(const StepRecord& rec) {
        std::string line = "t=" + std::to_string(rec.t) + " " + std::string(to_string(rec.phase)) + ": ";
        if (rec.action) {
            line += env::describe(*rec.action) + " -> " + describe_events(rec.events);
        } else {
            line += "no action (" + rec.note + ")";
        }
        for (const auto& e : rec.events) meaningful_ += env::is_meaningful(e.kind);
        recent_.push_back(std::move(line));
        if (recent_.size() > kRecentWindow) recent_.pop_front();
    }

    sim::SpecPtr spec_;
    PolicySet policies_;
    RunConfig config_;
    sim::EnvState state_;
    env::Observation obs_;
    policy::GameBrief brief_;
    memory::ClueMemory memory_;
    memory::GoalSet goals_;
    std::optional<HintInjector> injector_;
    std::vector<std::string> hints_;
    std::vector<std::string> resolved_text_;
    std::deque<std::string> recent_;
    std::vector<policy::Policy*> observers_;
    int meaningful_ = 0;
    int t_ = 0;
    Episode ep_;
    std::chrono::steady_clock::time_point started_;
};

void expect_mode(const RunConfig& config, std::initializer_list<Mode> modes, const char* who) {
    for (auto m : modes) {
        if (config.mode == m) return;
    }
    throw ConfigError(std::string(who) + " does not run mode '" + std::string(to_string(config.mode)) + "'");
}

void seek_block(Runner& r) {
    for (int i = 0; i < r.config().n_seek && r.running(); ++i) r.act(Role::seek, Phase::seek);
}

}  // namespace

std::string_view to_string(Mode mode) {
    for (const auto& [m, n] : kModes) {
        if (m == mode) return n;
    }
    return "coast";
}

std::optional<Mode> mode_from_string(std::string_view name) {
    for (const auto& [m, n] : kModes) {
        if (n == name) return m;
    }
    return std::nullopt;
}

std::string_view to_string(Phase phase) {
    for (const auto& [p, n] : kPhases) {
        if (p == phase) return n;
    }
    return "seek";
}

std::optional<Phase> phase_from_string(std::string_view name) {
    for (const auto& [p, n] : kPhases) {
        if (n == name) return p;
    }
    return std::nullopt;
}

int Trajectory::count(Phase phase) const {
    int n = 0;
    for (const auto& s : steps) n += s.phase == phase;
    return n;
}

std::vector<env::Event> Trajectory::all_events() const {
    std::vector<env::Event> out = initial_events;
    for (const auto& s : steps) out.insert(out.end(), s.events.begin(), s.events.end());
    return out;
}

// --- hints ---------------------------------------------------------------

Json to_json(const HintSchedule& s) {
    return {{"trigger", s.trigger == HintSchedule::Trigger::stall ? "stall" : "periodic"},
            {"steps", s.steps},
            {"hints", s.hints}};
}

HintSchedule hint_schedule_from_json(const Json& value) {
    util::JsonReader r(value, "$");
    r.only({"trigger", "steps", "hints"});
    HintSchedule s;
    const auto trigger = r.at("trigger").str();
    if (trigger == "stall") {
        s.trigger = HintSchedule::Trigger::stall;
    } else if (trigger == "periodic") {
        s.trigger = HintSchedule::Trigger::periodic;
    } else {
        r.at("trigger").fail("expected 'stall' or 'periodic'");
    }
    s.steps = r.at("steps").int32();
    if (s.steps <= 0) r.at("steps").fail("must be positive");
    s.hints = r.at("hints").strings();
    return s;
}

HintInjector::HintInjector(HintSchedule schedule) : schedule_(std::move(schedule)) {
    if (schedule_.steps <= 0) throw ConfigError("hint threshold/interval must be positive");
}

std::optional<std::string> HintInjector::maybe_inject(const env::MilestoneStatus& status, int t) {
    if (t <= last_t_) return std::nullopt;
    last_t_ = t;
    if (!last_status_ || !(*last_status_ == status)) {
        if (last_status_) last_change_ = t;
        last_status_ = status;
    }
    if (next_ >= schedule_.hints.size()) return std::nullopt;
    bool fire = false;
    if (schedule_.trigger == HintSchedule::Trigger::stall) {
        fire = t - last_change_ >= schedule_.steps;
        if (fire) last_change_ = t;  // the stall clock restarts after a hint
    } else {
        fire = t > 0 && t % schedule_.steps == 0;
    }
    if (!fire) return std::nullopt;
    return schedule_.hints[next_++];
}

std::optional<std::string> maybe_inject_hint(const HintSchedule& schedule,
                                             const std::vector<env::MilestoneStatus>& progress, int t) {
    if (t < 0 || static_cast<std::size_t>(t) >= progress.size()) {
        throw std::out_of_range("progress history does not reach t=" + std::to_string(t));
    }
    HintInjector inj(schedule);
    std::optional<std::string> out;
    for (int i = 0; i <= t; ++i) out = inj.maybe_inject(progress[i], i);
    return out;
}

// --- config --------------------------------------------------------------

RunConfig RunConfig::defaults_for(const sim::GameSpec& spec) {
    RunConfig c;
    c.task_query = spec.task_query;
    if (spec.genre == sim::Genre::visual_novel || spec.genre == sim::Genre::simulation) {
        c.n_seek = 5;
        c.n_solve = 2;
    }
    return c;
}

void RunConfig::validate() const {
    if (max_steps < 0) throw ConfigError("max_steps must be non-negative");
    if (n_seek < 1) throw ConfigError("n_seek must be positive");
    if (n_solve < 1) throw ConfigError("n_solve must be positive");
    if (goal_cap < 1) throw ConfigError("goal cap K must be positive");
    if (solver_actions_per_goal < 1) throw ConfigError("solver_actions_per_goal must be positive");
    if (max_steps > 0 && n_seek > max_steps) {
        throw ConfigError("n_seek (" + std::to_string(n_seek) + ") exceeds max_steps (" + std::to_string(max_steps) + ")");
    }
    if (hints && hints->steps <= 0) throw ConfigError("hint threshold/interval must be positive");
}

Json to_json(const RunConfig& c) {
    Json j{{"task_query", c.task_query},
           {"max_steps", c.max_steps},
           {"n_seek", c.n_seek},
           {"n_solve", c.n_solve},
           {"goal_cap", c.goal_cap},
           {"mode", std::string(to_string(c.mode))},
           {"solver_actions_per_goal", c.solver_actions_per_goal},
           {"success_verification", c.verification == Verification::strict ? "strict" : "self_report"},
           {"seed", c.seed}};
    j["hints"] = c.hints ? to_json(*c.hints) : Json(nullptr);
    return j;
}

RunConfig run_config_from_json(const Json& value) {
    util::JsonReader r(value, "$");
    r.only({"task_query", "max_steps", "n_seek", "n_solve", "goal_cap", "mode", "solver_actions_per_goal",
            "success_verification", "hints", "seed"});
    RunConfig c;
    c.task_query = r.at("task_query").str();
    c.max_steps = r.at("max_steps").int32();
    c.n_seek = r.at("n_seek").int32();
    c.n_solve = r.at("n_solve").int32();
    c.goal_cap = r.at("goal_cap").int32();
    const auto mode = r.at("mode").str();
    auto m = mode_from_string(mode);
    if (!m) r.at("mode").fail("unknown mode '" + mode + "'");
    c.mode = *m;
    c.solver_actions_per_goal = r.at("solver_actions_per_goal").int32();
    const auto v = r.at("success_verification").str();
    if (v == "strict") {
        c.verification = Verification::strict;
    } else if (v != "self_report") {
        r.at("success_verification").fail("expected 'self_report' or 'strict'");
    }
    if (auto h = r.maybe("hints")) c.hints = hint_schedule_from_json(h->json());
    const auto seed = r.at("seed").integer();
    if (seed < 0) r.at("seed").fail("must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    return c;
}

// --- runners -------------------------------------------------------------

Episode run_coast(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config) {
    expect_mode(config, {Mode::coast}, "run_coast");
    Runner r(spec, policies, config);
    while (r.running()) {
        seek_block(r);
        if (!r.running()) break;
        const auto goals = r.map();
        if (goals.empty()) continue;  // nothing to solve: back to seeking
        int attempts = 0;
        for (const auto& g : goals) {
            if (!r.running() || attempts >= config.n_solve) break;
            r.dispatched(g.goal_id);
            for (int j = 0; j < config.solver_actions_per_goal && r.running(); ++j) {
                if (r.goal_succeeded(r.act(Role::solve, Phase::solve, &g, goals))) {
                    r.resolve(g.goal_id, g.clue.name + ": " + g.expected_action);
                    break;
                }
            }
            ++attempts;  // failed attempts count against n_solve too
        }
    }
    return r.finish();
}

Episode run_baseline(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config) {
    expect_mode(config, {Mode::baseline}, "run_baseline");
    Runner r(spec, policies, config);
    while (r.running()) r.act(Role::baseline, Phase::baseline);
    return r.finish();
}

Episode run_ablation(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config) {
    expect_mode(config, {Mode::seeker_only, Mode::seeker_solver}, "run_ablation");
    Runner r(spec, policies, config);
    if (config.mode == Mode::seeker_only) {
        while (r.running()) r.act(Role::seek, Phase::seek);
        return r.finish();
    }
    while (r.running()) {
        seek_block(r);
        for (int i = 0; i < config.n_solve && r.running(); ++i) {
            auto res = r.act(Role::solve, Phase::solve);
            if (!r.goal_succeeded(res)) continue;
            for (const auto& m : std::get<policy::SolverResponse>(res.parsed).mapping_result) {
                r.resolve(memory::goal_id(m.clue, m.goal), m.clue + ": " + m.goal);
            }
        }
    }
    return r.finish();
}

Episode run_episode(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config) {
    switch (config.mode) {
        case Mode::coast: return run_coast(spec, policies, config);
        case Mode::baseline: return run_baseline(spec, policies, config);
        case Mode::seeker_only:
        case Mode::seeker_solver: return run_ablation(spec, policies, config);
    }
    throw ConfigError("unknown mode");
}

}  // namespace coast::scheduler
