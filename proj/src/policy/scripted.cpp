#include <map>
#include <mutex>

#include "coast/policy/policy.hpp"
#include "coast/util/text.hpp"

namespace coast::policy {
namespace {

env::Action idle_action() { return env::Action::scroll(env::ScrollDirection::down, 1); }

std::string place_of(const PolicyContext& ctx) {
    return ctx.observation ? ctx.observation->scene_label : std::string("unknown");
}

std::string last_step(const PolicyContext& ctx) {
    return ctx.recent.empty() ? std::string("Looked around.") : ctx.recent.back();
}

}  // namespace

std::shared_ptr<const sim::Plan> cached_plan(const sim::SpecPtr& spec) {
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const sim::Plan>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[spec->hash];
    if (!slot) slot = std::make_shared<const sim::Plan>(sim::oracle_solve(spec));
    return slot;
}

OraclePolicy::OraclePolicy(sim::SpecPtr spec, std::uint64_t seed, OracleOptions options)
    : spec_(std::move(spec)), options_(options), shadow_(sim::init(spec_, seed)), plan_(cached_plan(spec_)) {}

env::Action OraclePolicy::next_action(const PolicyContext& context) {
    expected_.reset();
    if (options_.hint_gated &&
        sim::milestone_vector(shadow_).achieved_count() >= static_cast<int>(context.hints.size())) {
        return idle_action();
    }
    if (cursor_ >= plan_->steps.size()) throw PlanExhausted("oracle plan consumed after " + std::to_string(cursor_) + " actions");
    expected_ = sim::concretize(plan_->steps[cursor_], shadow_);
    return *expected_;
}

void OraclePolicy::observe(const env::Action& action, const env::StepOutcome&) {
    if (shadow_.terminal) return;
    const bool on_plan = expected_ && *expected_ == action;
    const auto before = sim::abstract_key(shadow_);
    try {
        sim::step_in_place(shadow_, action, false);
    } catch (const Error&) {
        return;
    }
    expected_.reset();
    if (on_plan) {
        ++cursor_;
    } else if (!shadow_.terminal && sim::abstract_key(shadow_) != before) {
        // Someone else moved the game; plan again from here.
        plan_ = std::make_shared<const sim::Plan>(sim::oracle_solve_from(shadow_));
        cursor_ = 0;
    }
}

std::vector<std::string> OraclePolicy::clues_used_by(const env::Action& action) const {
    std::vector<std::string> used;
    if (shadow_.terminal) return used;
    auto probe = shadow_;
    try {
        auto out = sim::step_in_place(probe, action, false);
        for (const auto& e : out.events) {
            if (e.kind == env::EventKind::clue_used) used.push_back(e.subject);
        }
    } catch (const Error&) {
    }
    return used;
}

std::string OraclePolicy::location_of(int element) const {
    const auto& el = spec_->elements[element];
    const std::string where = el.scene < 0 ? "the game overlay" : spec_->scenes[el.scene].label;
    return el.label + " in " + where;
}

std::string OraclePolicy::seek(const PolicyContext& ctx) {
    SeekerResponse r;
    if (ctx.observation) {
        for (const auto& ve : ctx.observation->visible_elements) {
            auto it = spec_->element_index.find(ve.id);
            if (it == spec_->element_index.end()) continue;
            const int c = spec_->clue_by_element[it->second];
            if (c < 0) continue;
            const auto& a = spec_->clues[c];
            r.clues.push_back({a.name, a.description, location_of(it->second), a.type, a.interactable,
                               a.usage_hint, ctx.t});
        }
    }
    r.episodic_memory.push_back({last_step(ctx), place_of(ctx), ctx.t});
    r.proposed_action = next_action(ctx);
    return render_respo(r);
}

std::string OraclePolicy::map(const PolicyContext& ctx) {
    MapperResponse r;
    if (!ctx.memory) return render_respo(r);
    std::map<std::string, int> by_name;
    for (std::size_t i = 0; i < spec_->clues.size(); ++i) by_name.emplace(util::normalize_key(spec_->clues[i].name), static_cast<int>(i));
    for (const auto& clue : ctx.memory->clues()) {
        if (r.candidates.size() >= kMapperSelfCap) break;
        auto it = by_name.find(util::normalize_key(clue.name));
        if (it == by_name.end()) continue;
        const auto& a = spec_->clues[it->second];
        if (a.subtask.empty() || shadow_.clues_used[it->second]) continue;
        std::string related = "Saw " + clue.name + " at " + clue.location;
        for (const auto& e : ctx.memory->episodes()) {
            if (e.step_index <= clue.first_observed_step) related = e.action_summary + " (" + e.place + ")";
        }
        r.candidates.push_back(memory::make_goal(clue, related, a.subtask));
    }
    return render_respo(r);
}

std::string OraclePolicy::solve(const PolicyContext& ctx) {
    SolverResponse r;
    r.proposed_action = next_action(ctx);
    const auto used = clues_used_by(r.proposed_action);
    if (ctx.goal) {
        const auto want = util::normalize_key(ctx.goal->clue.name);
        for (const auto& u : used) {
            if (util::normalize_key(u) == want) {
                r.success = true;
                r.mapping_result.push_back({ctx.goal->clue.name, ctx.goal->related_memory, ctx.goal->expected_action,
                                            "the authored subtask for this clue"});
                break;
            }
        }
    } else {
        for (const auto& u : used) r.mapping_result.push_back({u, "", "use " + u, "the action acts on this clue"});
        r.success = !used.empty();
    }
    r.episodic_memory.push_back({env::describe(r.proposed_action), place_of(ctx), ctx.t});
    return render_respo(r);
}

PolicyReply OraclePolicy::respond(Role role, const PolicyContext& context) {
    PolicyReply reply;
    switch (role) {
        case Role::seek: reply.raw = seek(context); break;
        case Role::map: reply.raw = map(context); break;
        case Role::solve: reply.raw = solve(context); break;
        case Role::baseline: reply.raw = render_respo(BaselineResponse{next_action(context), ""}); break;
    }
    reply.transcript.push_back({0, "", reply.raw, ""});
    return reply;
}

PolicyReply RandomPolicy::respond(Role role, const PolicyContext& context) {
    env::Action action = idle_action();
    if (context.observation && !context.observation->visible_elements.empty()) {
        const auto& els = context.observation->visible_elements;
        std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
        const auto c = els[pick(rng_)].rect.center();
        action = env::Action::left_click(c.x, c.y);
    }
    PolicyReply reply;
    const std::string place = place_of(context);
    switch (role) {
        case Role::seek:
            reply.raw = render_respo(SeekerResponse{{}, {{last_step(context), place, context.t}}, action});
            break;
        case Role::map: reply.raw = render_respo(MapperResponse{}); break;
        case Role::solve:
            reply.raw = render_respo(SolverResponse{{{env::describe(action), place, context.t}}, {}, false, action});
            break;
        case Role::baseline: reply.raw = render_respo(BaselineResponse{action, ""}); break;
    }
    reply.transcript.push_back({0, "", reply.raw, ""});
    return reply;
}

}  // namespace coast::policy
