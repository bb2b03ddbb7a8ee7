#include "coast/sim/oracle.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace coast::sim {

std::vector<env::Action> Plan::actions() const {
    std::vector<env::Action> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.action);
    return out;
}

namespace {

const std::string& element_id(const GameSpec& spec, int element) {
    return spec.elements[static_cast<std::size_t>(element)].id;
}

std::optional<env::Action> keyboard_action(const RuleDef& rule) {
    using K = env::ActionKind;
    switch (rule.on.action) {
        case K::type_text: return env::Action::type_text(rule.on.text);
        case K::key_press: return env::Action::key_press(rule.on.text);
        case K::hold_key:
            return env::Action::hold_key(rule.on.text, rule.on.min_duration > 0 ? rule.on.min_duration : 1.0);
        case K::scroll:
            return env::Action::scroll(rule.on.direction.value_or(env::ScrollDirection::down), 1);
        default: return std::nullopt;
    }
}

}  // namespace

std::vector<PlanStep> candidate_actions(const EnvState& s) {
    const auto& spec = *s.spec;
    const auto refs = visible_refs(s);
    // Hit points per element, resolved once per state.
    std::vector<std::optional<env::Point>> points(spec.elements.size());
    for (const auto& ref : refs) {
        if (!ref.slot) points[static_cast<std::size_t>(ref.index)] = locate(refs, ref.id);
    }
    std::vector<PlanStep> out;
    auto push = [&](PlanStep step) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const PlanStep& o) { return o.action == step.action; });
        if (!seen) out.push_back(std::move(step));
    };

    for (const auto& rule : spec.rules) {
        const auto& on = rule.on;
        if (on.element < 0) {
            if (auto a = keyboard_action(rule)) push({*a, "", ""});
            continue;
        }
        const auto& id = element_id(spec, on.element);
        const auto& at = points[static_cast<std::size_t>(on.element)];
        if (!at) continue;
        if (on.item >= 0 && s.selected != on.item) continue;
        if (env::is_click(on.action)) {
            push({env::Action::click(on.action, at->x, at->y), id, ""});
        } else if (on.action == env::ActionKind::drag) {
            const auto& to_id = element_id(spec, on.target);
            if (const auto& to = points[static_cast<std::size_t>(on.target)]) push({env::Action::drag(*at, *to), id, to_id});
        } else if (s.focus == on.element) {
            if (auto a = keyboard_action(rule)) push({*a, "", ""});
        }
    }
    for (const auto& ref : refs) {
        if (ref.slot || spec.elements[static_cast<std::size_t>(ref.index)].kind != "input") continue;
        if (const auto& at = points[static_cast<std::size_t>(ref.index)]) {
            push({env::Action::left_click(at->x, at->y), std::string(ref.id), ""});
        }
    }
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        if (!s.inventory[i]) continue;
        const auto& id = spec.slot_ids[i];
        if (auto at = locate(refs, id)) push({env::Action::left_click(at->x, at->y), id, ""});
    }
    return out;
}

env::Action concretize(const PlanStep& step, const EnvState& state) {
    if (step.target.empty()) return step.action;
    auto at = locate(state, step.target);
    if (!at) return step.action;
    if (const auto* click = std::get_if<env::Click>(&step.action.input)) {
        return env::Action::click(click->button, at->x, at->y);
    }
    if (std::holds_alternative<env::Drag>(step.action.input)) {
        auto to = locate(state, step.drag_target);
        if (!to) return step.action;
        return env::Action::drag(*at, *to);
    }
    return step.action;
}

Plan oracle_solve_from(const EnvState& start, const OracleOptions& options) {
    if (evaluate(start.spec->success, start)) {
        Plan plan;
        plan.steps.push_back({env::Action::finish(), "", ""});
        return plan;
    }
    struct Node {
        EnvState state;
        int parent;
        PlanStep via;
    };
    std::vector<Node> nodes;
    std::unordered_map<std::string, int> seen;
    seen.reserve(std::min<std::size_t>(options.node_cap, 1u << 20));
    std::deque<int> frontier;
    nodes.push_back({start, -1, {}});
    seen.emplace(abstract_key(start), 0);
    frontier.push_back(0);

    std::size_t expanded = 0;
    while (!frontier.empty()) {
        const int current = frontier.front();
        frontier.pop_front();
        ++expanded;
        const auto candidates = candidate_actions(nodes[static_cast<std::size_t>(current)].state);
        for (const auto& cand : candidates) {
            EnvState next = nodes[static_cast<std::size_t>(current)].state;
            step_in_place(next, cand.action, false);
            if (next.terminal && !next.success) continue;
            auto key = abstract_key(next);
            if (seen.count(key)) continue;
            if (nodes.size() >= options.node_cap) {
                throw StateSpaceBudgetExceeded("search exceeded the node cap of " + std::to_string(options.node_cap));
            }
            const bool done = next.success;
            nodes.push_back({std::move(next), current, cand});
            const int id = static_cast<int>(nodes.size() - 1);
            seen.emplace(std::move(key), id);
            if (done) {
                Plan plan;
                plan.expanded = expanded;
                for (int n = id; nodes[static_cast<std::size_t>(n)].parent >= 0; n = nodes[static_cast<std::size_t>(n)].parent) {
                    plan.steps.push_back(nodes[static_cast<std::size_t>(n)].via);
                }
                std::reverse(plan.steps.begin(), plan.steps.end());
                return plan;
            }
            frontier.push_back(id);
        }
    }
    throw Unsolvable("no action sequence reaches the success condition of '" + start.spec->game_id + "' (" +
                     std::to_string(nodes.size()) + " abstract states explored)");
}

Plan oracle_solve(const SpecPtr& spec, const OracleOptions& options) { return oracle_solve_from(init(spec), options); }

}  // namespace coast::sim
