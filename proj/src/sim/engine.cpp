#include <algorithm>
#include <random>

#include "coast/sim/env_state.hpp"
#include "coast/util/text.hpp"

namespace coast::sim {

using env::Action;
using env::Event;
using env::EventKind;

bool EnvState::operator==(const EnvState& o) const {
    const bool same_spec = spec == o.spec || (spec && o.spec && spec->hash == o.spec->hash);
    return same_spec && seed == o.seed && *offsets == *o.offsets && scene == o.scene && flags == o.flags &&
           inventory == o.inventory && counters == o.counters && selected == o.selected &&
           focus == o.focus && dialogue_rule == o.dialogue_rule && step_index == o.step_index &&
           terminal == o.terminal && success == o.success && clues_seen == o.clues_seen &&
           clues_used == o.clues_used;
}

namespace {

env::Rect placed(const EnvState& s, int element) {
    auto r = s.spec->elements[static_cast<std::size_t>(element)].rect;
    const auto off = (*s.offsets)[static_cast<std::size_t>(element)];
    r.x += off.x;
    r.y += off.y;
    return r;
}

bool element_visible(const EnvState& s, int element) {
    return evaluate(s.spec->elements[static_cast<std::size_t>(element)].visible_when, s);
}

std::optional<std::size_t> hit(const std::vector<VisibleRef>& refs, env::Point p) {
    std::vector<env::HitCandidate> cands;
    cands.reserve(refs.size());
    for (const auto& r : refs) cands.push_back({r.rect, r.z, r.id});
    return env::hit_test(cands, p);
}

std::vector<std::uint8_t> discrete_bits(const EnvState& s) {
    std::vector<std::uint8_t> bits;
    for (const auto& m : s.spec->milestones) {
        bits.push_back(m.kind != MilestoneKind::continuous && evaluate(m.predicate, s) ? 1 : 0);
    }
    return bits;
}

int match_element_rule(const EnvState& s, int element, env::ActionKind kind, int target) {
    const auto& spec = *s.spec;
    auto attempt = [&](int item) -> int {
        for (int ri : spec.rules_by_element[static_cast<std::size_t>(element)]) {
            const auto& rule = spec.rules[static_cast<std::size_t>(ri)];
            if (rule.on.action != kind || rule.on.item != item) continue;
            if (kind == env::ActionKind::drag && rule.on.target != target) continue;
            if (evaluate(rule.when, s)) return ri;
        }
        return -1;
    };
    int fired = -1;
    if (s.selected >= 0) fired = attempt(s.selected);
    if (fired < 0) fired = attempt(-1);
    return fired;
}

int match_keyboard_rule(const EnvState& s, const Action& action) {
    const auto& spec = *s.spec;
    const auto kind = action.kind();
    for (int ri : spec.keyboard_rules) {
        const auto& rule = spec.rules[static_cast<std::size_t>(ri)];
        if (rule.on.action != kind) continue;
        if (rule.on.element >= 0 && rule.on.element != s.focus) continue;
        bool ok = false;
        if (const auto* t = std::get_if<env::TypeText>(&action.input)) {
            ok = util::normalize_key(t->text) == util::normalize_key(rule.on.text);
        } else if (const auto* k = std::get_if<env::KeyPress>(&action.input)) {
            ok = util::normalize_key(k->key) == util::normalize_key(rule.on.text);
        } else if (const auto* h = std::get_if<env::HoldKey>(&action.input)) {
            ok = util::normalize_key(h->key) == util::normalize_key(rule.on.text) &&
                 h->seconds >= rule.on.min_duration;
        } else if (const auto* sc = std::get_if<env::Scroll>(&action.input)) {
            ok = !rule.on.direction || *rule.on.direction == sc->direction;
        }
        if (ok && evaluate(rule.when, s)) return ri;
    }
    return -1;
}

void apply_effects(EnvState& s, int rule_index, std::vector<Event>& events) {
    const auto& spec = *s.spec;
    const auto& fx = spec.rules[static_cast<std::size_t>(rule_index)].effects;
    for (auto [flag, value] : fx.set_flags) {
        auto& slot = s.flags[static_cast<std::size_t>(flag)];
        const bool was = slot != 0;
        slot = value ? 1 : 0;
        if (!was && value && spec.flags[static_cast<std::size_t>(flag)].lock) {
            events.push_back({EventKind::lock_opened, spec.flags[static_cast<std::size_t>(flag)].id});
        }
    }
    for (int item : fx.consume) {
        s.inventory[static_cast<std::size_t>(item)] = 0;
        if (s.selected == item) s.selected = -1;
    }
    for (int item : fx.grant) {
        auto& slot = s.inventory[static_cast<std::size_t>(item)];
        if (!slot) {
            slot = 1;
            events.push_back({EventKind::item_acquired, spec.items[static_cast<std::size_t>(item)].id});
        }
    }
    for (auto [counter, delta] : fx.counter_deltas) {
        const auto& def = spec.counters[static_cast<std::size_t>(counter)];
        int& value = s.counters[static_cast<std::size_t>(counter)];
        const int next = std::clamp(value + delta, def.min, def.max);
        if (next != value) {
            events.push_back({EventKind::score_changed, def.id, static_cast<double>(next - value)});
            value = next;
        }
    }
    if (fx.goto_scene >= 0) s.scene = fx.goto_scene;
    if (fx.dialogue) {
        s.dialogue_rule = rule_index;
        events.push_back({EventKind::dialogue_shown, spec.rules[static_cast<std::size_t>(rule_index)].id});
    }
}

void mark_observed_clues(EnvState& s, std::vector<Event>* events) {
    const auto& spec = *s.spec;
    for (std::size_t c = 0; c < spec.clues.size(); ++c) {
        if (s.clues_seen[c]) continue;
        const int el = spec.clues[c].element;
        const auto& def = spec.elements[static_cast<std::size_t>(el)];
        if ((def.scene == s.scene || def.scene < 0) && element_visible(s, el)) {
            s.clues_seen[c] = 1;
            if (events) events->push_back({EventKind::clue_observed, spec.clues[c].name, 0.0, s.step_index});
        }
    }
}

}  // namespace

bool evaluate(const Condition& c, const EnvState& s) {
    using K = Condition::Kind;
    switch (c.kind) {
        case K::always: return true;
        case K::never: return false;
        case K::flag: return s.flags[static_cast<std::size_t>(c.index)] != 0;
        case K::has: return s.inventory[static_cast<std::size_t>(c.index)] != 0;
        case K::scene: return s.scene == c.index;
        case K::counter: return compare(s.counters[static_cast<std::size_t>(c.index)], c.op, c.value);
        case K::all:
            return std::all_of(c.children.begin(), c.children.end(), [&](const Condition& ch) { return evaluate(ch, s); });
        case K::any:
            return std::any_of(c.children.begin(), c.children.end(), [&](const Condition& ch) { return evaluate(ch, s); });
        case K::negate: return !evaluate(c.children.front(), s);
    }
    return false;
}

bool evaluate(const Evidence& e, const env::Observation& obs) {
    using K = Evidence::Kind;
    switch (e.kind) {
        case K::always: return true;
        case K::never: return false;
        case K::visible: return obs.find(e.ref) != nullptr;
        case K::hud: {
            auto it = obs.hud_values.find(e.ref);
            return it != obs.hud_values.end() && compare(it->second, e.op, e.value);
        }
        case K::inventory:
            return std::find(obs.inventory_view.begin(), obs.inventory_view.end(), e.ref) != obs.inventory_view.end();
        case K::text: {
            const auto* el = obs.find(e.ref);
            return el && el->text && el->text->find(e.text) != std::string::npos;
        }
        case K::all:
            return std::all_of(e.children.begin(), e.children.end(), [&](const Evidence& ch) { return evaluate(ch, obs); });
        case K::any:
            return std::any_of(e.children.begin(), e.children.end(), [&](const Evidence& ch) { return evaluate(ch, obs); });
        case K::negate: return !evaluate(e.children.front(), obs);
    }
    return false;
}

EnvState init(SpecPtr spec, std::optional<std::uint64_t> seed) {
    EnvState s;
    s.spec = std::move(spec);
    const auto& sp = *s.spec;
    s.seed = seed.value_or(0);
    std::vector<env::Point> offsets(sp.elements.size());
    if (s.seed != 0) {
        std::mt19937_64 rng(s.seed);
        for (std::size_t i = 0; i < sp.elements.size(); ++i) {
            const auto& e = sp.elements[i];
            // Always draw twice so one element's bounds never shift another's offsets.
            const auto rx = rng();
            const auto ry = rng();
            const auto span_x = static_cast<std::uint64_t>(2 * e.jitter_x + 1);
            const auto span_y = static_cast<std::uint64_t>(2 * e.jitter_y + 1);
            offsets[i] = {static_cast<int>(rx % span_x) - e.jitter_x, static_cast<int>(ry % span_y) - e.jitter_y};
        }
    }
    s.offsets = std::make_shared<const std::vector<env::Point>>(std::move(offsets));
    s.scene = sp.start_scene;
    s.flags.resize(sp.flags.size());
    for (std::size_t i = 0; i < sp.flags.size(); ++i) s.flags[i] = sp.flags[i].initial ? 1 : 0;
    s.inventory.assign(sp.items.size(), 0);
    for (int i : sp.initial_inventory) s.inventory[static_cast<std::size_t>(i)] = 1;
    for (const auto& c : sp.counters) s.counters.push_back(c.initial);
    s.clues_seen.assign(sp.clues.size(), 0);
    s.clues_used.assign(sp.clues.size(), 0);
    mark_observed_clues(s, nullptr);
    return s;
}

std::vector<VisibleRef> visible_refs(const EnvState& s) {
    const auto& spec = *s.spec;
    std::vector<VisibleRef> refs;
    refs.reserve(spec.elements.size() + spec.items.size());
    auto add = [&](int el) {
        if (!element_visible(s, el)) return;
        const auto& def = spec.elements[static_cast<std::size_t>(el)];
        refs.push_back({false, el, placed(s, el), def.z, def.id});
    };
    for (int el : spec.scenes[static_cast<std::size_t>(s.scene)].elements) add(el);
    for (int el : spec.overlay) add(el);
    int slot = 0;
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        if (!s.inventory[i]) continue;
        refs.push_back({true, static_cast<int>(i), spec.slot_rect(slot++), 1000, spec.slot_ids[i]});
    }
    return refs;
}

env::Observation render(const EnvState& s) {
    const auto& spec = *s.spec;
    env::Observation obs;
    obs.step_index = s.step_index;
    obs.scene_label = spec.game_id + "." + spec.scenes[static_cast<std::size_t>(s.scene)].id;
    for (const auto& ref : visible_refs(s)) {
        env::VisibleElement ve;
        ve.id = std::string(ref.id);
        ve.rect = ref.rect;
        if (ref.slot) {
            const auto& item = spec.items[static_cast<std::size_t>(ref.index)];
            ve.label = item.label;
            ve.kind = "inventory_item";
            if (s.selected == ref.index) ve.text = "selected";
            obs.inventory_view.push_back(item.label);
        } else {
            const auto& def = spec.elements[static_cast<std::size_t>(ref.index)];
            ve.label = def.label;
            ve.kind = def.kind;
            ve.text = def.text;
        }
        obs.visible_elements.push_back(std::move(ve));
    }
    for (std::size_t i = 0; i < spec.counters.size(); ++i) {
        if (evaluate(spec.counters[i].hud_when, s)) obs.hud_values[spec.counters[i].id] = s.counters[i];
    }
    if (s.dialogue_rule >= 0) obs.dialogue_text = spec.rules[static_cast<std::size_t>(s.dialogue_rule)].effects.dialogue;
    return obs;
}

env::StepOutcome step_in_place(EnvState& s, const Action& action, bool render_observation) {
    if (s.terminal) throw env::ActionOnTerminalState("episode already ended at step " + std::to_string(s.step_index));
    if (auto why = env::validate_action(action, s.spec->viewport)) throw env::InvalidAction(*why);
    const auto& spec = *s.spec;

    env::StepOutcome out;
    const int acting_step = s.step_index;
    const auto before = discrete_bits(s);
    s.dialogue_rule = -1;
    int fired = -1;
    bool interface_change = false;

    if (std::holds_alternative<env::Finish>(action.input)) {
        s.terminal = true;
        s.step_index += 1;
        if (evaluate(spec.success, s)) {
            s.success = true;
            out.events.push_back({EventKind::terminal_success});
        }
        if (render_observation) out.observation = render(s);
        out.terminal = true;
        return out;
    }

    if (const auto* click = std::get_if<env::Click>(&action.input)) {
        const auto refs = visible_refs(s);
        if (auto h = hit(refs, click->at)) {
            const auto& ref = refs[*h];
            if (ref.slot) {
                if (click->button == env::ActionKind::left_click) {
                    s.selected = s.selected == ref.index ? -1 : ref.index;
                    interface_change = true;
                }
                s.focus = -1;
            } else {
                fired = match_element_rule(s, ref.index, click->button, -1);
                s.selected = -1;
                s.focus = spec.elements[static_cast<std::size_t>(ref.index)].kind == "input" ? ref.index : -1;
                interface_change = s.focus >= 0;
            }
        } else {
            s.selected = -1;
            s.focus = -1;
        }
    } else if (const auto* drag = std::get_if<env::Drag>(&action.input)) {
        const auto refs = visible_refs(s);
        auto from = hit(refs, drag->from);
        auto to = hit(refs, drag->to);
        if (from && to && !refs[*from].slot && !refs[*to].slot) {
            fired = match_element_rule(s, refs[*from].index, env::ActionKind::drag, refs[*to].index);
        }
        s.selected = -1;
    } else {
        fired = match_keyboard_rule(s, action);
    }

    if (fired >= 0) apply_effects(s, fired, out.events);
    s.step_index += 1;

    if (fired >= 0) {
        for (std::size_t c = 0; c < spec.clues.size(); ++c) {
            if (s.clues_used[c]) continue;
            const auto& used_by = spec.clues[c].used_by;
            if (std::find(used_by.begin(), used_by.end(), fired) != used_by.end()) {
                s.clues_used[c] = 1;
                out.events.push_back({EventKind::clue_used, spec.clues[c].name, 0.0, acting_step});
            }
        }
    }
    const auto after = discrete_bits(s);
    for (std::size_t m = 0; m < after.size(); ++m) {
        if (after[m] && !before[m]) out.events.push_back({EventKind::milestone_reached, spec.milestones[m].id});
    }
    mark_observed_clues(s, &out.events);
    if (evaluate(spec.success, s)) {
        s.success = true;
        s.terminal = true;
        out.events.push_back({EventKind::terminal_success});
    }
    const bool any_effect = std::any_of(out.events.begin(), out.events.end(), [](const Event& e) {
        return e.kind != EventKind::clue_observed;
    });
    if (fired < 0 && !interface_change && !any_effect) {
        out.events.insert(out.events.begin(), Event{EventKind::no_effect});
    }
    if (render_observation) out.observation = render(s);
    out.terminal = s.terminal;
    return out;
}

std::pair<EnvState, env::StepOutcome> step(const EnvState& state, const Action& action) {
    EnvState next = state;
    auto out = step_in_place(next, action);
    return {std::move(next), std::move(out)};
}

env::MilestoneStatus milestone_vector(const EnvState& s) {
    env::MilestoneStatus status;
    for (const auto& m : s.spec->milestones) {
        if (m.kind == MilestoneKind::continuous) {
            for (const auto& c : m.counters) {
                status.continuous.push_back({m.id, s.spec->counters[static_cast<std::size_t>(c.counter)].id,
                                             static_cast<double>(s.counters[static_cast<std::size_t>(c.counter)]),
                                             c.normalizer, c.source});
            }
        } else {
            status.discrete.push_back({m.id, evaluate(m.predicate, s)});
        }
    }
    return status;
}

std::optional<env::Point> locate(const EnvState& s, std::string_view element_id) {
    return locate(visible_refs(s), element_id);
}

std::optional<env::Point> locate(const std::vector<VisibleRef>& refs, std::string_view element_id) {
    std::size_t target = refs.size();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (refs[i].id == element_id) target = i;
    }
    if (target == refs.size()) return std::nullopt;
    const auto r = refs[target].rect;
    auto resolves = [&](env::Point p) {
        auto h = hit(refs, p);
        return h && *h == target;
    };
    if (resolves(r.center())) return r.center();
    const int sx = std::max(1, r.w / 8);
    const int sy = std::max(1, r.h / 8);
    for (int y = r.y; y < r.y + r.h; y += sy) {
        for (int x = r.x; x < r.x + r.w; x += sx) {
            if (resolves({x, y})) return env::Point{x, y};
        }
    }
    return std::nullopt;
}

std::string abstract_key(const EnvState& s) {
    std::string key;
    key.reserve(8 + s.flags.size() + s.inventory.size() + 4 * s.counters.size());
    auto put_int = [&](int v) {
        for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((static_cast<unsigned>(v) >> (8 * b)) & 0xFF));
    };
    put_int(s.scene);
    put_int(s.selected);
    put_int(s.focus);
    for (auto f : s.flags) key.push_back(static_cast<char>(f));
    for (auto i : s.inventory) key.push_back(static_cast<char>(i));
    for (int c : s.counters) put_int(c);
    return key;
}

EnvState resume(const EnvState& state) {
    EnvState copy = state;
    copy.terminal = false;
    copy.dialogue_rule = -1;
    return copy;
}

std::vector<Event> initial_clue_events(const EnvState& s) {
    std::vector<Event> events;
    for (std::size_t c = 0; c < s.spec->clues.size(); ++c) {
        if (s.clues_seen[c]) events.push_back({EventKind::clue_observed, s.spec->clues[c].name, 0.0, 0});
    }
    return events;
}

Json state_to_json(const EnvState& s) {
    const auto& spec = *s.spec;
    Json flags = Json::object();
    for (std::size_t i = 0; i < spec.flags.size(); ++i) flags[spec.flags[i].id] = s.flags[i] != 0;
    Json inventory = Json::array();
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        if (s.inventory[i]) inventory.push_back(spec.items[i].id);
    }
    Json counters = Json::object();
    for (std::size_t i = 0; i < spec.counters.size(); ++i) counters[spec.counters[i].id] = s.counters[i];
    Json seen = Json::array();
    Json used = Json::array();
    for (std::size_t c = 0; c < spec.clues.size(); ++c) {
        if (s.clues_seen[c]) seen.push_back(spec.clues[c].name);
        if (s.clues_used[c]) used.push_back(spec.clues[c].name);
    }
    auto opt_id = [](int idx, auto get) { return idx >= 0 ? Json(get(idx)) : Json(nullptr); };
    return {{"spec_hash", spec.hash},
            {"game_id", spec.game_id},
            {"seed", s.seed},
            {"scene", spec.scenes[static_cast<std::size_t>(s.scene)].id},
            {"flags", flags},
            {"inventory", inventory},
            {"counters", counters},
            {"selected", opt_id(s.selected, [&](int i) { return spec.items[static_cast<std::size_t>(i)].id; })},
            {"focus", opt_id(s.focus, [&](int i) { return spec.elements[static_cast<std::size_t>(i)].id; })},
            {"dialogue_rule", opt_id(s.dialogue_rule, [&](int i) { return spec.rules[static_cast<std::size_t>(i)].id; })},
            {"step_index", s.step_index},
            {"terminal", s.terminal},
            {"success", s.success},
            {"clues_seen", seen},
            {"clues_used", used}};
}

EnvState state_from_json(SpecPtr spec, const Json& value) {
    util::JsonReader r(value, "$");
    r.only({"spec_hash", "game_id", "seed", "scene", "flags", "inventory", "counters", "selected", "focus",
            "dialogue_rule", "step_index", "terminal", "success", "clues_seen", "clues_used"});
    if (r.at("spec_hash").str() != spec->hash) r.at("spec_hash").fail("snapshot belongs to a different spec");
    const auto seed = static_cast<std::uint64_t>(r.at("seed").integer());
    EnvState s = init(spec, seed);
    auto index_of = [&](const std::unordered_map<std::string, int>& table, const util::JsonReader& f) {
        auto it = table.find(f.str());
        if (it == table.end()) f.fail("unknown id '" + f.str() + "'");
        return it->second;
    };
    s.scene = index_of(spec->scene_index, r.at("scene"));
    auto flags = r.at("flags");
    flags.expect_object();
    for (const auto& [k, v] : flags.json().items()) {
        const Json key_json(k);
        util::JsonReader key(key_json, flags.path() + "." + k);
        s.flags[static_cast<std::size_t>(index_of(spec->flag_index, key))] =
            util::JsonReader(v, key.path()).boolean() ? 1 : 0;
    }
    std::fill(s.inventory.begin(), s.inventory.end(), 0);
    for (const auto& i : r.at("inventory").elements()) s.inventory[static_cast<std::size_t>(index_of(spec->item_index, i))] = 1;
    auto counters = r.at("counters");
    counters.expect_object();
    for (const auto& [k, v] : counters.json().items()) {
        const Json key_json(k);
        util::JsonReader key(key_json, counters.path() + "." + k);
        s.counters[static_cast<std::size_t>(index_of(spec->counter_index, key))] = util::JsonReader(v, key.path()).int32();
    }
    s.selected = r.maybe("selected") ? index_of(spec->item_index, *r.maybe("selected")) : -1;
    s.focus = r.maybe("focus") ? index_of(spec->element_index, *r.maybe("focus")) : -1;
    s.dialogue_rule = r.maybe("dialogue_rule") ? index_of(spec->rule_index, *r.maybe("dialogue_rule")) : -1;
    s.step_index = r.at("step_index").int32();
    s.terminal = r.at("terminal").boolean();
    s.success = r.at("success").boolean();
    std::fill(s.clues_seen.begin(), s.clues_seen.end(), 0);
    std::fill(s.clues_used.begin(), s.clues_used.end(), 0);
    auto mark = [&](const util::JsonReader& list, std::vector<std::uint8_t>& bits) {
        for (const auto& n : list.elements()) {
            const auto name = n.str();
            bool found = false;
            for (std::size_t c = 0; c < spec->clues.size(); ++c) {
                if (spec->clues[c].name == name) {
                    bits[c] = 1;
                    found = true;
                }
            }
            if (!found) n.fail("unknown clue '" + name + "'");
        }
    };
    mark(r.at("clues_seen"), s.clues_seen);
    mark(r.at("clues_used"), s.clues_used);
    return s;
}

}  // namespace coast::sim
