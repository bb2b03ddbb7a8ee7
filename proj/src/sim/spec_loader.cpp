#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "coast/sim/game_spec.hpp"
#include "coast/sim/oracle.hpp"
#include "coast/util/hash.hpp"

namespace coast::sim {

using util::JsonReader;

bool compare(double lhs, CmpOp op, double rhs) {
    switch (op) {
        case CmpOp::lt: return lhs < rhs;
        case CmpOp::le: return lhs <= rhs;
        case CmpOp::eq: return lhs == rhs;
        case CmpOp::ne: return lhs != rhs;
        case CmpOp::ge: return lhs >= rhs;
        case CmpOp::gt: return lhs > rhs;
    }
    return false;
}

std::string_view to_string(MilestoneKind kind) {
    switch (kind) {
        case MilestoneKind::sequential: return "sequential";
        case MilestoneKind::counting: return "counting";
        case MilestoneKind::continuous: return "continuous";
    }
    return "sequential";
}

std::string_view to_string(Genre genre) {
    switch (genre) {
        case Genre::mystery: return "mystery";
        case Genre::hidden_object: return "hidden_object";
        case Genre::room_escape: return "room_escape";
        case Genre::visual_novel: return "visual_novel";
        case Genre::simulation: return "simulation";
    }
    return "mystery";
}

std::optional<Genre> genre_from_string(std::string_view name) {
    for (Genre g : {Genre::mystery, Genre::hidden_object, Genre::room_escape, Genre::visual_novel,
                    Genre::simulation}) {
        if (to_string(g) == name) return g;
    }
    return std::nullopt;
}

std::optional<MilestoneKind> milestone_kind_from_string(std::string_view name) {
    for (MilestoneKind k : {MilestoneKind::sequential, MilestoneKind::counting, MilestoneKind::continuous}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

namespace {

CmpOp read_op(const JsonReader& r) {
    const auto s = r.str();
    if (s == "<") return CmpOp::lt;
    if (s == "<=") return CmpOp::le;
    if (s == "==") return CmpOp::eq;
    if (s == "!=") return CmpOp::ne;
    if (s == ">=") return CmpOp::ge;
    if (s == ">") return CmpOp::gt;
    r.fail("unknown comparison '" + s + "'");
}

[[noreturn]] void dangling(const JsonReader& r, std::string_view what, const std::string& name) {
    throw DanglingReference(r.path() + ": unknown " + std::string(what) + " '" + name + "'");
}

int lookup(const std::unordered_map<std::string, int>& table, const JsonReader& r,
           std::string_view what) {
    const auto name = r.str();
    auto it = table.find(name);
    if (it == table.end()) dangling(r, what, name);
    return it->second;
}

env::Rect read_rect(const JsonReader& r) {
    auto parts = r.elements();
    if (parts.size() != 4) r.fail("expected [x, y, w, h]");
    env::Rect rect{parts[0].int32(), parts[1].int32(), parts[2].int32(), parts[3].int32()};
    if (rect.w <= 0 || rect.h <= 0) r.fail("rectangle must have positive size");
    return rect;
}

class Loader {
public:
    explicit Loader(const Json& doc) : root_(doc, "$") {}

    std::shared_ptr<GameSpec> run() {
        spec_ = std::make_shared<GameSpec>();
        root_.only({"spec_version", "game_id", "title", "description", "genre_tag", "judge_strategy",
                    "viewport", "step_budget", "task_query", "info", "completion", "start_scene",
                    "flags", "counters", "items", "initial_inventory", "overlay", "scenes", "rules",
                    "clues", "milestones", "success_condition", "hints"});
        read_header();
        declare_symbols();
        read_elements();
        read_counters();
        read_rules();
        read_clues();
        read_milestones();
        spec_->success = condition(root_.at("success_condition"));
        if (auto h = root_.maybe("hints")) spec_->hints = h->strings();
        check_milestone_monotonicity();
        check_genre();
        index_rules();
        for (const auto& item : spec_->items) spec_->slot_ids.push_back("inv:" + item.id);
        spec_->document = root_.json();
        spec_->hash = util::digest_hex(util::canonical_dump(spec_->document));
        return spec_;
    }

private:
    void read_header() {
        auto version = root_.at("spec_version");
        if (version.integer() != 1) version.fail("unsupported spec_version (expected 1)");
        spec_->spec_version = 1;
        spec_->game_id = root_.at("game_id").nonempty_str();
        spec_->title = root_.str_or("title", spec_->game_id);
        spec_->description = root_.str_or("description", "");
        auto genre = root_.at("genre_tag");
        auto g = genre_from_string(genre.str());
        if (!g) genre.fail("unknown genre_tag '" + genre.str() + "'");
        spec_->genre = *g;
        if (auto vp = root_.maybe("viewport")) {
            vp->only({"width", "height"});
            spec_->viewport = {vp->at("width").int32(), vp->at("height").int32()};
            if (spec_->viewport.width <= 0 || spec_->viewport.height <= 0) {
                vp->fail("viewport must have positive size");
            }
        }
        spec_->step_budget = static_cast<int>(root_.integer_or("step_budget", 1000));
        if (spec_->step_budget <= 0) root_.at("step_budget").fail("must be positive");
        spec_->task_query = root_.str_or("task_query", "Complete the story of " + spec_->title + ".");
        if (auto info = root_.maybe("info")) spec_->info = info->strings();
        spec_->completion = root_.str_or("completion", "");
    }

    void declare_symbols() {
        auto declare = [](std::unordered_map<std::string, int>& table, const JsonReader& id,
                          int index, std::string_view what) {
            const auto name = id.nonempty_str();
            if (!table.emplace(name, index).second) {
                id.fail("duplicate " + std::string(what) + " id '" + name + "'");
            }
        };
        if (auto flags = root_.maybe("flags")) {
            for (const auto& f : flags->elements()) {
                f.only({"id", "initial", "lock"});
                FlagDef def{f.at("id").nonempty_str(), f.boolean_or("initial", false),
                            f.boolean_or("lock", false)};
                declare(spec_->flag_index, f.at("id"), static_cast<int>(spec_->flags.size()), "flag");
                spec_->flags.push_back(std::move(def));
            }
        }
        if (auto counters = root_.maybe("counters")) {
            for (const auto& c : counters->elements()) {
                declare(spec_->counter_index, c.at("id"), static_cast<int>(spec_->counters.size()),
                        "counter");
                spec_->counters.push_back(CounterDef{c.at("id").str()});
            }
        }
        if (auto items = root_.maybe("items")) {
            for (const auto& it : items->elements()) {
                it.only({"id", "label"});
                declare(spec_->item_index, it.at("id"), static_cast<int>(spec_->items.size()), "item");
                spec_->items.push_back({it.at("id").str(), it.str_or("label", it.at("id").str())});
            }
        }
        if (static_cast<int>(spec_->items.size()) > spec_->slot_capacity()) {
            root_.at("items").fail("more items than inventory slots in the viewport");
        }
        auto scenes = root_.at("scenes");
        if (scenes.elements().empty()) scenes.fail("at least one scene required");
        for (const auto& s : scenes.elements()) {
            s.only({"id", "label", "elements", "links"});
            declare(spec_->scene_index, s.at("id"), static_cast<int>(spec_->scenes.size()), "scene");
            spec_->scenes.push_back({s.at("id").str(), s.str_or("label", s.at("id").str()), {}});
        }
        spec_->start_scene = root_.has("start_scene") ? lookup(spec_->scene_index, root_.at("start_scene"), "scene") : 0;
        if (auto inv = root_.maybe("initial_inventory")) {
            for (const auto& i : inv->elements()) {
                spec_->initial_inventory.push_back(lookup(spec_->item_index, i, "item"));
            }
        }
        // Element ids are declared up front so guards may reference any element.
        auto declare_elements = [&](const JsonReader& list) {
            for (const auto& e : list.elements()) {
                const auto id = e.at("id").nonempty_str();
                if (id.rfind("inv:", 0) == 0) e.at("id").fail("the 'inv:' prefix is reserved");
                declare(spec_->element_index, e.at("id"), element_count_++, "element");
            }
        };
        if (auto overlay = root_.maybe("overlay")) declare_elements(*overlay);
        for (const auto& s : scenes.elements()) {
            if (auto els = s.maybe("elements")) declare_elements(*els);
        }
        spec_->elements.resize(static_cast<std::size_t>(element_count_));
    }

    void read_element(const JsonReader& e, int scene) {
        e.only({"id", "label", "kind", "rect", "z", "text", "visible_when", "jitter"});
        const int idx = spec_->element_index.at(e.at("id").str());
        ElementDef& def = spec_->elements[static_cast<std::size_t>(idx)];
        def.id = e.at("id").str();
        def.label = e.str_or("label", def.id);
        def.kind = e.str_or("kind", "object");
        def.rect = read_rect(e.at("rect"));
        def.z = static_cast<int>(e.integer_or("z", scene < 0 ? 100 : 0));
        if (auto t = e.maybe("text")) def.text = t->str();
        if (auto v = e.maybe("visible_when")) def.visible_when = condition(*v);
        if (auto j = e.maybe("jitter")) {
            auto parts = j->elements();
            if (parts.size() != 2) j->fail("expected [dx, dy]");
            def.jitter_x = parts[0].int32();
            def.jitter_y = parts[1].int32();
            if (def.jitter_x < 0 || def.jitter_y < 0) j->fail("jitter bounds must be non-negative");
        }
        def.scene = scene;
        env::Rect low{def.rect.x - def.jitter_x, def.rect.y - def.jitter_y, def.rect.w, def.rect.h};
        env::Rect high{def.rect.x + def.jitter_x, def.rect.y + def.jitter_y, def.rect.w, def.rect.h};
        const auto vp = spec_->viewport.rect();
        if (!low.within(vp) || !high.within(vp)) {
            e.at("rect").fail("rectangle (with jitter) leaves the viewport");
        }
        if (scene >= 0) spec_->scenes[static_cast<std::size_t>(scene)].elements.push_back(idx);
        else spec_->overlay.push_back(idx);
    }

    void read_elements() {
        if (auto overlay = root_.maybe("overlay")) {
            for (const auto& e : overlay->elements()) read_element(e, -1);
        }
        auto scenes = root_.at("scenes").elements();
        for (std::size_t s = 0; s < scenes.size(); ++s) {
            if (auto els = scenes[s].maybe("elements")) {
                for (const auto& e : els->elements()) read_element(e, static_cast<int>(s));
            }
        }
    }

    void read_counters() {
        auto counters = root_.maybe("counters");
        if (!counters) return;
        auto list = counters->elements();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& c = list[i];
            c.only({"id", "label", "initial", "min", "max", "hud_when"});
            CounterDef& def = spec_->counters[i];
            def.label = c.str_or("label", def.id);
            def.initial = static_cast<int>(c.integer_or("initial", 0));
            def.min = static_cast<int>(c.integer_or("min", 0));
            def.max = c.at("max").int32();
            if (!(def.min <= def.initial && def.initial <= def.max)) {
                c.fail("counter requires min <= initial <= max");
            }
            if (auto h = c.maybe("hud_when")) def.hud_when = condition(*h);
            else def.hud_when = Condition{Condition::Kind::always};
        }
    }

    Trigger trigger(const JsonReader& on) {
        on.only({"action", "element", "target", "item", "text", "key", "direction", "min_duration"});
        Trigger t;
        const auto action_name = on.str_or("action", "left_click");
        auto kind = env::action_kind_from_string(action_name);
        if (!kind || *kind == env::ActionKind::finish) {
            on.fail("unsupported trigger action '" + action_name + "'");
        }
        t.action = *kind;
        if (auto e = on.maybe("element")) t.element = lookup(spec_->element_index, *e, "element");
        if (auto e = on.maybe("target")) t.target = lookup(spec_->element_index, *e, "element");
        if (auto i = on.maybe("item")) t.item = lookup(spec_->item_index, *i, "item");
        if (auto x = on.maybe("text")) t.text = x->str();
        if (auto k = on.maybe("key")) t.text = k->str();
        if (auto d = on.maybe("direction")) {
            auto dir = env::scroll_direction_from_string(d->str());
            if (!dir) d->fail("unknown scroll direction");
            t.direction = dir;
        }
        t.min_duration = on.number_or("min_duration", 0.0);
        if ((env::is_click(t.action) || t.action == env::ActionKind::drag) && t.element < 0) {
            on.fail("pointer triggers require an element");
        }
        if (t.action == env::ActionKind::drag && t.target < 0) on.fail("drag triggers require a target");
        return t;
    }

    Effects effects(const JsonReader& e) {
        e.only({"set", "grant", "consume", "counters", "goto", "dialogue"});
        Effects fx;
        if (auto set = e.maybe("set")) {
            set->expect_object();
            for (const auto& [name, value] : set->json().items()) {
                const Json key_json(name);
                JsonReader key(key_json, set->path() + "." + name);
                JsonReader v(value, set->path() + "." + name);
                fx.set_flags.emplace_back(lookup(spec_->flag_index, key, "flag"), v.boolean());
            }
        }
        if (auto g = e.maybe("grant")) {
            for (const auto& i : g->elements()) fx.grant.push_back(lookup(spec_->item_index, i, "item"));
        }
        if (auto c = e.maybe("consume")) {
            for (const auto& i : c->elements()) fx.consume.push_back(lookup(spec_->item_index, i, "item"));
        }
        if (auto c = e.maybe("counters")) {
            c->expect_object();
            for (const auto& [name, value] : c->json().items()) {
                const Json key_json(name);
                JsonReader key(key_json, c->path() + "." + name);
                JsonReader v(value, c->path() + "." + name);
                fx.counter_deltas.emplace_back(lookup(spec_->counter_index, key, "counter"), v.int32());
            }
        }
        if (auto g = e.maybe("goto")) fx.goto_scene = lookup(spec_->scene_index, *g, "scene");
        if (auto d = e.maybe("dialogue")) fx.dialogue = d->str();
        return fx;
    }

    void add_rule(RuleDef rule, const JsonReader& where) {
        if (!spec_->rule_index.emplace(rule.id, static_cast<int>(spec_->rules.size())).second) {
            where.fail("duplicate rule id '" + rule.id + "'");
        }
        spec_->rules.push_back(std::move(rule));
    }

    void read_rules() {
        if (auto rules = root_.maybe("rules")) {
            for (const auto& r : rules->elements()) {
                r.only({"id", "on", "when", "effects"});
                RuleDef rule;
                rule.id = r.at("id").nonempty_str();
                rule.on = trigger(r.at("on"));
                if (auto w = r.maybe("when")) rule.when = condition(*w);
                if (auto fx = r.maybe("effects")) rule.effects = effects(*fx);
                add_rule(std::move(rule), r);
            }
        }
        // Navigation links compile to plain click rules after the authored ones.
        for (const auto& s : root_.at("scenes").elements()) {
            auto links = s.maybe("links");
            if (!links) continue;
            for (const auto& l : links->elements()) {
                l.only({"element", "to", "when"});
                RuleDef rule;
                rule.on.element = lookup(spec_->element_index, l.at("element"), "element");
                rule.id = "link:" + l.at("element").str();
                rule.effects.goto_scene = lookup(spec_->scene_index, l.at("to"), "scene");
                if (auto w = l.maybe("when")) rule.when = condition(*w);
                add_rule(std::move(rule), l);
            }
        }
    }

    void read_clues() {
        spec_->clue_by_element.assign(spec_->elements.size(), -1);
        auto clues = root_.maybe("clues");
        if (!clues) return;
        for (const auto& c : clues->elements()) {
            c.only({"element", "name", "description", "type", "interactable", "usage_hint", "subtask",
                    "used_by"});
            ClueAnnotation clue;
            clue.element = lookup(spec_->element_index, c.at("element"), "element");
            clue.name = c.at("name").nonempty_str();
            clue.description = c.str_or("description", "");
            auto type = memory::clue_type_from_string(c.at("type").str());
            if (!type) c.at("type").fail("unknown clue type '" + c.at("type").str() + "'");
            clue.type = *type;
            clue.interactable = c.boolean_or("interactable", true);
            clue.usage_hint = c.str_or("usage_hint", "");
            clue.subtask = c.str_or("subtask", "");
            if (auto u = c.maybe("used_by")) {
                for (const auto& r : u->elements()) clue.used_by.push_back(lookup(spec_->rule_index, r, "rule"));
            }
            auto& slot = spec_->clue_by_element[static_cast<std::size_t>(clue.element)];
            if (slot >= 0) c.at("element").fail("element already carries a clue");
            slot = static_cast<int>(spec_->clues.size());
            spec_->clues.push_back(std::move(clue));
        }
    }

    ProbeAction probe_action(const JsonReader& p) {
        ProbeAction probe;
        if (auto e = p.maybe("element")) {
            const auto id = e->str();
            if (!spec_->element_index.count(id)) dangling(*e, "element", id);
            probe.element = id;
            Json stripped = p.json();
            stripped.erase("element");
            const auto kind = env::action_kind_from_string(JsonReader(stripped, p.path()).at("type").str());
            if (!kind || !env::is_click(*kind)) p.fail("element probes must be clicks");
            stripped["x"] = 0;
            stripped["y"] = 0;
            probe.action = env::action_from_json(stripped, p.path());
        } else {
            probe.action = env::action_from_json(p.json(), p.path());
            if (auto why = env::validate_action(probe.action, spec_->viewport)) p.fail("invalid probe: " + *why);
        }
        return probe;
    }

    void read_milestones() {
        auto list = root_.at("milestones");
        std::set<std::string> ids;
        for (const auto& m : list.elements()) {
            m.only({"id", "label", "kind", "predicate", "probe", "evidence", "counters"});
            MilestoneDef def;
            def.id = m.at("id").nonempty_str();
            if (!ids.insert(def.id).second) m.at("id").fail("duplicate milestone id");
            def.label = m.str_or("label", def.id);
            auto kind = milestone_kind_from_string(m.at("kind").str());
            if (!kind) m.at("kind").fail("unknown milestone kind");
            def.kind = *kind;
            if (auto probe = m.maybe("probe")) {
                for (const auto& p : probe->elements()) def.probe.push_back(probe_action(p));
            }
            if (def.kind == MilestoneKind::continuous) {
                auto counters = m.at("counters").elements();
                if (counters.empty()) m.at("counters").fail("continuous milestones need counters");
                for (const auto& c : counters) {
                    c.only({"counter", "normalizer", "source"});
                    ContinuousCounter cc;
                    cc.counter = lookup(spec_->counter_index, c.at("counter"), "counter");
                    cc.normalizer = c.at("normalizer").number();
                    if (!(cc.normalizer > 0.0)) c.at("normalizer").fail("normalizer must be positive");
                    cc.source = c.str_or("source", "max_attainable");
                    if (cc.source != "max_attainable" && cc.source != "human_reference") {
                        c.at("source").fail("source must be max_attainable or human_reference");
                    }
                    def.counters.push_back(cc);
                }
            } else {
                def.predicate = condition(m.at("predicate"));
                def.evidence = evidence(m.at("evidence"));
            }
            spec_->milestones.push_back(std::move(def));
        }
        if (spec_->milestones.empty()) list.fail("at least one milestone required");
        const MilestoneKind first = spec_->milestones.front().kind;
        for (const auto& m : spec_->milestones) {
            if (m.kind != first) list.fail("all milestones of a game must share one kind");
        }
        spec_->judge_strategy = first;
        if (auto js = root_.maybe("judge_strategy")) {
            auto k = milestone_kind_from_string(js->str());
            if (!k || *k != first) js->fail("judge_strategy must match the milestone kind");
        }
    }

    // Discrete milestones must be monotone so the achieved bits never
    // regress: positive flags never cleared, items never consumed, counters
    // never decremented.
    void check_milestone_monotonicity() {
        std::set<int> cleared_flags, consumed_items, decremented_counters;
        for (const auto& r : spec_->rules) {
            for (auto [f, v] : r.effects.set_flags) {
                if (!v) cleared_flags.insert(f);
            }
            for (int i : r.effects.consume) consumed_items.insert(i);
            for (auto [c, d] : r.effects.counter_deltas) {
                if (d < 0) decremented_counters.insert(c);
            }
        }
        auto list = root_.at("milestones").elements();
        for (std::size_t i = 0; i < spec_->milestones.size(); ++i) {
            const auto& m = spec_->milestones[i];
            if (m.kind == MilestoneKind::continuous) continue;
            std::function<bool(const Condition&)> monotone = [&](const Condition& c) -> bool {
                using K = Condition::Kind;
                switch (c.kind) {
                    case K::always: return true;
                    case K::flag: return !cleared_flags.count(c.index);
                    case K::has: return !consumed_items.count(c.index);
                    case K::counter:
                        return (c.op == CmpOp::ge || c.op == CmpOp::gt) && !decremented_counters.count(c.index);
                    case K::all:
                    case K::any:
                        for (const auto& ch : c.children) {
                            if (!monotone(ch)) return false;
                        }
                        return true;
                    default: return false;
                }
            };
            if (!monotone(m.predicate)) list[i].at("predicate").fail("milestone predicate is not monotone");
        }
    }

    void check_genre() {
        if (spec_->genre == Genre::simulation) {
            if (spec_->judge_strategy != MilestoneKind::continuous) {
                root_.at("milestones").fail("simulation games use continuous milestones");
            }
        } else if (spec_->judge_strategy == MilestoneKind::continuous) {
            root_.at("milestones").fail("discrete genres need sequential or counting milestones");
        }
    }

    void index_rules() {
        spec_->rules_by_element.assign(spec_->elements.size(), {});
        for (std::size_t i = 0; i < spec_->rules.size(); ++i) {
            const auto& t = spec_->rules[i].on;
            if (env::is_click(t.action) || t.action == env::ActionKind::drag) {
                spec_->rules_by_element[static_cast<std::size_t>(t.element)].push_back(static_cast<int>(i));
            } else {
                spec_->keyboard_rules.push_back(static_cast<int>(i));
            }
        }
    }

    Condition condition(const JsonReader& r) {
        using K = Condition::Kind;
        const Json& j = r.json();
        if (j.is_boolean()) return Condition{j.get<bool>() ? K::always : K::never};
        r.expect_object();
        Condition c;
        if (r.has("flag")) {
            r.only({"flag"});
            c.kind = K::flag;
            c.index = lookup(spec_->flag_index, r.at("flag"), "flag");
        } else if (r.has("has")) {
            r.only({"has"});
            c.kind = K::has;
            c.index = lookup(spec_->item_index, r.at("has"), "item");
        } else if (r.has("scene")) {
            r.only({"scene"});
            c.kind = K::scene;
            c.index = lookup(spec_->scene_index, r.at("scene"), "scene");
        } else if (r.has("counter")) {
            r.only({"counter", "op", "value"});
            c.kind = K::counter;
            c.index = lookup(spec_->counter_index, r.at("counter"), "counter");
            c.op = read_op(r.at("op"));
            c.value = r.at("value").int32();
        } else if (r.has("all") || r.has("any")) {
            const bool all = r.has("all");
            r.only({all ? "all" : "any"});
            c.kind = all ? K::all : K::any;
            for (const auto& ch : r.at(all ? "all" : "any").elements()) c.children.push_back(condition(ch));
        } else if (r.has("not")) {
            r.only({"not"});
            c.kind = K::negate;
            c.children.push_back(condition(r.at("not")));
        } else {
            r.fail("unrecognised condition");
        }
        return c;
    }

    Evidence evidence(const JsonReader& r) {
        using K = Evidence::Kind;
        const Json& j = r.json();
        if (j.is_boolean()) return Evidence{j.get<bool>() ? K::always : K::never};
        r.expect_object();
        Evidence e;
        if (r.has("visible")) {
            r.only({"visible"});
            e.kind = K::visible;
            e.ref = r.at("visible").str();
            if (!spec_->element_index.count(e.ref)) dangling(r.at("visible"), "element", e.ref);
        } else if (r.has("hud")) {
            r.only({"hud", "op", "value"});
            e.kind = K::hud;
            e.ref = r.at("hud").str();
            if (!spec_->counter_index.count(e.ref)) dangling(r.at("hud"), "counter", e.ref);
            e.op = read_op(r.at("op"));
            e.value = r.at("value").number();
        } else if (r.has("inventory")) {
            r.only({"inventory"});
            e.kind = K::inventory;
            e.ref = r.at("inventory").str();
        } else if (r.has("text")) {
            r.only({"text", "contains"});
            e.kind = K::text;
            e.ref = r.at("text").str();
            if (!spec_->element_index.count(e.ref)) dangling(r.at("text"), "element", e.ref);
            e.text = r.at("contains").str();
        } else if (r.has("all") || r.has("any")) {
            const bool all = r.has("all");
            r.only({all ? "all" : "any"});
            e.kind = all ? K::all : K::any;
            for (const auto& ch : r.at(all ? "all" : "any").elements()) e.children.push_back(evidence(ch));
        } else if (r.has("not")) {
            r.only({"not"});
            e.kind = K::negate;
            e.children.push_back(evidence(r.at("not")));
        } else {
            r.fail("unrecognised evidence");
        }
        return e;
    }

    JsonReader root_;
    std::shared_ptr<GameSpec> spec_;
    int element_count_ = 0;
};

}  // namespace

SpecPtr load_spec(const Json& document, const LoadOptions& options) {
    std::shared_ptr<const GameSpec> spec = Loader(document).run();
    if (options.verify) {
        try {
            (void)oracle_solve(spec, OracleOptions{options.node_cap});
        } catch (const Unsolvable& e) {
            throw UnreachableSuccess(spec->game_id + ": " + e.what());
        }
    }
    return spec;
}

SpecPtr load_spec_text(std::string_view text, const LoadOptions& options) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw SchemaError("$: document is not valid JSON");
    return load_spec(doc, options);
}

SpecPtr load_spec_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open spec file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_spec_text(ss.str(), options);
}

}  // namespace coast::sim
