#include "coast/env/observation.hpp"

#include <algorithm>
#include <array>

#include "coast/util/hash.hpp"

namespace coast::env {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 9> kEventNames{{
    {EventKind::item_acquired, "item_acquired"},
    {EventKind::lock_opened, "lock_opened"},
    {EventKind::dialogue_shown, "dialogue_shown"},
    {EventKind::score_changed, "score_changed"},
    {EventKind::milestone_reached, "milestone_reached"},
    {EventKind::terminal_success, "terminal_success"},
    {EventKind::no_effect, "no_effect"},
    {EventKind::clue_observed, "clue_observed"},
    {EventKind::clue_used, "clue_used"},
}};

Json rect_json(const Rect& r) { return Json::array({r.x, r.y, r.w, r.h}); }

}  // namespace

const VisibleElement* Observation::find(std::string_view element_id) const {
    for (const auto& e : visible_elements) {
        if (e.id == element_id) return &e;
    }
    return nullptr;
}

Json to_json(const Observation& obs) {
    Json elements = Json::array();
    for (const auto& e : obs.visible_elements) {
        Json je{{"id", e.id}, {"label", e.label}, {"kind", e.kind}, {"rect", rect_json(e.rect)}};
        if (e.text) je["text"] = *e.text;
        elements.push_back(std::move(je));
    }
    Json j{{"step_index", obs.step_index},
           {"scene_label", obs.scene_label},
           {"visible_elements", std::move(elements)},
           {"inventory_view", obs.inventory_view},
           {"hud_values", obs.hud_values}};
    j["dialogue_text"] = obs.dialogue_text ? Json(*obs.dialogue_text) : Json(nullptr);
    return j;
}

Observation observation_from_json(const Json& value) {
    util::JsonReader r(value, "$");
    r.only({"step_index", "scene_label", "visible_elements", "inventory_view", "hud_values",
            "dialogue_text"});
    Observation obs;
    obs.step_index = r.at("step_index").int32();
    obs.scene_label = r.at("scene_label").str();
    for (const auto& e : r.at("visible_elements").elements()) {
        e.only({"id", "label", "kind", "rect", "text"});
        VisibleElement ve;
        ve.id = e.at("id").str();
        ve.label = e.at("label").str();
        ve.kind = e.at("kind").str();
        auto rect = e.at("rect").elements();
        if (rect.size() != 4) e.at("rect").fail("expected [x, y, w, h]");
        ve.rect = {rect[0].int32(), rect[1].int32(), rect[2].int32(), rect[3].int32()};
        if (auto t = e.maybe("text")) ve.text = t->str();
        obs.visible_elements.push_back(std::move(ve));
    }
    obs.inventory_view = r.at("inventory_view").strings();
    auto hud = r.at("hud_values");
    hud.expect_object();
    for (const auto& [k, v] : hud.json().items()) {
        obs.hud_values[k] = util::JsonReader(v, hud.path() + "." + k).number();
    }
    if (auto d = r.maybe("dialogue_text")) obs.dialogue_text = d->str();
    return obs;
}

std::string digest(const Observation& obs) { return util::digest_hex(util::canonical_dump(to_json(obs))); }

std::string_view to_string(EventKind kind) {
    for (const auto& [k, name] : kEventNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kEventNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

Json to_json(const Event& event) {
    Json j{{"kind", std::string(to_string(event.kind))}};
    if (!event.subject.empty()) j["subject"] = event.subject;
    if (event.kind == EventKind::score_changed) j["delta"] = event.delta;
    if (event.kind == EventKind::clue_observed || event.kind == EventKind::clue_used) {
        j["step"] = event.step;
    }
    return j;
}

Event event_from_json(const Json& value) {
    util::JsonReader r(value, "$");
    r.only({"kind", "subject", "delta", "step"});
    Event e;
    const auto name = r.at("kind").str();
    auto kind = event_kind_from_string(name);
    if (!kind) r.at("kind").fail("unknown event kind '" + name + "'");
    e.kind = *kind;
    e.subject = r.str_or("subject", "");
    e.delta = r.number_or("delta", 0.0);
    e.step = static_cast<int>(r.integer_or("step", 0));
    return e;
}

bool is_meaningful(EventKind kind) {
    return kind == EventKind::item_acquired || kind == EventKind::lock_opened ||
           kind == EventKind::score_changed || kind == EventKind::milestone_reached;
}

bool StepOutcome::has(EventKind kind) const {
    return std::any_of(events.begin(), events.end(), [&](const Event& e) { return e.kind == kind; });
}

int MilestoneStatus::achieved_count() const {
    return static_cast<int>(std::count_if(discrete.begin(), discrete.end(),
                                          [](const DiscreteMilestone& m) { return m.achieved; }));
}

int MilestoneStatus::achieved_prefix() const {
    int n = 0;
    for (const auto& m : discrete) {
        if (!m.achieved) break;
        ++n;
    }
    return n;
}

double MilestoneStatus::continuous_raw() const {
    return continuous.empty() ? 0.0 : continuous.front().raw;
}

Json to_json(const MilestoneStatus& status) {
    Json discrete = Json::array();
    for (const auto& m : status.discrete) discrete.push_back({{"id", m.id}, {"achieved", m.achieved}});
    Json continuous = Json::array();
    for (const auto& c : status.continuous) {
        continuous.push_back({{"milestone", c.milestone_id},
                              {"counter", c.counter},
                              {"raw", c.raw},
                              {"normalizer", c.normalizer},
                              {"normalizer_source", c.normalizer_source}});
    }
    return {{"discrete", discrete}, {"continuous", continuous}};
}

std::optional<std::size_t> hit_test(std::span<const HitCandidate> candidates, Point p) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (!c.rect.contains(p)) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = candidates[*best];
        if (c.rect.area() != b.rect.area()) {
            if (c.rect.area() < b.rect.area()) best = i;
        } else if (c.z != b.z) {
            if (c.z > b.z) best = i;
        } else if (c.order_key < b.order_key) {
            best = i;
        }
    }
    return best;
}

}  // namespace coast::env
