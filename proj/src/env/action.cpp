#include "coast/env/action.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "coast/util/error.hpp"

namespace coast::env {
namespace {

constexpr std::array<std::pair<ActionKind, std::string_view>, 11> kKindNames{{
    {ActionKind::left_click, "left_click"},
    {ActionKind::right_click, "right_click"},
    {ActionKind::middle_click, "middle_click"},
    {ActionKind::double_click, "double_click"},
    {ActionKind::triple_click, "triple_click"},
    {ActionKind::drag, "drag"},
    {ActionKind::scroll, "scroll"},
    {ActionKind::key_press, "key_press"},
    {ActionKind::type_text, "type_text"},
    {ActionKind::hold_key, "hold_key"},
    {ActionKind::finish, "finish"},
}};

constexpr std::array<std::pair<ScrollDirection, std::string_view>, 4> kDirNames{{
    {ScrollDirection::up, "up"},
    {ScrollDirection::down, "down"},
    {ScrollDirection::left, "left"},
    {ScrollDirection::right, "right"},
}};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Point read_point(const util::JsonReader& r, std::string_view kx, std::string_view ky) {
    return {r.at(kx).int32(), r.at(ky).int32()};
}

}  // namespace

std::string_view to_string(ActionKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<ActionKind> action_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(ScrollDirection dir) {
    for (const auto& [d, name] : kDirNames) {
        if (d == dir) return name;
    }
    return "unknown";
}

std::optional<ScrollDirection> scroll_direction_from_string(std::string_view name) {
    for (const auto& [d, n] : kDirNames) {
        if (n == name) return d;
    }
    return std::nullopt;
}

bool is_click(ActionKind kind) {
    switch (kind) {
        case ActionKind::left_click:
        case ActionKind::right_click:
        case ActionKind::middle_click:
        case ActionKind::double_click:
        case ActionKind::triple_click:
            return true;
        default:
            return false;
    }
}

ActionKind Action::kind() const {
    return std::visit(overloaded{
                          [](const Click& c) { return c.button; },
                          [](const Drag&) { return ActionKind::drag; },
                          [](const Scroll&) { return ActionKind::scroll; },
                          [](const KeyPress&) { return ActionKind::key_press; },
                          [](const TypeText&) { return ActionKind::type_text; },
                          [](const HoldKey&) { return ActionKind::hold_key; },
                          [](const Finish&) { return ActionKind::finish; },
                      },
                      input);
}

std::string describe(const Action& action) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Click& c) {
                       os << to_string(c.button) << "(" << c.at.x << ", " << c.at.y << ")";
                   },
                   [&](const Drag& d) {
                       os << "drag(" << d.from.x << ", " << d.from.y << ", " << d.to.x << ", "
                          << d.to.y << ")";
                   },
                   [&](const Scroll& s) {
                       os << "scroll(" << to_string(s.direction) << ", " << s.amount << ")";
                   },
                   [&](const KeyPress& k) { os << "key_press(" << k.key << ")"; },
                   [&](const TypeText& t) { os << "type_text(" << Json(t.text).dump() << ")"; },
                   [&](const HoldKey& h) { os << "hold_key(" << h.key << ", " << h.seconds << ")"; },
                   [&](const Finish&) { os << "finish"; },
               },
               action.input);
    return os.str();
}

Json to_json(const Action& action) {
    Json j;
    j["type"] = std::string(to_string(action.kind()));
    std::visit(overloaded{
                   [&](const Click& c) {
                       j["x"] = c.at.x;
                       j["y"] = c.at.y;
                   },
                   [&](const Drag& d) {
                       j["x1"] = d.from.x;
                       j["y1"] = d.from.y;
                       j["x2"] = d.to.x;
                       j["y2"] = d.to.y;
                   },
                   [&](const Scroll& s) {
                       j["direction"] = std::string(to_string(s.direction));
                       j["amount"] = s.amount;
                   },
                   [&](const KeyPress& k) { j["key"] = k.key; },
                   [&](const TypeText& t) { j["text"] = t.text; },
                   [&](const HoldKey& h) {
                       j["key"] = h.key;
                       j["duration"] = h.seconds;
                   },
                   [&](const Finish&) {},
               },
               action.input);
    return j;
}

Action action_from_json(const Json& value, const std::string& path) {
    util::JsonReader r(value, path);
    r.expect_object();
    const std::string type = r.at("type").str();
    auto kind = action_kind_from_string(type);
    if (!kind) r.at("type").fail("unknown action type '" + type + "'");

    if (is_click(*kind)) {
        r.only({"type", "x", "y"});
        return Action::click(*kind, r.at("x").int32(), r.at("y").int32());
    }
    switch (*kind) {
        case ActionKind::drag:
            r.only({"type", "x1", "y1", "x2", "y2"});
            return Action::drag(read_point(r, "x1", "y1"), read_point(r, "x2", "y2"));
        case ActionKind::scroll: {
            r.only({"type", "direction", "amount"});
            const std::string d = r.at("direction").str();
            auto dir = scroll_direction_from_string(d);
            if (!dir) r.at("direction").fail("unknown scroll direction '" + d + "'");
            return Action::scroll(*dir, r.at("amount").int32());
        }
        case ActionKind::key_press:
            r.only({"type", "key"});
            return Action::key_press(r.at("key").str());
        case ActionKind::type_text:
            r.only({"type", "text"});
            return Action::type_text(r.at("text").str());
        case ActionKind::hold_key:
            r.only({"type", "key", "duration"});
            return Action::hold_key(r.at("key").str(), r.at("duration").number());
        case ActionKind::finish:
            r.only({"type"});
            return Action::finish();
        default:
            break;
    }
    r.fail("unhandled action type");
}

std::optional<std::string> validate_action(const Action& action, const Viewport& viewport) {
    const Rect bounds = viewport.rect();
    auto check_point = [&](Point p) -> std::optional<std::string> {
        if (!bounds.contains(p)) {
            return "out of bounds: (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                   ") outside " + std::to_string(viewport.width) + "x" +
                   std::to_string(viewport.height) + " viewport";
        }
        return std::nullopt;
    };
    return std::visit(
        overloaded{
            [&](const Click& c) -> std::optional<std::string> {
                if (!is_click(c.button)) return "not a click kind";
                return check_point(c.at);
            },
            [&](const Drag& d) -> std::optional<std::string> {
                if (auto e = check_point(d.from)) return e;
                return check_point(d.to);
            },
            [&](const Scroll& s) -> std::optional<std::string> {
                if (s.amount <= 0) return std::string("non-positive amount");
                return std::nullopt;
            },
            [&](const KeyPress& k) -> std::optional<std::string> {
                if (k.key.empty()) return std::string("empty key name");
                return std::nullopt;
            },
            [&](const TypeText&) -> std::optional<std::string> { return std::nullopt; },
            [&](const HoldKey& h) -> std::optional<std::string> {
                if (h.key.empty()) return std::string("empty key name");
                if (!(h.seconds > 0.0) || !std::isfinite(h.seconds)) {
                    return std::string("non-positive duration");
                }
                return std::nullopt;
            },
            [&](const Finish&) -> std::optional<std::string> { return std::nullopt; },
        },
        action.input);
}

}  // namespace coast::env
