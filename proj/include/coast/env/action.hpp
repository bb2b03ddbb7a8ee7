#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "coast/util/json.hpp"

namespace coast::env {

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

// Axis-aligned rectangle in canvas units; contains [x, x+w) x [y, y+h).
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool contains(Point p) const { return p.x >= x && p.x < x + w && p.y >= y && p.y < y + h; }
    bool within(const Rect& outer) const {
        return x >= outer.x && y >= outer.y && x + w <= outer.x + outer.w &&
               y + h <= outer.y + outer.h;
    }
    long long area() const { return static_cast<long long>(w) * h; }
    Point center() const { return {x + w / 2, y + h / 2}; }
    bool operator==(const Rect&) const = default;
};

struct Viewport {
    int width = 800;
    int height = 600;
    Rect rect() const { return {0, 0, width, height}; }
    bool operator==(const Viewport&) const = default;
};

enum class ActionKind {
    left_click,
    right_click,
    middle_click,
    double_click,
    triple_click,
    drag,
    scroll,
    key_press,
    type_text,
    hold_key,
    finish,
};

enum class ScrollDirection { up, down, left, right };

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> action_kind_from_string(std::string_view name);
std::string_view to_string(ScrollDirection dir);
std::optional<ScrollDirection> scroll_direction_from_string(std::string_view name);

bool is_click(ActionKind kind);

struct Click {
    ActionKind button = ActionKind::left_click;  // one of the five click kinds
    Point at;
    bool operator==(const Click&) const = default;
};
struct Drag {
    Point from;
    Point to;
    bool operator==(const Drag&) const = default;
};
struct Scroll {
    ScrollDirection direction = ScrollDirection::down;
    int amount = 1;
    bool operator==(const Scroll&) const = default;
};
struct KeyPress {
    std::string key;
    bool operator==(const KeyPress&) const = default;
};
struct TypeText {
    std::string text;
    bool operator==(const TypeText&) const = default;
};
struct HoldKey {
    std::string key;
    double seconds = 0.0;
    bool operator==(const HoldKey&) const = default;
};
struct Finish {
    bool operator==(const Finish&) const = default;
};

// One GUI input from the unified action vocabulary.
struct Action {
    std::variant<Click, Drag, Scroll, KeyPress, TypeText, HoldKey, Finish> input;

    ActionKind kind() const;
    bool operator==(const Action&) const = default;

    static Action click(ActionKind button, int x, int y) { return {Click{button, {x, y}}}; }
    static Action left_click(int x, int y) { return click(ActionKind::left_click, x, y); }
    static Action drag(Point from, Point to) { return {Drag{from, to}}; }
    static Action scroll(ScrollDirection dir, int amount) { return {Scroll{dir, amount}}; }
    static Action key_press(std::string key) { return {KeyPress{std::move(key)}}; }
    static Action type_text(std::string text) { return {TypeText{std::move(text)}}; }
    static Action hold_key(std::string key, double seconds) { return {HoldKey{std::move(key), seconds}}; }
    static Action finish() { return {Finish{}}; }
};

// Human-readable form, e.g. "left_click(10, 10)".
std::string describe(const Action& action);

Json to_json(const Action& action);
// Strict decoding: unknown keys and malformed parameters throw SchemaError.
Action action_from_json(const Json& value, const std::string& path = "$");

// Returns the rejection reason, or nullopt when the action is acceptable
// for the viewport. Never throws.
std::optional<std::string> validate_action(const Action& action, const Viewport& viewport);

}  // namespace coast::env
