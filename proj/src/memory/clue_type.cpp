#include "coast/memory/clue_type.hpp"

#include <array>
#include <utility>

namespace coast::memory {
namespace {

constexpr std::array<std::pair<ClueType, std::string_view>, 6> kNames{{
    {ClueType::item, "item"},
    {ClueType::note, "note"},
    {ClueType::code, "code"},
    {ClueType::visual_cue, "visual cue"},
    {ClueType::status, "status"},
    {ClueType::conversation, "conversation"},
}};

}  // namespace

std::string_view to_string(ClueType type) {
    for (const auto& [t, name] : kNames) {
        if (t == type) return name;
    }
    return "item";
}

std::optional<ClueType> clue_type_from_string(std::string_view name) {
    for (const auto& [t, n] : kNames) {
        if (n == name) return t;
    }
    return std::nullopt;
}

}  // namespace coast::memory
