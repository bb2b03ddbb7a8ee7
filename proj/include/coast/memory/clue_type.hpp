#pragma once

#include <optional>
#include <string_view>

namespace coast::memory {

// Closed set of clue categories used by the seeker schema.
enum class ClueType { item, note, code, visual_cue, status, conversation };

std::string_view to_string(ClueType type);
std::optional<ClueType> clue_type_from_string(std::string_view name);

}  // namespace coast::memory
