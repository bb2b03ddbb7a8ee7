#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coast::util {

// Lower-cases ASCII, trims, and collapses internal whitespace runs to one space.
std::string normalize_key(std::string_view text);

std::string trim(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace coast::util
