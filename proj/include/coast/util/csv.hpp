#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coast::util {

// RFC 4180-ish: quoted fields, doubled quotes, CRLF or LF. Blank lines skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Quotes the field only when it needs it.
std::string csv_field(std::string_view value);

}  // namespace coast::util
