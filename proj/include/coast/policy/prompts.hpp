#pragma once

#include <string>
#include <string_view>

#include "coast/policy/policy.hpp"

namespace coast::policy {

// Template ids: "basic", "seeker", "mapper", "solver".
std::string_view prompt_template_id(Role role);
// Raw template text with {placeholders}; throws std::out_of_range for an unknown id.
std::string_view prompt_template(std::string_view id);

// Fills the role's template from the call context.
std::string render_prompt(Role role, const PolicyContext& context);

}  // namespace coast::policy
