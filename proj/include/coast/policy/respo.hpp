#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coast/env/action.hpp"
#include "coast/memory/memory.hpp"

namespace coast::policy {

enum class Role { seek, map, solve, baseline };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view name);

struct MappingResult {
    std::string clue;
    std::string related_memory;
    std::string goal;
    std::string reasoning;
    bool operator==(const MappingResult&) const = default;
};

struct SeekerResponse {
    std::vector<memory::Clue> clues;
    std::vector<memory::EpisodicRecord> episodic_memory;
    env::Action proposed_action;
};

struct MapperResponse {
    std::vector<memory::GoalCandidate> candidates;  // at most kMapperSelfCap
};

struct SolverResponse {
    std::vector<memory::EpisodicRecord> episodic_memory;  // at least one
    std::vector<MappingResult> mapping_result;
    bool success = false;
    env::Action proposed_action;
};

// Plain agent reply: one action. A bare "[Done]" maps to finish.
struct BaselineResponse {
    env::Action proposed_action;
    std::string reasoning;
};

struct Discarded {
    std::string reason;
};

using Parsed = std::variant<SeekerResponse, MapperResponse, SolverResponse, BaselineResponse, Discarded>;

inline constexpr std::size_t kMapperSelfCap = 5;

// Total over arbitrary text: every failure is a Discarded, never a throw.
Parsed parse_respo(Role role, std::string_view raw);

inline bool is_discarded(const Parsed& p) { return std::holds_alternative<Discarded>(p); }

// The executable action carried by a parsed reply, if any.
std::optional<env::Action> proposed_action(const Parsed& parsed);

// Serialized bodies wrapped in <RESPO> tags; parse_respo accepts them back.
std::string render_respo(const SeekerResponse& r);
std::string render_respo(const MapperResponse& r);
std::string render_respo(const SolverResponse& r);
std::string render_respo(const BaselineResponse& r);

}  // namespace coast::policy
