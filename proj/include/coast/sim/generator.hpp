#pragma once

#include <cstdint>
#include <string>

#include "coast/sim/game_spec.hpp"

namespace coast::sim {

COAST_DEFINE_ERROR(GenerationBudgetExceeded);

struct GeneratorParams {
    int n_scenes = 5;
    int n_clues = 8;
    int chain_length = 4;
    int target_gap_lower_bound = 50;
    Genre genre = Genre::mystery;
    std::uint64_t seed = 0;
    int max_attempts = 8;
};

struct GeneratedGame {
    Json document;       // pretty-print with dump(2) for a byte-stable file
    SpecPtr spec;        // loaded with verification
    int plan_length = 0;
    int head_gap = 0;    // measured on the oracle plan
    std::string head_clue;
};

// Builds a linear run of scenes with a clue chain: a code note in the first
// scene, items that must be taken in order, and a keypad in the last scene
// that takes the code once the chain is complete. A winch in the last scene
// adds required work until the oracle plan's head-clue gap reaches the
// target. Throws std::invalid_argument for bad parameters and
// GenerationBudgetExceeded when the target cannot be met.
GeneratedGame generate(const GeneratorParams& params);

// Oracle-plan playthrough: gap between the head clue's first sighting and
// its first use.
int measure_head_gap(const SpecPtr& spec, const std::string& head_clue);

}  // namespace coast::sim
