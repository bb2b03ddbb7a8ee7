#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coast/util/csv.hpp"

namespace coast::test {

inline std::string read_data(const std::string& name) {
    std::ifstream in(std::string(COAST_DATA_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Human observation-behavior gaps: four clue gaps per game plus the
// printed per-game average.
struct GapRow {
    std::string game;
    std::vector<double> gaps;
    double printed_mean = 0.0;
};

inline std::vector<GapRow> gap_table() {
    std::vector<GapRow> out;
    const auto rows = util::parse_csv(read_data("human_gaps.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        GapRow r;
        r.game = rows[i][0];
        for (int k = 1; k <= 4; ++k) r.gaps.push_back(std::stod(rows[i][k]));
        r.printed_mean = std::stod(rows[i][5]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace coast::test
