#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coast/judge/judge.hpp"

namespace coast::scheduler {
struct Trajectory;
struct RunConfig;
}  // namespace coast::scheduler

namespace coast::metrics {

COAST_DEFINE_ERROR(UnmatchedUse);

struct EpisodeReport {
    std::string game_id;
    std::string genre;
    std::string mode;
    bool success = false;
    double mcr = 0.0;
    int steps = 0;
    judge::JudgeVerdict verdict;
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // seconds; excluded from equality
    bool operator==(const EpisodeReport& other) const;
};

Json to_json(const EpisodeReport& report, bool include_wall_time = true);

EpisodeReport compute_report(const scheduler::Trajectory& trajectory, const judge::JudgeVerdict& verdict,
                             const scheduler::RunConfig& config, const sim::GameSpec& spec);

struct GapRecord {
    std::string clue;
    int first_observed_step = 0;
    int first_acted_step = 0;
    int gap = 0;
};

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double sample_std = 0.0;  // n - 1 denominator; 0 when n < 2
};

Summary summarize(std::span<const double> values);

struct GapAnalysis {
    std::vector<GapRecord> records;         // in order of first use
    std::vector<std::string> unmatched;     // used before any sighting
    Summary summary;
};

// First sighting and first use per clue, from clue_observed / clue_used
// events. A use with no earlier sighting is reported in `unmatched` and
// left out of the summary.
GapAnalysis obs_behavior_gaps(std::span<const env::Event> clue_events);
GapAnalysis obs_behavior_gaps(const scheduler::Trajectory& trajectory);

// Several runs per game: each clue is averaged over the runs that used it,
// each game over its clues, then games are summarized.
struct GameGaps {
    std::string game;
    std::vector<std::map<std::string, double>> runs;  // clue -> gap, per run
};

struct MultiRunGaps {
    std::vector<std::pair<std::string, Summary>> per_game;  // over clue means
    Summary overall;                                         // over game means
};

MultiRunGaps aggregate_gaps(const std::vector<GameGaps>& games);

enum class GroupBy { none, subgenre, mode, game };

std::optional<GroupBy> group_by_from_string(std::string_view name);

struct SummaryRow {
    std::string group;
    std::size_t n = 0;
    double sr = 0.0;
    double mcr = 0.0;
    double steps = 0.0;
    double mcr_std = 0.0;
    double steps_std = 0.0;
};

// Rows sorted by group key; throws std::invalid_argument on empty input.
std::vector<SummaryRow> aggregate(const std::vector<EpisodeReport>& reports, GroupBy group_by);

// game,mode,sr,mcr,steps; one row per (game, mode), sorted.
std::string suite_summary_csv(const std::vector<EpisodeReport>& reports);
// subgenre,mode,n,sr,mcr,mcr_std,steps
std::string plot_data_csv(const std::vector<EpisodeReport>& reports);

EpisodeReport report_from_json(const Json& value);

}  // namespace coast::metrics
