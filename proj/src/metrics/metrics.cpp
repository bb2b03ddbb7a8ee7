#include "coast/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "coast/scheduler/scheduler.hpp"
#include "coast/util/csv.hpp"

namespace coast::metrics {
namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

bool EpisodeReport::operator==(const EpisodeReport& o) const {
    return to_json(*this, false) == to_json(o, false);
}

Json to_json(const EpisodeReport& r, bool include_wall_time) {
    Json j{{"game_id", r.game_id}, {"genre", r.genre},     {"mode", r.mode},
           {"success", r.success}, {"mcr", r.mcr},         {"steps", r.steps},
           {"seed", r.seed},       {"verdict", judge::to_json(r.verdict)}};
    if (include_wall_time) j["wall_time"] = r.wall_time;
    return j;
}

EpisodeReport report_from_json(const Json& value) {
    util::JsonReader r(value, "$");
    EpisodeReport out;
    out.game_id = r.at("game_id").str();
    out.genre = r.at("genre").str();
    out.mode = r.at("mode").str();
    out.success = r.at("success").boolean();
    out.mcr = r.at("mcr").number();
    out.steps = r.at("steps").int32();
    out.seed = static_cast<std::uint64_t>(r.integer_or("seed", 0));
    out.wall_time = r.number_or("wall_time", 0.0);
    if (r.has("verdict")) {
        out.verdict = judge::verdict_from_json(r.at("verdict").json(), "$.verdict");
    } else {
        out.verdict.score = out.mcr;
    }
    return out;
}

EpisodeReport compute_report(const scheduler::Trajectory& trajectory, const judge::JudgeVerdict& verdict,
                             const scheduler::RunConfig& config, const sim::GameSpec& spec) {
    EpisodeReport r;
    r.game_id = spec.game_id;
    r.genre = std::string(sim::to_string(spec.genre));
    r.mode = std::string(scheduler::to_string(config.mode));
    for (const auto& s : trajectory.steps) {
        for (const auto& e : s.events) r.success = r.success || e.kind == env::EventKind::terminal_success;
    }
    r.mcr = verdict.score;
    r.steps = trajectory.t;
    r.verdict = verdict;
    r.seed = config.seed;
    return r;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sample_std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

GapAnalysis obs_behavior_gaps(std::span<const env::Event> clue_events) {
    GapAnalysis out;
    std::map<std::string, int> seen;
    std::map<std::string, bool> acted;
    for (const auto& e : clue_events) {
        if (e.kind == env::EventKind::clue_observed) {
            seen.emplace(e.subject, e.step);  // first sighting wins
        } else if (e.kind == env::EventKind::clue_used) {
            if (acted[e.subject]) continue;
            acted[e.subject] = true;
            auto it = seen.find(e.subject);
            if (it == seen.end() || it->second > e.step) {
                out.unmatched.push_back(e.subject);
                continue;
            }
            out.records.push_back({e.subject, it->second, e.step, e.step - it->second});
        }
    }
    std::vector<double> gaps;
    for (const auto& r : out.records) gaps.push_back(r.gap);
    out.summary = summarize(gaps);
    return out;
}

GapAnalysis obs_behavior_gaps(const scheduler::Trajectory& trajectory) {
    const auto events = trajectory.all_events();
    return obs_behavior_gaps(events);
}

MultiRunGaps aggregate_gaps(const std::vector<GameGaps>& games) {
    MultiRunGaps out;
    std::vector<double> game_means;
    for (const auto& g : games) {
        std::map<std::string, std::pair<double, int>> per_clue;
        std::vector<std::string> order;
        for (const auto& run : g.runs) {
            for (const auto& [clue, gap] : run) {
                auto [it, fresh] = per_clue.try_emplace(clue, 0.0, 0);
                if (fresh) order.push_back(clue);
                it->second.first += gap;
                it->second.second += 1;
            }
        }
        std::vector<double> clue_means;
        for (const auto& c : order) clue_means.push_back(per_clue[c].first / per_clue[c].second);
        auto s = summarize(clue_means);
        out.per_game.emplace_back(g.game, s);
        if (s.n > 0) game_means.push_back(s.mean);
    }
    out.overall = summarize(game_means);
    return out;
}

std::optional<GroupBy> group_by_from_string(std::string_view name) {
    if (name == "none") return GroupBy::none;
    if (name == "subgenre") return GroupBy::subgenre;
    if (name == "mode") return GroupBy::mode;
    if (name == "game") return GroupBy::game;
    return std::nullopt;
}

std::vector<SummaryRow> aggregate(const std::vector<EpisodeReport>& reports, GroupBy group_by) {
    if (reports.empty()) throw std::invalid_argument("aggregate needs at least one report");
    std::map<std::string, std::vector<const EpisodeReport*>> groups;
    for (const auto& r : reports) {
        std::string key;
        switch (group_by) {
            case GroupBy::none: key = "all"; break;
            case GroupBy::subgenre: key = r.genre; break;
            case GroupBy::mode: key = r.mode; break;
            case GroupBy::game: key = r.game_id; break;
        }
        groups[key].push_back(&r);
    }
    std::vector<SummaryRow> rows;
    for (const auto& [key, members] : groups) {
        std::vector<double> sr, mcr, steps;
        for (const auto* r : members) {
            sr.push_back(r->success ? 1.0 : 0.0);
            mcr.push_back(r->mcr);
            steps.push_back(r->steps);
        }
        const auto m = summarize(mcr), st = summarize(steps);
        rows.push_back({key, members.size(), summarize(sr).mean, m.mean, st.mean, m.sample_std, st.sample_std});
    }
    return rows;
}

std::string suite_summary_csv(const std::vector<EpisodeReport>& reports) {
    std::map<std::pair<std::string, std::string>, std::vector<EpisodeReport>> groups;
    for (const auto& r : reports) groups[{r.game_id, r.mode}].push_back(r);
    std::string out = "game,mode,sr,mcr,steps\n";
    for (const auto& [key, members] : groups) {
        const auto row = aggregate(members, GroupBy::none).front();
        out += util::csv_field(key.first) + "," + util::csv_field(key.second) + "," + fmt(row.sr) + "," +
               fmt(row.mcr) + "," + fmt(row.steps) + "\n";
    }
    return out;
}

std::string plot_data_csv(const std::vector<EpisodeReport>& reports) {
    std::map<std::pair<std::string, std::string>, std::vector<EpisodeReport>> groups;
    for (const auto& r : reports) groups[{r.genre, r.mode}].push_back(r);
    std::string out = "subgenre,mode,n,sr,mcr,mcr_std,steps\n";
    for (const auto& [key, members] : groups) {
        const auto row = aggregate(members, GroupBy::none).front();
        out += util::csv_field(key.first) + "," + util::csv_field(key.second) + "," + std::to_string(row.n) + "," +
               fmt(row.sr) + "," + fmt(row.mcr) + "," + fmt(row.mcr_std) + "," + fmt(row.steps) + "\n";
    }
    return out;
}

}  // namespace coast::metrics
