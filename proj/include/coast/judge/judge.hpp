#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coast/sim/env_state.hpp"

namespace coast::judge {

COAST_DEFINE_ERROR(ProbeError);
COAST_DEFINE_ERROR(MissingCounter);
COAST_DEFINE_ERROR(LengthMismatch);
COAST_DEFINE_ERROR(DegenerateVariance);

struct ProbeRecord {
    std::string milestone;
    env::Action action;
    std::string obs_digest;
    bool operator==(const ProbeRecord&) const = default;
};

struct JudgeVerdict {
    sim::MilestoneKind strategy = sim::MilestoneKind::sequential;
    int achieved = 0;  // K_m
    int total = 0;     // N_m
    double score = 0.0;
    std::vector<ProbeRecord> probe_trace;
    std::vector<env::ContinuousReading> readings;  // continuous only
    std::vector<bool> verified;                    // per milestone checked, in order
    bool operator==(const JudgeVerdict&) const = default;
};

Json to_json(const JudgeVerdict& verdict);
// Throws SchemaError.
JudgeVerdict verdict_from_json(const Json& value, const std::string& path = "$");

// Each milestone is checked on a fresh clone of the final state: run its
// probe, then test its evidence on the resulting observation. The scored
// state is never touched.
JudgeVerdict judge_sequential(const sim::EnvState& final_state, const std::vector<const sim::MilestoneDef*>& milestones);
JudgeVerdict judge_counting(const sim::EnvState& final_state, const std::vector<const sim::MilestoneDef*>& milestones);
JudgeVerdict judge_continuous(const sim::EnvState& final_state, const sim::MilestoneDef& milestone);

// Uses the spec's declared strategy over all its milestones.
JudgeVerdict judge(const sim::EnvState& final_state);

// Ground-truth score from milestone_vector, for cross-checking the judge.
double direct_score(const sim::EnvState& state);

// Scores over a status vector: verified prefix vs total count.
double sequential_score(const std::vector<bool>& statuses);
double counting_score(const std::vector<bool>& statuses);
double continuous_score(std::span<const double> raw, std::span<const double> normalizers);

struct AgreementStats {
    std::size_t samples = 0;
    std::size_t matches = 0;
    double accuracy = 0.0;
    std::optional<double> spearman;
    std::optional<double> pearson;
    std::string note;  // why a correlation is missing
};

Json to_json(const AgreementStats& stats);

// Throws LengthMismatch for unequal or empty inputs. Zero-variance input
// leaves the correlations empty and says so in `note`.
AgreementStats judge_agreement(std::span<const double> judged, std::span<const double> human);

// Both throw DegenerateVariance when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

// Agreement CSV: either per-sample rows (game, judged_level, human_level)
// or per-game count rows (game, correct, total). Count rows give accuracy
// only.
AgreementStats agreement_from_csv(const std::string& text);

}  // namespace coast::judge
