#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coast/judge/judge.hpp"
#include "coast/metrics/metrics.hpp"
#include "coast/scheduler/trajectory.hpp"

namespace coast::scheduler {

COAST_DEFINE_ERROR(ConfigError);
COAST_DEFINE_ERROR(SpecHashMismatch);
COAST_DEFINE_ERROR(DigestDivergence);

enum class Mode { coast, baseline, seeker_only, seeker_solver };
enum class Verification { self_report, strict };

std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view name);

struct HintSchedule {
    enum class Trigger { stall, periodic };
    std::vector<std::string> hints;
    Trigger trigger = Trigger::stall;
    int steps = 100;  // stall threshold or period
};

Json to_json(const HintSchedule& schedule);
// {"trigger": "stall"|"periodic", "steps": n, "hints": [...]}
HintSchedule hint_schedule_from_json(const Json& value);

// Stateful trigger. Call once per t, in increasing t order, with the
// milestone status at that time. Hints are handed out in order, once each.
class HintInjector {
public:
    explicit HintInjector(HintSchedule schedule);
    std::optional<std::string> maybe_inject(const env::MilestoneStatus& status, int t);
    std::size_t fired() const { return next_; }

private:
    HintSchedule schedule_;
    std::size_t next_ = 0;
    int last_t_ = -1;
    int last_change_ = 0;
    std::optional<env::MilestoneStatus> last_status_;
};

// Pure form over a progress history (progress[i] = status after i steps):
// the hint fired at exactly t, if any.
std::optional<std::string> maybe_inject_hint(const HintSchedule& schedule,
                                             const std::vector<env::MilestoneStatus>& progress, int t);

struct RunConfig {
    std::string task_query;
    int max_steps = 1000;
    int n_seek = 15;
    int n_solve = 5;
    int goal_cap = 5;
    Mode mode = Mode::coast;
    int solver_actions_per_goal = 1;
    Verification verification = Verification::self_report;
    std::optional<HintSchedule> hints;
    std::uint64_t seed = 0;

    // Task query from the spec; (5, 2) seek/solve for visual novels and
    // simulations, (15, 5) otherwise.
    static RunConfig defaults_for(const sim::GameSpec& spec);
    // Throws ConfigError. max_steps = 0 is accepted (empty episode).
    void validate() const;
};

Json to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& value);

// Policies per role. One object may serve several roles.
struct PolicySet {
    policy::Policy* seek = nullptr;
    policy::Policy* map = nullptr;
    policy::Policy* solve = nullptr;
    policy::Policy* baseline = nullptr;

    static PolicySet all(policy::Policy& p) { return {&p, &p, &p, &p}; }
};

struct Episode {
    Trajectory trajectory;
    metrics::EpisodeReport report;
    memory::ClueMemory memory;
    std::vector<std::string> dispatched_goals;  // in dispatch order
    std::vector<std::string> resolved_goals;
};

Episode run_coast(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config);
Episode run_baseline(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config);
Episode run_ablation(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config);
// Dispatches on config.mode.
Episode run_episode(const sim::SpecPtr& spec, const PolicySet& policies, const RunConfig& config);

// JSONL: header, then transcript and step records, then an end record
// with the final state.
void write_log(std::ostream& out, const sim::GameSpec& spec, const RunConfig& config, const Episode& episode,
               const std::string& spec_path = "");

struct LogHeader {
    std::string spec_hash;
    std::string game_id;
    std::string spec_path;
    RunConfig config;
};

struct ReplayResult {
    bool clean = true;
    std::optional<int> divergence_index;  // step record index
    std::optional<int> divergence_t;
    std::string message;
    int steps_checked = 0;
};

LogHeader read_log_header(std::istream& in);
// Re-executes the logged actions on a fresh environment. Throws
// SpecHashMismatch; divergence is reported in the result.
ReplayResult replay_log(const sim::SpecPtr& spec, std::istream& in);

}  // namespace coast::scheduler
