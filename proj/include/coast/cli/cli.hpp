#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coast/scheduler/scheduler.hpp"

namespace coast::cli {

enum ExitCode : int {
    kOk = 0,
    kFault = 1,
    kUsage = 2,
    kSpecError = 3,
    kHashMismatch = 4,
    kDivergence = 5,
};

// Entry point shared by the `coast` binary and the tests. `args` excludes
// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// RunConfig fields a caller may pin; everything else comes from the spec.
struct Overrides {
    std::optional<scheduler::Mode> mode;
    std::optional<int> max_steps;  // default: the spec's step budget
    std::optional<int> n_seek;
    std::optional<int> n_solve;
    std::optional<int> goal_cap;
    std::optional<int> solver_actions_per_goal;
    std::optional<bool> strict_success;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> task_query;
    std::optional<scheduler::HintSchedule> hints;
    // Schedule over the spec's own hints, used when `hints` is unset.
    std::optional<scheduler::HintSchedule::Trigger> hint_trigger;
    std::optional<int> hint_steps;
};

scheduler::RunConfig resolve_config(const sim::GameSpec& spec, const Overrides& overrides);

struct RemoteOptions {
    std::string model_name;
    int timeout_ms = 30000;
    int max_retries = 2;
};

// Backends: oracle, oracle_hint, random, remote.
std::unique_ptr<policy::Policy> make_backend(const std::string& name, const sim::SpecPtr& spec, std::uint64_t seed,
                                             const RemoteOptions& remote = {});

struct SuiteEntry {
    std::string spec_path;  // resolved against the suite file's directory
    std::string backend = "oracle";
    int repetitions = 1;
    Overrides overrides;
};

struct SuiteConfig {
    std::vector<SuiteEntry> entries;
    std::string output_dir;  // empty: write nothing
    int parallelism = 1;
};

// TOML: top-level output_dir, parallelism and [[episode]] tables.
SuiteConfig load_suite_file(const std::string& path);

struct SuiteEpisode {
    std::string spec_path;
    std::string backend;
    int repetition = 0;
    metrics::EpisodeReport report;
    std::string log;  // JSONL text
};

// Runs every episode with isolated state, up to `parallelism` at a time.
// Results come back in entry/repetition order whatever the parallelism.
std::vector<SuiteEpisode> run_suite(const SuiteConfig& config, int parallelism);

}  // namespace coast::cli
