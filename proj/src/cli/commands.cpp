#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <toml.hpp>

#include "coast/cli/cli.hpp"
#include "coast/sim/generator.hpp"

namespace coast::cli {
namespace {

namespace fs = std::filesystem;

// Spec problems map to their own exit code.
struct SpecFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

sim::SpecPtr load_spec_or_fail(const std::string& path, bool verify = false) {
    try {
        return sim::load_spec_file(path, sim::LoadOptions{verify, 1'000'000});
    } catch (const Error& e) {
        throw SpecFailure(e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageFailure("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

Json parse_json_file(const std::string& path) {
    Json j = Json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw UsageFailure("'" + path + "' is not valid JSON");
    return j;
}

std::string episode_stem(const metrics::EpisodeReport& r) {
    return r.game_id + "_" + r.mode + "_seed" + std::to_string(r.seed);
}

struct EpisodeRun {
    scheduler::RunConfig config;
    scheduler::Episode episode;
    std::string log;
};

EpisodeRun run_one(const sim::SpecPtr& spec, const std::string& spec_path, const std::string& backend,
                   const Overrides& overrides, const RemoteOptions& remote) {
    EpisodeRun run;
    run.config = resolve_config(*spec, overrides);
    auto policy = make_backend(backend, spec, run.config.seed, remote);
    run.episode = scheduler::run_episode(spec, scheduler::PolicySet::all(*policy), run.config);
    std::ostringstream log;
    scheduler::write_log(log, *spec, run.config, run.episode, spec_path);
    run.log = log.str();
    return run;
}

// --- subcommands -----------------------------------------------------------

struct RunArgs {
    std::string spec, backend = "oracle", mode, out_dir = ".", log, report, dump_memory, hints, task;
    std::optional<int> max_steps, n_seek, n_solve, k, solver_actions, hint_stall, hint_period;
    std::optional<std::uint64_t> seed;
    bool strict = false;
    RemoteOptions remote;
};

void add_run_options(CLI::App& cmd, RunArgs& a) {
    cmd.add_option("--mode", a.mode, "coast | baseline | seeker_only | seeker_solver")
        ->check(CLI::IsMember({"coast", "baseline", "seeker_only", "seeker_solver"}));
    cmd.add_option("--backend", a.backend, "oracle | oracle_hint | random | remote")
        ->check(CLI::IsMember({"oracle", "oracle_hint", "random", "remote"}));
    cmd.add_option("--max-steps", a.max_steps, "step budget T (default: the spec's budget)");
    cmd.add_option("--n-seek", a.n_seek);
    cmd.add_option("--n-solve", a.n_solve);
    cmd.add_option("--k", a.k, "goal cap");
    cmd.add_option("--solver-actions", a.solver_actions, "env steps per goal");
    cmd.add_flag("--strict-success", a.strict, "goal success also needs a meaningful env event");
    cmd.add_option("--hints", a.hints, "hint schedule JSON file");
    cmd.add_option("--hint-stall", a.hint_stall, "inject the spec's hints after N steps without progress");
    cmd.add_option("--hint-period", a.hint_period, "inject the spec's hints every N steps");
    cmd.add_option("--seed", a.seed);
    cmd.add_option("--task", a.task, "task query (default: the spec's)");
    cmd.add_option("--model", a.remote.model_name);
    cmd.add_option("--timeout-ms", a.remote.timeout_ms);
    cmd.add_option("--max-retries", a.remote.max_retries);
}

Overrides overrides_from(const RunArgs& a) {
    Overrides o;
    if (!a.mode.empty()) o.mode = scheduler::mode_from_string(a.mode);
    o.max_steps = a.max_steps;
    o.n_seek = a.n_seek;
    o.n_solve = a.n_solve;
    o.goal_cap = a.k;
    o.solver_actions_per_goal = a.solver_actions;
    if (a.strict) o.strict_success = true;
    o.seed = a.seed;
    if (!a.task.empty()) o.task_query = a.task;
    if (!a.hints.empty()) {
        try {
            o.hints = scheduler::hint_schedule_from_json(parse_json_file(a.hints));
        } catch (const SchemaError& e) {
            throw UsageFailure(std::string("hint file: ") + e.what());
        }
    }
    if (a.hint_stall && a.hint_period) throw UsageFailure("--hint-stall and --hint-period are exclusive");
    if (a.hint_stall) {
        o.hint_trigger = scheduler::HintSchedule::Trigger::stall;
        o.hint_steps = *a.hint_stall;
    }
    if (a.hint_period) {
        o.hint_trigger = scheduler::HintSchedule::Trigger::periodic;
        o.hint_steps = *a.hint_period;
    }
    return o;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
    if (a.max_steps && *a.max_steps <= 0) throw UsageFailure("--max-steps must be positive");
    const auto overrides = overrides_from(a);
    auto spec = load_spec_or_fail(a.spec);
    auto run = run_one(spec, a.spec, a.backend, overrides, a.remote);
    const auto& report = run.episode.report;
    const fs::path dir(a.out_dir);
    const auto stem = episode_stem(report);
    write_file(a.log.empty() ? dir / (stem + ".jsonl") : fs::path(a.log), run.log);
    const auto report_text = to_json(report).dump(2) + "\n";
    write_file(a.report.empty() ? dir / (stem + ".report.json") : fs::path(a.report), report_text);
    if (!a.dump_memory.empty()) write_file(a.dump_memory, memory::snapshot(run.episode.memory).dump(2) + "\n");
    out << report_text;
    return kOk;
}

int cmd_suite(const std::string& path, std::optional<int> parallelism, const std::string& out_dir, bool plot,
              std::ostream& out) {
    auto config = load_suite_file(path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    const int par = parallelism.value_or(config.parallelism);
    if (par < 1) throw UsageFailure("parallelism must be at least 1");
    const auto episodes = run_suite(config, par);
    std::vector<metrics::EpisodeReport> reports;
    for (const auto& e : episodes) reports.push_back(e.report);
    const auto summary = metrics::suite_summary_csv(reports);
    if (!config.output_dir.empty()) {
        const fs::path dir(config.output_dir);
        for (const auto& e : episodes) {
            const auto stem = episode_stem(e.report) + "_" + e.backend + "_rep" + std::to_string(e.repetition);
            write_file(dir / (stem + ".jsonl"), e.log);
            write_file(dir / (stem + ".report.json"), to_json(e.report).dump(2) + "\n");
        }
        write_file(dir / "summary.csv", summary);
        if (plot) write_file(dir / "subgenre.csv", metrics::plot_data_csv(reports));
    }
    out << summary;
    return kOk;
}

int cmd_replay(const std::string& log_path, const std::string& spec_override, std::ostream& out) {
    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw UsageFailure("cannot open '" + log_path + "'");
    auto header = scheduler::read_log_header(in);
    std::string spec_path = spec_override;
    if (spec_path.empty()) {
        if (header.spec_path.empty()) throw UsageFailure("log names no spec; pass --spec");
        spec_path = header.spec_path;
        if (!fs::exists(spec_path)) spec_path = (fs::path(log_path).parent_path() / header.spec_path).string();
    }
    auto spec = load_spec_or_fail(spec_path);
    in.clear();
    in.seekg(0);
    Json result;
    try {
        const auto r = scheduler::replay_log(spec, in);
        result = {{"result", r.clean ? "CLEAN" : "DigestDivergence"}, {"message", r.message}, {"steps_checked", r.steps_checked}};
        if (r.divergence_index) result["index"] = *r.divergence_index;
        if (r.divergence_t) result["t"] = *r.divergence_t;
        out << result.dump(2) << "\n";
        return r.clean ? kOk : kDivergence;
    } catch (const scheduler::SpecHashMismatch& e) {
        out << Json{{"result", "SpecHashMismatch"}, {"message", e.what()}}.dump(2) << "\n";
        return kHashMismatch;
    }
}

int cmd_judge(const std::string& spec_path, const std::string& state_path, std::ostream& out) {
    auto spec = load_spec_or_fail(spec_path);
    // Accepts a bare state snapshot or a trajectory log (its end record).
    const auto text = read_file(state_path);
    Json state_json = Json::parse(text, nullptr, false);
    if (state_json.is_discarded()) {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            Json rec = Json::parse(line, nullptr, false);
            if (rec.is_object() && rec.value("type", "") == "end") state_json = rec.at("final_state");
        }
    } else if (state_json.is_object() && state_json.value("type", "") == "end") {
        state_json = state_json.at("final_state");
    }
    if (state_json.is_discarded()) throw UsageFailure("'" + state_path + "' holds no state snapshot");
    sim::EnvState state;
    try {
        state = sim::state_from_json(spec, state_json);
    } catch (const Error& e) {
        throw SpecFailure(e.what());
    }
    out << judge::to_json(judge::judge(state)).dump(2) << "\n";
    return kOk;
}

int cmd_agree(const std::string& csv, std::ostream& out) {
    out << judge::to_json(judge::agreement_from_csv(read_file(csv))).dump(2) << "\n";
    return kOk;
}

struct GenerateArgs {
    sim::GeneratorParams params;
    std::string genre = "mystery", out;
};

int cmd_generate(GenerateArgs a, std::ostream& out) {
    auto g = sim::genre_from_string(a.genre);
    if (!g) throw UsageFailure("unknown genre '" + a.genre + "'");
    a.params.genre = *g;
    sim::GeneratedGame game;
    try {
        game = sim::generate(a.params);
    } catch (const std::invalid_argument& e) {
        throw UsageFailure(e.what());
    }
    const auto text = game.document.dump(2) + "\n";
    if (!a.out.empty()) write_file(a.out, text);
    out << Json{{"game_id", game.spec->game_id},
                {"spec_hash", game.spec->hash},
                {"plan_length", game.plan_length},
                {"head_clue", game.head_clue},
                {"head_gap", game.head_gap},
                {"out", a.out}}
               .dump(2)
        << "\n";
    if (a.out.empty()) out << text;
    return kOk;
}

int cmd_report(const std::vector<std::string>& files, const std::string& group, const std::string& plot,
               std::ostream& out) {
    auto g = metrics::group_by_from_string(group);
    if (!g) throw UsageFailure("unknown --group-by '" + group + "'");
    std::vector<metrics::EpisodeReport> reports;
    for (const auto& f : files) {
        try {
            reports.push_back(metrics::report_from_json(parse_json_file(f)));
        } catch (const SchemaError& e) {
            throw UsageFailure(f + ": " + e.what());
        }
    }
    if (reports.empty()) throw UsageFailure("no reports given");
    if (!plot.empty()) write_file(plot, metrics::plot_data_csv(reports));
    Json rows = Json::array();
    for (const auto& r : metrics::aggregate(reports, *g)) {
        rows.push_back({{"group", r.group}, {"n", r.n}, {"sr", r.sr}, {"mcr", r.mcr}, {"mcr_std", r.mcr_std},
                        {"steps", r.steps}, {"steps_std", r.steps_std}});
    }
    out << rows.dump(2) << "\n";
    return kOk;
}

std::optional<scheduler::Mode> toml_mode(const toml::table& t, const std::string& where) {
    auto m = t["mode"].value<std::string>();
    if (!m) return std::nullopt;
    auto mode = scheduler::mode_from_string(*m);
    if (!mode) throw UsageFailure(where + ": unknown mode '" + *m + "'");
    return mode;
}

}  // namespace

scheduler::RunConfig resolve_config(const sim::GameSpec& spec, const Overrides& o) {
    auto c = scheduler::RunConfig::defaults_for(spec);
    c.max_steps = o.max_steps.value_or(spec.step_budget);
    if (o.mode) c.mode = *o.mode;
    if (o.n_seek) c.n_seek = *o.n_seek;
    if (o.n_solve) c.n_solve = *o.n_solve;
    if (o.goal_cap) c.goal_cap = *o.goal_cap;
    if (o.solver_actions_per_goal) c.solver_actions_per_goal = *o.solver_actions_per_goal;
    if (o.strict_success && *o.strict_success) c.verification = scheduler::Verification::strict;
    if (o.seed) c.seed = *o.seed;
    if (o.task_query) c.task_query = *o.task_query;
    if (o.hints) {
        c.hints = o.hints;
    } else if (o.hint_trigger) {
        c.hints = scheduler::HintSchedule{spec.hints, *o.hint_trigger, o.hint_steps.value_or(100)};
    }
    // A short explicit budget shrinks the default seek block rather than failing.
    if (!o.n_seek && c.max_steps > 0) c.n_seek = std::min(c.n_seek, c.max_steps);
    c.validate();
    return c;
}

std::unique_ptr<policy::Policy> make_backend(const std::string& name, const sim::SpecPtr& spec, std::uint64_t seed,
                                             const RemoteOptions& remote) {
    if (name == "oracle") return std::make_unique<policy::OraclePolicy>(spec, seed);
    if (name == "oracle_hint") return std::make_unique<policy::OraclePolicy>(spec, seed, policy::OracleOptions{true});
    if (name == "random") return std::make_unique<policy::RandomPolicy>(seed);
    if (name == "remote") {
        auto cfg = policy::RemoteConfig::from_environment();
        cfg.model_name = remote.model_name;
        cfg.timeout = std::chrono::milliseconds(remote.timeout_ms);
        cfg.max_retries = remote.max_retries;
        return std::make_unique<policy::RemotePolicy>(cfg);
    }
    throw UsageFailure("unknown backend '" + name + "'");
}

SuiteConfig load_suite_file(const std::string& path) {
    toml::table root;
    try {
        root = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        throw UsageFailure(path + ": " + std::string(e.description()));
    }
    const fs::path base = fs::path(path).parent_path();
    SuiteConfig s;
    if (auto dir = root["output_dir"].value<std::string>()) s.output_dir = (base / *dir).string();
    s.parallelism = root["parallelism"].value_or(1);
    auto* eps = root["episode"].as_array();
    if (!eps || eps->empty()) throw UsageFailure(path + ": needs at least one [[episode]] table");
    int i = 0;
    for (auto& node : *eps) {
        const std::string where = path + ": episode " + std::to_string(i++);
        auto* t = node.as_table();
        if (!t) throw UsageFailure(where + ": not a table");
        for (const auto& [key, _] : *t) {
            static const std::set<std::string_view> known{"spec", "backend", "repetitions", "mode", "max_steps",
                                                          "n_seek", "n_solve", "k", "solver_actions", "strict_success",
                                                          "seed", "hint_stall", "hint_period"};
            if (!known.count(key.str())) throw UsageFailure(where + ": unknown key '" + std::string(key.str()) + "'");
        }
        SuiteEntry e;
        auto spec = (*t)["spec"].value<std::string>();
        if (!spec) throw UsageFailure(where + ": missing spec");
        e.spec_path = (base / *spec).string();
        if (!fs::exists(e.spec_path)) throw SpecFailure(where + ": spec '" + e.spec_path + "' does not exist");
        e.backend = (*t)["backend"].value_or(std::string("oracle"));
        e.repetitions = (*t)["repetitions"].value_or(1);
        if (e.repetitions < 1) throw UsageFailure(where + ": repetitions must be at least 1");
        auto& o = e.overrides;
        o.mode = toml_mode(*t, where);
        if (auto v = (*t)["max_steps"].value<int>()) {
            if (*v <= 0) throw UsageFailure(where + ": max_steps must be positive");
            o.max_steps = *v;
        }
        if (auto v = (*t)["n_seek"].value<int>()) o.n_seek = *v;
        if (auto v = (*t)["n_solve"].value<int>()) o.n_solve = *v;
        if (auto v = (*t)["k"].value<int>()) o.goal_cap = *v;
        if (auto v = (*t)["solver_actions"].value<int>()) o.solver_actions_per_goal = *v;
        if (auto v = (*t)["strict_success"].value<bool>()) o.strict_success = *v;
        if (auto v = (*t)["seed"].value<std::int64_t>()) o.seed = static_cast<std::uint64_t>(*v);
        if (auto v = (*t)["hint_stall"].value<int>()) {
            o.hint_trigger = scheduler::HintSchedule::Trigger::stall;
            o.hint_steps = *v;
        }
        if (auto v = (*t)["hint_period"].value<int>()) {
            o.hint_trigger = scheduler::HintSchedule::Trigger::periodic;
            o.hint_steps = *v;
        }
        s.entries.push_back(std::move(e));
    }
    return s;
}

std::vector<SuiteEpisode> run_suite(const SuiteConfig& config, int parallelism) {
    struct Job {
        const SuiteEntry* entry;
        int repetition;
    };
    std::vector<Job> jobs;
    std::map<std::string, sim::SpecPtr> specs;
    for (const auto& e : config.entries) {
        if (!specs.count(e.spec_path)) specs[e.spec_path] = load_spec_or_fail(e.spec_path);
        for (int r = 0; r < e.repetitions; ++r) jobs.push_back({&e, r});
    }
    std::vector<SuiteEpisode> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                const auto& job = jobs[i];
                auto o = job.entry->overrides;
                o.seed = o.seed.value_or(0) + static_cast<std::uint64_t>(job.repetition);
                auto run = run_one(specs.at(job.entry->spec_path), job.entry->spec_path, job.entry->backend, o, {});
                results[i] = {job.entry->spec_path, job.entry->backend, job.repetition, run.episode.report, run.log};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min<int>(parallelism, static_cast<int>(jobs.size())));
    std::vector<std::thread> threads;
    for (int i = 1; i < n; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clue-oriented adventure game agents: run, judge and analyse episodes."};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "play one episode");
    run->add_option("--spec", run_args.spec)->required();
    add_run_options(*run, run_args);
    run->add_option("--out", run_args.out_dir, "directory for the log and report");
    run->add_option("--log", run_args.log, "trajectory JSONL path");
    run->add_option("--report", run_args.report, "report JSON path");
    run->add_option("--dump-memory", run_args.dump_memory, "write the final clue memory here");

    std::string suite_file, suite_out;
    std::optional<int> suite_par;
    bool plot = false;
    auto* suite = app.add_subcommand("suite", "run a TOML-declared batch of episodes");
    suite->add_option("config", suite_file)->required();
    suite->add_option("--parallelism", suite_par);
    suite->add_option("--out", suite_out, "write logs, reports and summary.csv here");
    suite->add_flag("--emit-plot-data", plot, "also write the per-subgenre CSV");

    std::string replay_log, replay_spec;
    auto* replay = app.add_subcommand("replay", "re-execute a trajectory log and compare digests");
    replay->add_option("log", replay_log)->required();
    replay->add_option("--spec", replay_spec);

    std::string judge_spec, judge_state;
    auto* judge_cmd = app.add_subcommand("judge", "score a final state");
    judge_cmd->add_option("--spec", judge_spec)->required();
    judge_cmd->add_option("--state", judge_state, "state snapshot JSON or trajectory log")->required();

    std::string agree_csv;
    auto* agree = app.add_subcommand("agree", "judge-vs-human agreement from a CSV");
    agree->add_option("csv", agree_csv)->required();

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "emit a certified synthetic game");
    generate->add_option("--scenes", gen.params.n_scenes);
    generate->add_option("--clues", gen.params.n_clues);
    generate->add_option("--chain", gen.params.chain_length);
    generate->add_option("--min-gap", gen.params.target_gap_lower_bound);
    generate->add_option("--genre", gen.genre);
    generate->add_option("--seed", gen.params.seed);
    generate->add_option("--out", gen.out);

    std::vector<std::string> report_files;
    std::string group = "none", plot_out;
    auto* report = app.add_subcommand("report", "aggregate episode reports");
    report->add_option("reports", report_files)->required();
    report->add_option("--group-by", group, "none | subgenre | mode | game");
    report->add_option("--emit-plot-data", plot_out, "write the per-subgenre CSV here");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*run) return cmd_run(run_args, out);
        if (*suite) return cmd_suite(suite_file, suite_par, suite_out, plot, out);
        if (*replay) return cmd_replay(replay_log, replay_spec, out);
        if (*judge_cmd) return cmd_judge(judge_spec, judge_state, out);
        if (*agree) return cmd_agree(agree_csv, out);
        if (*generate) return cmd_generate(gen, out);
        if (*report) return cmd_report(report_files, group, plot_out, out);
    } catch (const UsageFailure& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const scheduler::ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const SpecFailure& e) {
        err << "spec error: " << e.what() << "\n";
        return kSpecError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFault;
    }
    return kUsage;
}

}  // namespace coast::cli
