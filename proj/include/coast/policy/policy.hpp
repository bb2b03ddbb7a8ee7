#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coast/env/observation.hpp"
#include "coast/memory/memory.hpp"
#include "coast/policy/respo.hpp"
#include "coast/sim/oracle.hpp"

namespace coast::policy {

COAST_DEFINE_ERROR(PlanExhausted);
COAST_DEFINE_ERROR(Timeout);
COAST_DEFINE_ERROR(TransportError);
COAST_DEFINE_ERROR(RetriesExhausted);

// Public description of the game, as a player would read it on the box.
struct GameBrief {
    std::string title;
    std::string description;
    std::vector<std::string> info;
    std::string completion;
};

// Everything a role sees on one call. Pointers are borrowed for the call.
struct PolicyContext {
    const GameBrief* brief = nullptr;
    std::string task_query;
    const env::Observation* observation = nullptr;
    const memory::ClueMemory* memory = nullptr;
    std::vector<std::string> recent;      // last few steps, oldest first
    std::string summary;                  // running summary for the baseline
    const memory::GoalCandidate* goal = nullptr;       // solve role
    std::vector<memory::GoalCandidate> mapping;        // goals in this solve block
    std::vector<std::string> resolved;                 // text of solved goals
    std::vector<std::string> hints;                    // every hint injected so far
    int t = 0;
};

struct TranscriptEntry {
    int attempt = 0;
    std::string prompt;
    std::string response;
    std::string error;  // error code, empty on success
};

struct PolicyReply {
    std::string raw;
    std::vector<TranscriptEntry> transcript;
    std::string error;  // recorded failure code (Timeout, RetriesExhausted, ...)
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyReply respond(Role role, const PolicyContext& context) = 0;
    // Feedback after the scheduler executed an action in the environment.
    virtual void observe(const env::Action& /*action*/, const env::StepOutcome& /*outcome*/) {}
    virtual std::string backend() const = 0;
};

// Oracle plans are cached per spec hash; safe to call from many threads.
std::shared_ptr<const sim::Plan> cached_plan(const sim::SpecPtr& spec);

struct OracleOptions {
    // Only advance along the plan while fewer milestones are achieved than
    // hints received; otherwise idle with scroll(down, 1).
    bool hint_gated = false;
};

// Test double for all roles, driven by the BFS plan and a shadow copy of
// the environment that follows every executed action.
class OraclePolicy : public Policy {
public:
    OraclePolicy(sim::SpecPtr spec, std::uint64_t seed, OracleOptions options = {});

    PolicyReply respond(Role role, const PolicyContext& context) override;
    void observe(const env::Action& action, const env::StepOutcome& outcome) override;
    std::string backend() const override { return options_.hint_gated ? "oracle_hint" : "scripted_oracle"; }

    // Next plan action on the shadow layout. Throws PlanExhausted.
    env::Action next_action(const PolicyContext& context);

private:
    std::string seek(const PolicyContext& context);
    std::string map(const PolicyContext& context);
    std::string solve(const PolicyContext& context);

    std::vector<std::string> clues_used_by(const env::Action& action) const;
    std::string location_of(int element) const;

    sim::SpecPtr spec_;
    OracleOptions options_;
    sim::EnvState shadow_;
    std::shared_ptr<const sim::Plan> plan_;
    std::size_t cursor_ = 0;
    std::optional<env::Action> expected_;
};

// Clicks the centre of a uniformly chosen visible element. Never types.
class RandomPolicy : public Policy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}

    PolicyReply respond(Role role, const PolicyContext& context) override;
    std::string backend() const override { return "scripted_random"; }

private:
    std::mt19937_64 rng_;
};

struct RemoteConfig {
    std::string endpoint;  // http://host:port/path
    std::string api_key;
    std::string model_name;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;
    int max_tokens = 2048;

    // Reads COAST_ENDPOINT and COAST_API_KEY. Throws TransportError when
    // the endpoint is unset.
    static RemoteConfig from_environment();
};

// HTTP POST {role, prompt, max_tokens, model}; the reply body is the raw
// completion, or a JSON object carrying it under "completion" or "text".
class RemotePolicy : public Policy {
public:
    explicit RemotePolicy(RemoteConfig config);

    PolicyReply respond(Role role, const PolicyContext& context) override;
    std::string backend() const override { return "remote"; }

private:
    RemoteConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

}  // namespace coast::policy
