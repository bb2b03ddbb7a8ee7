#include <istream>
#include <ostream>

#include "coast/scheduler/scheduler.hpp"

namespace coast::scheduler {
namespace {

constexpr int kLogFormat = 1;

Json events_json(const std::vector<env::Event>& events) {
    Json out = Json::array();
    for (const auto& e : events) out.push_back(env::to_json(e));
    return out;
}

Json step_json(const StepRecord& s) {
    Json j{{"type", "step"},
           {"index", s.index},
           {"t", s.t},
           {"phase", std::string(to_string(s.phase))},
           {"obs_digest", s.obs_digest},
           {"events", events_json(s.events)}};
    j["action"] = s.action ? env::to_json(*s.action) : Json(nullptr);
    j["policy_ref"] = s.policy_ref ? Json(*s.policy_ref) : Json(nullptr);
    if (s.hint) j["hint"] = *s.hint;
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

Json transcript_json(const TranscriptRecord& tr) {
    Json entries = Json::array();
    for (const auto& e : tr.entries) {
        Json je{{"attempt", e.attempt}, {"response", e.response}};
        if (!e.prompt.empty()) je["prompt"] = e.prompt;
        if (!e.error.empty()) je["error"] = e.error;
        entries.push_back(std::move(je));
    }
    Json j{{"type", "transcript"},
           {"ref", tr.ref},
           {"role", std::string(policy::to_string(tr.role))},
           {"t", tr.t},
           {"backend", tr.backend},
           {"entries", entries}};
    if (!tr.error.empty()) j["error"] = tr.error;
    return j;
}

void emit(std::ostream& out, const Json& j) { out << util::canonical_dump(j) << '\n'; }

bool next_record(std::istream& in, Json& record, int& line_no) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        record = Json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            throw SchemaError("log line " + std::to_string(line_no) + ": not a JSON object");
        }
        return true;
    }
    return false;
}

LogHeader parse_header(const Json& j) {
    util::JsonReader r(j, "$header");
    if (r.at("type").str() != "header") r.fail("first record must be the header");
    if (r.at("format").int32() != kLogFormat) r.at("format").fail("unsupported log format");
    LogHeader h;
    h.spec_hash = r.at("spec_hash").str();
    h.game_id = r.at("game_id").str();
    h.spec_path = r.str_or("spec_path", "");
    h.config = run_config_from_json(r.at("config").json());
    return h;
}

}  // namespace

void write_log(std::ostream& out, const sim::GameSpec& spec, const RunConfig& config, const Episode& episode,
               const std::string& spec_path) {
    const auto& traj = episode.trajectory;
    Json header{{"type", "header"},
                {"format", kLogFormat},
                {"spec_hash", spec.hash},
                {"game_id", spec.game_id},
                {"config", to_json(config)},
                {"initial_digest", traj.initial_digest},
                {"initial_events", events_json(traj.initial_events)}};
    if (!spec_path.empty()) header["spec_path"] = spec_path;
    emit(out, header);
    std::size_t next_transcript = 0;
    for (const auto& s : traj.steps) {
        // Transcripts precede the step that references them.
        while (next_transcript < traj.transcripts.size() &&
               (!s.policy_ref || traj.transcripts[next_transcript].ref <= *s.policy_ref)) {
            if (!s.policy_ref) break;
            emit(out, transcript_json(traj.transcripts[next_transcript++]));
        }
        emit(out, step_json(s));
    }
    while (next_transcript < traj.transcripts.size()) emit(out, transcript_json(traj.transcripts[next_transcript++]));
    emit(out, {{"type", "end"},
               {"t", traj.t},
               {"success", traj.final_state.success},
               {"terminal", traj.final_state.terminal},
               {"final_state", sim::state_to_json(traj.final_state)}});
}

LogHeader read_log_header(std::istream& in) {
    Json record;
    int line_no = 0;
    if (!next_record(in, record, line_no)) throw SchemaError("log is empty");
    return parse_header(record);
}

ReplayResult replay_log(const sim::SpecPtr& spec, std::istream& in) {
    Json record;
    int line_no = 0;
    if (!next_record(in, record, line_no)) throw SchemaError("log is empty");
    const auto header = parse_header(record);
    if (header.spec_hash != spec->hash) {
        throw SpecHashMismatch("log was recorded against spec " + header.spec_hash + ", got " + spec->hash);
    }
    ReplayResult result;
    auto state = sim::init(spec, header.config.seed);
    auto obs = sim::render(state);
    if (record.value("initial_digest", "") != env::digest(obs)) {
        result.clean = false;
        result.divergence_index = -1;
        result.divergence_t = 0;
        result.message = "initial observation differs";
        return result;
    }
    bool ended = false;
    while (next_record(in, record, line_no)) {
        util::JsonReader r(record, "$line" + std::to_string(line_no));
        const auto type = r.at("type").str();
        if (type == "transcript") continue;
        if (type == "end") {
            ended = true;
            if (r.at("success").boolean() != state.success || r.at("terminal").boolean() != state.terminal) {
                result.clean = false;
                result.message = "final success/terminal flags differ";
            }
            break;
        }
        if (type != "step") r.at("type").fail("unknown record type '" + type + "'");
        const int index = r.at("index").int32();
        const int t = r.at("t").int32();
        Json events = Json::array();
        if (auto a = r.maybe("action")) {
            const auto action = env::action_from_json(a->json(), a->path());
            try {
                auto outcome = sim::step_in_place(state, action);
                obs = std::move(outcome.observation);
                events = events_json(outcome.events);
            } catch (const Error& e) {
                result.clean = false;
                result.divergence_index = index;
                result.divergence_t = t;
                result.message = std::string("action rejected on replay: ") + e.what();
                return result;
            }
        }
        ++result.steps_checked;
        const bool digest_ok = r.at("obs_digest").str() == env::digest(obs);
        const bool events_ok = r.at("events").json() == events;
        if (!digest_ok || !events_ok) {
            result.clean = false;
            result.divergence_index = index;
            result.divergence_t = t;
            result.message = digest_ok ? "events differ" : "observation digest differs";
            return result;
        }
    }
    if (!ended && result.clean) {
        result.clean = false;
        result.message = "log has no end record";
    }
    if (result.clean) result.message = "CLEAN";
    return result;
}

}  // namespace coast::scheduler
