#include "coast/judge/judge.hpp"

#include <stdexcept>

namespace coast::judge {
namespace {

using sim::MilestoneDef;
using sim::MilestoneKind;

// Runs the probe on a clone and returns the observation it ends on.
env::Observation probe(const sim::EnvState& final_state, const MilestoneDef& m, std::vector<ProbeRecord>& trace) {
    auto clone = sim::resume(final_state);
    auto obs = sim::render(clone);
    for (const auto& p : m.probe) {
        env::Action action = p.action;
        if (p.element) {
            auto at = sim::locate(clone, *p.element);
            if (!at) throw ProbeError("milestone '" + m.id + "': probe target '" + *p.element + "' is not visible");
            action = env::Action::click(p.action.kind(), at->x, at->y);
        }
        if (auto why = env::validate_action(action, clone.spec->viewport)) {
            throw ProbeError("milestone '" + m.id + "': " + *why);
        }
        try {
            obs = sim::step_in_place(clone, action).observation;
        } catch (const Error& e) {
            throw ProbeError("milestone '" + m.id + "': " + e.what());
        }
        trace.push_back({m.id, action, env::digest(obs)});
    }
    return obs;
}

bool verify(const sim::EnvState& final_state, const MilestoneDef& m, std::vector<ProbeRecord>& trace) {
    return sim::evaluate(m.evidence, probe(final_state, m, trace));
}

void expect_kind(const std::vector<const MilestoneDef*>& ms, MilestoneKind kind) {
    for (const auto* m : ms) {
        if (m->kind != kind) {
            throw std::invalid_argument("milestone '" + m->id + "' is " + std::string(sim::to_string(m->kind)) +
                                        ", expected " + std::string(sim::to_string(kind)));
        }
    }
}

double ratio(int k, int n) { return n == 0 ? 0.0 : static_cast<double>(k) / n; }

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

Json to_json(const JudgeVerdict& v) {
    Json trace = Json::array();
    for (const auto& p : v.probe_trace) {
        trace.push_back({{"milestone", p.milestone}, {"action", env::to_json(p.action)}, {"obs_digest", p.obs_digest}});
    }
    Json readings = Json::array();
    for (const auto& r : v.readings) {
        readings.push_back({{"milestone", r.milestone_id},
                            {"counter", r.counter},
                            {"raw", r.raw},
                            {"normalizer", r.normalizer},
                            {"normalizer_source", r.normalizer_source}});
    }
    return {{"strategy", std::string(sim::to_string(v.strategy))},
            {"achieved", v.achieved},
            {"total", v.total},
            {"score", v.score},
            {"verified", v.verified},
            {"probe_trace", trace},
            {"readings", readings}};
}

JudgeVerdict verdict_from_json(const Json& value, const std::string& path) {
    util::JsonReader r(value, path);
    r.expect_object();
    JudgeVerdict v;
    const auto strategy = r.at("strategy");
    auto kind = sim::milestone_kind_from_string(strategy.str());
    if (!kind) strategy.fail("unknown strategy '" + strategy.str() + "'");
    v.strategy = *kind;
    v.achieved = r.at("achieved").int32();
    v.total = r.at("total").int32();
    v.score = r.at("score").number();
    if (auto list = r.maybe("verified")) {
        for (const auto& e : list->elements()) v.verified.push_back(e.boolean());
    }
    if (auto list = r.maybe("probe_trace")) {
        for (const auto& e : list->elements()) {
            v.probe_trace.push_back({e.at("milestone").str(), env::action_from_json(e.at("action").json(), e.path() + ".action"),
                                     e.at("obs_digest").str()});
        }
    }
    if (auto list = r.maybe("readings")) {
        for (const auto& e : list->elements()) {
            v.readings.push_back({e.at("milestone").str(), e.at("counter").str(), e.at("raw").number(),
                                  e.at("normalizer").number(), e.at("normalizer_source").str()});
        }
    }
    return v;
}

JudgeVerdict judge_sequential(const sim::EnvState& final_state, const std::vector<const MilestoneDef*>& milestones) {
    expect_kind(milestones, MilestoneKind::sequential);
    JudgeVerdict v;
    v.strategy = MilestoneKind::sequential;
    v.total = static_cast<int>(milestones.size());
    for (const auto* m : milestones) {
        const bool ok = verify(final_state, *m, v.probe_trace);
        v.verified.push_back(ok);
        if (!ok) break;  // halt at the first unmet milestone
        ++v.achieved;
    }
    v.score = ratio(v.achieved, v.total);
    return v;
}

JudgeVerdict judge_counting(const sim::EnvState& final_state, const std::vector<const MilestoneDef*>& milestones) {
    expect_kind(milestones, MilestoneKind::counting);
    JudgeVerdict v;
    v.strategy = MilestoneKind::counting;
    v.total = static_cast<int>(milestones.size());
    for (const auto* m : milestones) {
        const bool ok = verify(final_state, *m, v.probe_trace);
        v.verified.push_back(ok);
        v.achieved += ok;
    }
    v.score = ratio(v.achieved, v.total);
    return v;
}

JudgeVerdict judge_continuous(const sim::EnvState& final_state, const MilestoneDef& m) {
    if (m.kind != MilestoneKind::continuous) throw std::invalid_argument("milestone '" + m.id + "' is not continuous");
    JudgeVerdict v;
    v.strategy = MilestoneKind::continuous;
    v.total = 1;
    const auto obs = probe(final_state, m, v.probe_trace);
    std::vector<double> raw, norm;
    for (const auto& c : m.counters) {
        const auto& name = final_state.spec->counters[c.counter].id;
        auto it = obs.hud_values.find(name);
        if (it == obs.hud_values.end()) {
            throw MissingCounter("milestone '" + m.id + "': counter '" + name + "' is not on the HUD after probing");
        }
        raw.push_back(it->second);
        norm.push_back(c.normalizer);
        v.readings.push_back({m.id, name, it->second, c.normalizer, c.source});
    }
    v.score = continuous_score(raw, norm);
    v.achieved = v.score >= 1.0 ? 1 : 0;
    v.verified.push_back(v.achieved == 1);
    return v;
}

JudgeVerdict judge(const sim::EnvState& final_state) {
    const auto& spec = *final_state.spec;
    std::vector<const MilestoneDef*> ms;
    for (const auto& m : spec.milestones) ms.push_back(&m);
    switch (spec.judge_strategy) {
        case MilestoneKind::sequential: return judge_sequential(final_state, ms);
        case MilestoneKind::counting: return judge_counting(final_state, ms);
        case MilestoneKind::continuous: {
            JudgeVerdict out;
            out.strategy = MilestoneKind::continuous;
            double sum = 0.0;
            for (const auto* m : ms) {
                auto v = judge_continuous(final_state, *m);
                sum += v.score;
                out.achieved += v.achieved;
                out.total += 1;
                out.verified.push_back(v.achieved == 1);
                out.probe_trace.insert(out.probe_trace.end(), v.probe_trace.begin(), v.probe_trace.end());
                out.readings.insert(out.readings.end(), v.readings.begin(), v.readings.end());
            }
            out.score = out.total ? sum / out.total : 0.0;
            return out;
        }
    }
    throw std::logic_error("unknown judge strategy");
}

double direct_score(const sim::EnvState& state) {
    const auto status = sim::milestone_vector(state);
    const auto& spec = *state.spec;
    switch (spec.judge_strategy) {
        case MilestoneKind::sequential: return ratio(status.achieved_prefix(), static_cast<int>(status.discrete.size()));
        case MilestoneKind::counting: return ratio(status.achieved_count(), static_cast<int>(status.discrete.size()));
        case MilestoneKind::continuous: {
            // Mean per milestone of the mean normalized counter.
            std::vector<double> per;
            for (const auto& m : spec.milestones) {
                std::vector<double> raw, norm;
                for (const auto& r : status.continuous) {
                    if (r.milestone_id != m.id) continue;
                    raw.push_back(r.raw);
                    norm.push_back(r.normalizer);
                }
                per.push_back(continuous_score(raw, norm));
            }
            return per.empty() ? 0.0 : mean(per);
        }
    }
    return 0.0;
}

double sequential_score(const std::vector<bool>& statuses) {
    int k = 0;
    for (bool s : statuses) {
        if (!s) break;
        ++k;
    }
    return ratio(k, static_cast<int>(statuses.size()));
}

double counting_score(const std::vector<bool>& statuses) {
    int k = 0;
    for (bool s : statuses) k += s;
    return ratio(k, static_cast<int>(statuses.size()));
}

double continuous_score(std::span<const double> raw, std::span<const double> normalizers) {
    if (raw.size() != normalizers.size()) throw LengthMismatch("raw and normalizer lists differ in length");
    if (raw.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) sum += raw[i] / normalizers[i];
    return sum / static_cast<double>(raw.size());
}

}  // namespace coast::judge
