#pragma once

#include <algorithm>
#include <string>

#include "coast/policy/policy.hpp"
#include "coast/policy/respo.hpp"

namespace coast::test {

inline const env::Action kIdle = env::Action::scroll(env::ScrollDirection::down, 1);

// Scripted stand-in: idle seeker and solver; the mapper proposes a fixed
// number of never-seen goals on every call.
class Synthetic : public policy::Policy {
public:
    explicit Synthetic(int fresh_goals, bool solver_success = false)
        : fresh_(fresh_goals), success_(solver_success) {}

    policy::PolicyReply respond(policy::Role role, const policy::PolicyContext&) override {
        policy::PolicyReply r;
        switch (role) {
            case policy::Role::seek: {
                policy::SeekerResponse s;
                s.episodic_memory.push_back({"scrolled", "here", 0});
                s.proposed_action = kIdle;
                r.raw = policy::render_respo(s);
                break;
            }
            case policy::Role::map: {
                policy::MapperResponse m;
                for (int i = 0; i < fresh_; ++i) {
                    memory::Clue c;
                    c.name = "clue " + std::to_string(serial_++);
                    c.location = "nowhere";
                    m.candidates.push_back(memory::make_goal(c, "", "inspect"));
                }
                r.raw = policy::render_respo(m);
                break;
            }
            case policy::Role::solve: {
                policy::SolverResponse s;
                s.episodic_memory.push_back({"scrolled", "here", 0});
                s.success = success_;
                s.proposed_action = kIdle;
                r.raw = policy::render_respo(s);
                break;
            }
            case policy::Role::baseline: r.raw = policy::render_respo(policy::BaselineResponse{kIdle, ""}); break;
        }
        return r;
    }
    std::string backend() const override { return "synthetic"; }

    int map_calls() const { return serial_ / std::max(fresh_, 1); }

private:
    int fresh_;
    bool success_;
    int serial_ = 0;
};

}  // namespace coast::test
