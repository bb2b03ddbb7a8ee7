#include <doctest.h>

#include <set>

#include "coast/judge/judge.hpp"
#include "coast/memory/memory.hpp"
#include "coast/sim/oracle.hpp"
#include "coast/util/json.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace coast;
using namespace coast::policy;

namespace {

template <class T>
std::string rerender(Role role, const std::string& text) {
    const auto parsed = parse_respo(role, text);
    REQUIRE(std::holds_alternative<T>(parsed));
    return render_respo(std::get<T>(parsed));
}

}  // namespace

TEST_CASE("parse_respo never throws") {
    const auto r = test::fuzz_parse(10000, 42);
    CHECK(r.inputs == 10000);
    CHECK(r.faults == 0);
    CHECK(r.accepted > 0);
}

TEST_CASE("[Nobody] is an empty candidate list") {
    for (const char* body : {"<RESPO>[Nobody]</RESPO>", "noise <RESPO> [Nobody] </RESPO> tail"}) {
        CAPTURE(body);
        const auto p = parse_respo(Role::map, body);
        REQUIRE(std::holds_alternative<MapperResponse>(p));
        CHECK(std::get<MapperResponse>(p).candidates.empty());
    }
}

TEST_CASE("rendered replies round-trip byte for byte") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
        const auto s = render_respo(test::random_seeker(rng));
        CHECK(rerender<SeekerResponse>(Role::seek, s) == s);
        const auto m = render_respo(test::random_mapper(rng));
        CHECK(rerender<MapperResponse>(Role::map, m) == m);
        const auto v = render_respo(test::random_solver(rng));
        CHECK(rerender<SolverResponse>(Role::solve, v) == v);
        const auto b = render_respo(test::random_baseline(rng));
        CHECK(rerender<BaselineResponse>(Role::baseline, b) == b);
    }
}

TEST_CASE("memory snapshots round-trip byte for byte") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        memory::ClueMemory m;
        for (auto n = rng() % 8; n > 0; --n) m.add_clue(test::random_clue(rng));
        for (auto n = rng() % 5; n > 0; --n) m.add_episode(test::random_record(rng));
        const auto text = memory::snapshot_text(m);
        const auto back = memory::restore_text(text);
        CHECK(back == m);
        CHECK(memory::snapshot_text(back) == text);
        CHECK(util::canonical_dump(Json::parse(text)) == text);
    }
}

TEST_CASE("judge agrees with the direct score on random terminal states") {
    for (const char* name : test::kFixtures) {
        CAPTURE(name);
        auto spec = test::fixture(name);
        const auto plan = sim::oracle_solve(spec);
        std::mt19937_64 rng(std::hash<std::string>{}(name));
        int mismatches = 0;
        std::set<double> seen;
        for (int i = 0; i < 100; ++i) {
            const auto state = test::random_terminal_state(spec, plan, rng);
            const double judged = judge::judge(state).score, direct = judge::direct_score(state);
            if (std::abs(judged - direct) > 1e-12) ++mismatches;
            seen.insert(direct);
        }
        CHECK(mismatches == 0);
        CHECK(seen.size() >= 3);  // the sample spans partial progress
    }
}

TEST_CASE("sequential score never exceeds counting score") {
    std::mt19937_64 rng(77);
    int violations = 0;
    for (int i = 0; i < 2000; ++i) {
        std::vector<bool> v(1 + rng() % 20);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = rng() % 3 != 0;
        if (judge::sequential_score(v) > judge::counting_score(v)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("correlations match the brute-force oracle") {
    const auto r = test::check_correlations(50, 3);
    CHECK(r.lists == 50);
    CHECK(r.max_error <= 1e-12);
    CHECK(r.wrong_degenerate == 0);
}
