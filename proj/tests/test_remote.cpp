#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "coast/policy/policy.hpp"
#include "coast/policy/respo.hpp"
#include "coast/scheduler/scheduler.hpp"
#include "support.hpp"

using namespace coast;
using namespace coast::policy;

namespace {

const char* kCanned = R"j(<RESPO>{"clues": [], "episodic_memory": [{"action": "looked", "place": "entrance"}],
  "proposed_action": {"type": "left_click", "x": 5, "y": 5}}</RESPO>)j";

// Local mock completion endpoint on an ephemeral port.
class MockServer {
public:
    explicit MockServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/v1/complete", [this, handler](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            handler(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/complete"; }
    int hits() const { return hits_; }
    std::string last_body() const { return last_body_; }
    std::string last_auth() const { return last_auth_; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
    std::string last_body_, last_auth_;
};

struct Ctx {
    sim::SpecPtr spec = test::fixture("tea_room");
    env::Observation obs = sim::render(sim::init(spec));
    memory::ClueMemory memory;
    GameBrief brief{"Tea", "desc", {}, "done"};
    PolicyContext get() {
        PolicyContext c;
        c.brief = &brief;
        c.observation = &obs;
        c.memory = &memory;
        return c;
    }
};

RemoteConfig config_for(const MockServer& s, int timeout_ms = 2000, int retries = 2) {
    RemoteConfig c;
    c.endpoint = s.endpoint();
    c.api_key = "secret";
    c.model_name = "mock-model";
    c.timeout = std::chrono::milliseconds(timeout_ms);
    c.max_retries = retries;
    return c;
}

}  // namespace

TEST_CASE("echoed seeker body parses") {
    MockServer server([](const httplib::Request&, httplib::Response& res) {
        res.set_content(Json{{"completion", kCanned}}.dump(), "application/json");
    });
    RemotePolicy p(config_for(server));
    Ctx ctx;
    const auto reply = p.respond(Role::seek, ctx.get());
    CHECK(reply.error.empty());
    CHECK(reply.transcript.size() == 1);
    const auto parsed = parse_respo(Role::seek, reply.raw);
    REQUIRE(std::holds_alternative<SeekerResponse>(parsed));
    CHECK(std::get<SeekerResponse>(parsed).proposed_action == env::Action::left_click(5, 5));
    const auto sent = Json::parse(server.last_body());
    CHECK(sent["role"] == "seek");
    CHECK(sent["model"] == "mock-model");
    CHECK(sent["prompt"].get<std::string>().find("<RESPO>") != std::string::npos);
    CHECK(server.last_auth() == "Bearer secret");
}

TEST_CASE("plain-text bodies are accepted") {
    MockServer server([](const httplib::Request&, httplib::Response& res) { res.set_content(kCanned, "text/plain"); });
    RemotePolicy p(config_for(server));
    Ctx ctx;
    CHECK(p.respond(Role::seek, ctx.get()).raw == kCanned);
}

TEST_CASE("garbage replies exhaust retries") {
    MockServer server([](const httplib::Request&, httplib::Response& res) { res.set_content("lorem ipsum", "text/plain"); });
    RemotePolicy p(config_for(server, 2000, 2));
    Ctx ctx;
    const auto reply = p.respond(Role::seek, ctx.get());
    CHECK(reply.error == "RetriesExhausted");
    CHECK(reply.transcript.size() == 3);
    CHECK(server.hits() == 3);
}

TEST_CASE("an episode continues through exhausted retries") {
    MockServer server([](const httplib::Request&, httplib::Response& res) { res.set_content("garbage", "text/plain"); });
    RemotePolicy p(config_for(server, 2000, 2));
    auto spec = test::fixture("tea_room");
    auto cfg = scheduler::RunConfig::defaults_for(*spec);
    cfg.mode = scheduler::Mode::seeker_only;
    cfg.max_steps = 3;
    cfg.n_seek = 3;
    const auto ep = scheduler::run_episode(spec, scheduler::PolicySet::all(p), cfg);
    CHECK(ep.trajectory.t == 3);
    REQUIRE(ep.trajectory.steps.size() == 3);
    for (const auto& s : ep.trajectory.steps) {
        CHECK_FALSE(s.action);
        CHECK_FALSE(s.note.empty());
    }
    REQUIRE(ep.trajectory.transcripts.size() == 3);
    CHECK(ep.trajectory.transcripts[0].error == "RetriesExhausted");
    CHECK(server.hits() == 9);
}

TEST_CASE("a slow endpoint times out") {
    MockServer server([](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        res.set_content(kCanned, "text/plain");
    });
    RemotePolicy p(config_for(server, 150, 0));
    Ctx ctx;
    const auto reply = p.respond(Role::seek, ctx.get());
    CHECK(reply.error == "Timeout");
    REQUIRE(reply.transcript.size() == 1);
    CHECK(reply.transcript[0].error == "Timeout");
}

TEST_CASE("HTTP errors and unreachable hosts are transport errors") {
    MockServer server([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    RemotePolicy p(config_for(server, 1000, 1));
    Ctx ctx;
    CHECK(p.respond(Role::seek, ctx.get()).error == "TransportError");

    RemoteConfig dead;
    dead.endpoint = "http://127.0.0.1:1/x";
    dead.timeout = std::chrono::milliseconds(500);
    dead.max_retries = 0;
    CHECK(RemotePolicy(dead).respond(Role::seek, ctx.get()).error == "TransportError");
}

TEST_CASE("remote configuration is checked") {
    RemoteConfig c;
    c.endpoint = "https://example.invalid/x";
    CHECK_THROWS_AS(RemotePolicy{c}, TransportError);
    c.endpoint = "http://127.0.0.1:9/x";
    c.timeout = std::chrono::milliseconds(0);
    CHECK_THROWS_AS(RemotePolicy{c}, TransportError);
}
