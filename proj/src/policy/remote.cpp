#include <cstdlib>

#include <httplib.h>

#include "coast/policy/policy.hpp"
#include "coast/policy/prompts.hpp"

namespace coast::policy {
namespace {

std::string completion_text(const std::string& body) {
    Json j = Json::parse(body, nullptr, false);
    if (j.is_object()) {
        for (const char* key : {"completion", "text"}) {
            auto it = j.find(key);
            if (it != j.end() && it->is_string()) return it->get<std::string>();
        }
    }
    return body;
}

}  // namespace

RemoteConfig RemoteConfig::from_environment() {
    RemoteConfig c;
    const char* endpoint = std::getenv("COAST_ENDPOINT");
    if (!endpoint || !*endpoint) throw TransportError("COAST_ENDPOINT is not set");
    c.endpoint = endpoint;
    if (const char* key = std::getenv("COAST_API_KEY")) c.api_key = key;
    return c;
}

RemotePolicy::RemotePolicy(RemoteConfig config) : config_(std::move(config)) {
    constexpr std::string_view scheme = "http://";
    if (config_.endpoint.rfind(scheme, 0) != 0) {
        throw TransportError("endpoint must be an http:// URL: '" + config_.endpoint + "'");
    }
    if (config_.timeout.count() <= 0) throw TransportError("timeout must be positive");
    if (config_.max_retries < 0) throw TransportError("max_retries must be non-negative");
    const auto slash = config_.endpoint.find('/', scheme.size());
    scheme_host_port_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

PolicyReply RemotePolicy::respond(Role role, const PolicyContext& context) {
    PolicyReply reply;
    const std::string prompt = render_prompt(role, context);
    Json body{{"role", std::string(to_string(role))}, {"prompt", prompt}, {"max_tokens", config_.max_tokens}};
    if (!config_.model_name.empty()) body["model"] = config_.model_name;
    const std::string payload = util::canonical_dump(body);

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        TranscriptEntry entry{attempt, prompt, "", ""};
        httplib::Client client(scheme_host_port_);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());

        const auto started = std::chrono::steady_clock::now();
        auto res = client.Post(path_, headers, payload, "application/json");
        const auto elapsed = std::chrono::steady_clock::now() - started;

        if (!res) {
            const auto err = res.error();
            const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                                   (err == httplib::Error::Read && elapsed >= config_.timeout * 9 / 10);
            entry.error = timed_out ? "Timeout" : "TransportError: " + httplib::to_string(err);
            last_error = timed_out ? "Timeout" : "TransportError";
        } else if (res->status != 200) {
            entry.response = res->body;
            entry.error = "TransportError: HTTP " + std::to_string(res->status);
            last_error = "TransportError";
        } else {
            entry.response = completion_text(res->body);
            auto parsed = parse_respo(role, entry.response);
            if (!is_discarded(parsed)) {
                reply.raw = entry.response;
                reply.transcript.push_back(std::move(entry));
                return reply;
            }
            entry.error = "Discarded: " + std::get<Discarded>(parsed).reason;
            last_error = "RetriesExhausted";
        }
        reply.transcript.push_back(std::move(entry));
    }
    reply.error = last_error;
    return reply;
}

}  // namespace coast::policy
