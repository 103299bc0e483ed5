#include "bfmn/chat_client.hpp"
#include "bfmn/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace bfmn {

using nlohmann::json;

std::string chat_payload_json(const ChatRequest& request) {
    json messages = json::array();
    for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    json payload{{"model", request.model}, {"messages", messages}, {"temperature", request.temperature}};
    if (request.max_tokens) payload["max_tokens"] = *request.max_tokens;
    return payload.dump();
}

std::optional<std::string> chat_content_from_body(const std::string& body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
    auto choices = parsed.find("choices");
    if (choices == parsed.end() || !choices->is_array() || choices->empty()) return std::nullopt;
    const auto& first = (*choices)[0];
    if (!first.contains("message") || !first["message"].is_object()) return std::nullopt;
    const auto& content = first["message"]["content"];
    if (!content.is_string()) return std::nullopt;
    return content.get<std::string>();
}

HttpChatClient::HttpChatClient(EndpointConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {
    const std::string& url = config_.base_url;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::BadConfig, "base_url needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::unique_ptr<HttpChatClient> HttpChatClient::from_environment(const EndpointConfig& config) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw Error(ErrorCode::AuthError, "environment variable " + config.api_key_env + " is not set");
    }
    return std::make_unique<HttpChatClient>(config, key);
}

ChatResponse HttpChatClient::complete(const ChatRequest& request) {
    httplib::Client cli(scheme_host_port_);
    cli.set_connection_timeout(config_.timeout_s, 0);
    cli.set_read_timeout(config_.timeout_s, 0);
    cli.set_write_timeout(config_.timeout_s, 0);
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

    ChatResponse out;
    auto res = cli.Post(path_prefix_ + "/chat/completions", headers, chat_payload_json(request), "application/json");
    if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    out.body = res->body;
    if (res->has_header("Retry-After")) {
        char* end = nullptr;
        const std::string v = res->get_header_value("Retry-After");
        double secs = std::strtod(v.c_str(), &end);
        if (end != v.c_str()) out.retry_after_s = secs;
    }
    if (out.status == 200) {
        if (auto content = chat_content_from_body(out.body)) {
            out.content = *content;
        } else {
            out.error = "response has no choices[0].message.content";
        }
    } else {
        out.error = "HTTP " + std::to_string(out.status);
    }
    return out;
}

ChatResponse complete_with_retry(ChatClient& client, const ChatRequest& request, const EndpointConfig& config) {
    auto sleep = [&](std::chrono::milliseconds ms) {
        if (config.sleeper) {
            config.sleeper(ms);
        } else {
            std::this_thread::sleep_for(ms);
        }
    };
    long long backoff = config.backoff_initial_ms;
    for (int attempt = 0;; ++attempt) {
        ChatResponse res = client.complete(request);
        if (res.status == 200) return res;
        if (res.status == 401 || res.status == 403) {
            throw Error(ErrorCode::AuthError, "endpoint rejected credentials (HTTP " + std::to_string(res.status) + ")");
        }
        const bool rate_limited = res.status == 429;
        const bool transient = rate_limited || res.status == 0 || res.status >= 500;
        if (!transient) {
            throw Error(ErrorCode::EndpointUnavailable, "HTTP " + std::to_string(res.status) + ": " + res.body);
        }
        if (attempt >= config.max_transient_retries) {
            if (rate_limited) throw Error(ErrorCode::RateLimited, "still rate limited after retries");
            throw Error(ErrorCode::EndpointUnavailable, res.error.empty() ? "endpoint unavailable" : res.error);
        }
        long long wait = backoff;
        if (res.retry_after_s) wait = std::max(wait, static_cast<long long>(*res.retry_after_s * 1000.0));
        sleep(std::chrono::milliseconds(std::min<long long>(wait, config.backoff_max_ms)));
        backoff = std::min<long long>(backoff * 2, config.backoff_max_ms);
    }
}

} // namespace bfmn
