#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bfmn {

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 1.0;
    std::optional<int> max_tokens;
};

struct ChatResponse {
    int status = 0;            // HTTP status; 0 when the transport failed
    std::string content;       // assistant message text on success
    std::string body;          // raw response body
    std::optional<double> retry_after_s;
    std::string error;
};

// Anything that can answer an OpenAI-style chat-completions request.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct EndpointConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-oss-20b";
    double temperature = 1.0;
    std::optional<int> max_tokens;
    std::string api_key_env = "OPENAI_API_KEY";
    int timeout_s = 120;
    int max_malformed_retries = 3;  // re-asks after an unparseable reply
    int max_transient_retries = 5;  // 429 / 5xx / transport failures
    int backoff_initial_ms = 1000;
    int backoff_max_ms = 60000;
    std::size_t max_in_flight = 4;
    Sleeper sleeper;                // defaults to std::this_thread::sleep_for
};

std::string chat_payload_json(const ChatRequest& request);
// Assistant text of choices[0].message.content; nullopt when absent.
std::optional<std::string> chat_content_from_body(const std::string& body);

// POSTs to <base_url>/chat/completions with a bearer token.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(EndpointConfig config, std::string api_key);

    // Reads the key from config.api_key_env; throws Error(AuthError) when unset.
    static std::unique_ptr<HttpChatClient> from_environment(const EndpointConfig& config);

    ChatResponse complete(const ChatRequest& request) override;

private:
    EndpointConfig config_;
    std::string api_key_;
    std::string scheme_host_port_;
    std::string path_prefix_;
};

// Sends `request`, retrying rate limits, 5xx and transport errors with
// exponential backoff. Throws Error(AuthError) on 401/403,
// Error(RateLimited) when 429 persists, Error(EndpointUnavailable) otherwise.
ChatResponse complete_with_retry(ChatClient& client, const ChatRequest& request, const EndpointConfig& config);

} // namespace bfmn
