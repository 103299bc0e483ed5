#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bfmn {

enum class ErrorCode {
    Io,
    BadConfig,
    BadInput,
    MissingColumn,
    BadRating,
    DuplicateParticipantRow,
    BadScore,
    BadFlagRow,
    DegenerateInput,
    NodeNotFound,
    EmptyGraph,
    SampleTooLarge,
    EmptyAfterLookup,
    KTooLarge,
    ZeroNullVariance,
    EmptyFrame,
    InsufficientTwins,
    MalformedAfterRetries,
    AuthError,
    RateLimited,
    EndpointUnavailable,
    UnknownGroup,
    UnknownTarget,
    MissingReport,
};

std::string_view to_string(ErrorCode code);

// True for failures caused by the chat endpoint rather than by local data.
bool is_endpoint_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace bfmn
