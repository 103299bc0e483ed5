#include "bfmn/text.hpp"
#include "bfmn/error.hpp"
#include "bfmn/rng.hpp"

#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

namespace bfmn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadRating: return "BadRating";
    case ErrorCode::DuplicateParticipantRow: return "DuplicateParticipantRow";
    case ErrorCode::BadScore: return "BadScore";
    case ErrorCode::BadFlagRow: return "BadFlagRow";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NodeNotFound: return "NodeNotFound";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::EmptyAfterLookup: return "EmptyAfterLookup";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::ZeroNullVariance: return "ZeroNullVariance";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::InsufficientTwins: return "InsufficientTwins";
    case ErrorCode::MalformedAfterRetries: return "MalformedAfterRetries";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::EndpointUnavailable: return "EndpointUnavailable";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::MissingReport: return "MissingReport";
    }
    return "Unknown";
}

bool is_endpoint_error(ErrorCode code) {
    return code == ErrorCode::AuthError || code == ErrorCode::RateLimited ||
           code == ErrorCode::MalformedAfterRetries || code == ErrorCode::EndpointUnavailable;
}

namespace {

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string normalize_word(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto c = static_cast<unsigned char>(raw[i]);
        // U+00A0 no-break space counts as whitespace.
        if (c == 0xC2 && i + 1 < raw.size() && static_cast<unsigned char>(raw[i + 1]) == 0xA0) {
            pending_space = true;
            ++i;
            continue;
        }
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        if (c >= 'A' && c <= 'Z') {
            out.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (c == 0xC3 && i + 1 < raw.size()) {
            // Latin-1 supplement capitals U+00C0..U+00DE, except U+00D7 (multiplication sign).
            auto d = static_cast<unsigned char>(raw[i + 1]);
            if (d >= 0x80 && d <= 0x9E && d != 0x97) d = static_cast<unsigned char>(d + 0x20);
            out.push_back(static_cast<char>(c));
            out.push_back(static_cast<char>(d));
            ++i;
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char delim) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;

    // Strip a UTF-8 BOM.
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            row_has_content = true;
            break;
        case ',':
            row.push_back(std::move(field));
            field.clear();
            row_has_content = true;
            break;
        case '\r':
            break;
        case '\n':
            if (row_has_content || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            field.clear();
            row.clear();
            row_has_content = false;
            break;
        default:
            field.push_back(c);
            row_has_content = true;
        }
    }
    if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> split_resource_line(std::string_view line) {
    char delim = line.find('\t') != std::string_view::npos ? '\t' : ',';
    auto parts = split(line, delim);
    for (auto& p : parts) p = trim(p);
    return parts;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + path);
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s == "-0" || s.rfind("-0.", 0) == 0) {
        // Avoid "-0.00" for values that round to zero.
        bool all_zero = s.find_first_not_of("-0.") == std::string::npos;
        if (all_zero) s.erase(0, 1);
    }
    return s;
}

// --- rng -------------------------------------------------------------------

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::BadInput, "Rng::below with zero bound");
    // Rejection sampling on the top of the range removes modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw Error(ErrorCode::BadInput, "Rng::between with empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 finalizer over the combined value.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

IndexSampler::IndexSampler(std::size_t n) : perm_(n) {
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
}

std::span<const std::size_t> IndexSampler::draw(std::size_t k, Rng& rng) {
    if (k > perm_.size()) throw Error(ErrorCode::SampleTooLarge, "sample larger than population");
    const std::size_t n = perm_.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm_[i], perm_[j]);
    }
    return {perm_.data(), k};
}

} // namespace bfmn
