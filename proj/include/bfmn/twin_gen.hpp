#pragma once

#include "bfmn/chat_client.hpp"
#include "bfmn/ingestion.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bfmn {

enum class Gender { male, female };
enum class Education { highschool_final_year, bsc_psychology, bsc_physics };
enum class Socioeconomic { low, medium_low, medium, medium_high, high };
enum class PromptLanguage { it, en };

inline constexpr int kHighSchoolFinalYear = 5;
inline constexpr int kMinTwinAge = 18;
inline constexpr int kMaxTwinAge = 25;
inline constexpr int kMaxHighSchoolAge = 19;

std::string to_string(Gender g);
std::string to_string(Education e);
std::string to_string(Socioeconomic s);
std::optional<Education> parse_education(std::string_view s);
std::optional<PromptLanguage> parse_language(std::string_view s);

struct TwinProfile {
    Gender gender = Gender::female;
    int age = 20;
    Education education = Education::bsc_psychology;
    int year = 1; // 1..3 for BSc, kHighSchoolFinalYear for high school
    Socioeconomic socioeconomic = Socioeconomic::medium;

    void validate() const;
    // Stable text form used for hashing and logs.
    std::string canonical() const;
    bool operator==(const TwinProfile&) const = default;
};

// Uniform over each attribute's range. High schoolers are 18-19 in their
// final year; BSc students are 18-25 in year 1-3.
TwinProfile sample_profile(std::uint64_t seed, Education education);

// Persona prompt with gendered Italian morphology or the English wording.
std::string render_prompt(const TwinProfile& profile, PromptLanguage language);

// Task message for one cue asking for three associations and ratings as JSON.
std::string association_instruction(const std::string& cue, PromptLanguage language);
// Task message asking for 1..5 ratings of every questionnaire item as JSON.
std::string masit_instruction(const std::vector<std::string>& items, PromptLanguage language);

// Maps a rating given as number or words ("molto positivo", "neutral", ...)
// onto 1..5.
std::optional<int> likert_from_text(std::string_view text);
std::string likert_label(int rating, PromptLanguage language);

struct ParsedCue {
    std::vector<std::string> responses;
    std::map<std::string, int> valences;
    std::vector<std::string> warnings;
};

// Parses a model reply for `cue`. Extra associations are cut to the first
// three; ratings that cannot be mapped leave the word unrated. nullopt when
// the reply holds no usable JSON object with an association list.
std::optional<ParsedCue> parse_association_reply(const std::string& reply, const std::string& cue);
std::optional<std::vector<int>> parse_masit_reply(const std::string& reply, std::size_t item_count);

// Append-only JSON-lines log of every request. Lookups return the last
// successful raw reply for a key, which makes reruns skip finished work.
class RequestLog {
public:
    RequestLog() = default;                    // in memory only
    explicit RequestLog(std::string path);     // loads existing entries

    std::optional<std::string> lookup(const std::string& key) const;
    void append(const std::string& key, const std::string& profile_hash, const std::string& participant_id,
                const std::string& cue, const std::string& raw_reply, bool ok, int attempt);
    std::size_t appended() const;

private:
    std::string path_;
    mutable std::mutex mutex_;
    std::map<std::string, std::string> ok_replies_;
    std::size_t appended_ = 0;
};

struct CueSet {
    std::string id;
    std::vector<std::string> cues;
    std::optional<std::size_t> declared_size; // from a "#! size = N" line

    // Administered set size: the declared size when the file lists fewer cues.
    std::size_t size() const { return declared_size ? std::max(*declared_size, cues.size()) : cues.size(); }
};
// One cue per line; '#' comments. The id defaults to the file stem.
CueSet load_cue_set(const std::string& path, const std::string& id = {});

struct TwinTask {
    TwinProfile profile;
    std::string participant_id; // gpt_oss_<group>_<NNN>
    std::string group;
};

std::string twin_participant_id(const std::string& group, std::size_t index);
std::string group_for_education(Education e);

// Profiles drawn with per-twin seeds derived from `seed`.
std::vector<TwinTask> plan_twins(std::size_t n, Education education, std::uint64_t seed);

struct MasItSpec {
    std::vector<std::string> items;
    FactorMap factors;
};

struct TwinRun {
    TwinTask task;
    std::string cue_set_id;
    std::map<std::string, std::string> raw_responses; // cue -> last raw reply
    std::vector<AssociationRecord> parsed;
    std::vector<std::string> missing_cues;
    std::optional<MasItScore> mas_it;
    std::string model_id;
    std::vector<std::string> warnings;
    std::size_t requests_issued = 0;
};

// Key under which a request is logged: hash of profile, participant, cue
// (or "#masit"), and model.
std::string request_key(const TwinTask& task, const std::string& cue, const std::string& model);

TwinRun run_twin(const TwinTask& task, const CueSet& cues, const EndpointConfig& endpoint, ChatClient& client,
                 RequestLog& log, PromptLanguage language, const MasItSpec* masit = nullptr);

// Runs every task with at most endpoint.max_in_flight concurrent twins.
// Output order follows `tasks`.
std::vector<TwinRun> simulate_twins(const std::vector<TwinTask>& tasks, const CueSet& cues,
                                    const EndpointConfig& endpoint, ChatClient& client, RequestLog& log,
                                    PromptLanguage language, const MasItSpec* masit = nullptr);

// Uniform subsample without replacement of each group down to its human
// count; groups absent from `human_counts` are dropped. Input order is kept.
// Throws Error(InsufficientTwins).
std::vector<TwinRun> match_group_sizes(const std::vector<TwinRun>& twins,
                                       const std::map<std::string, std::size_t>& human_counts, std::uint64_t seed);

} // namespace bfmn
