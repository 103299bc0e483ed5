#pragma once

#include "bfmn/kv_config.hpp"
#include "bfmn/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bfmn {

inline constexpr std::size_t kMaxResponses = 3;
inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 5;

// One participant's answers for one cue.
struct AssociationRecord {
    std::string participant_id;
    std::string group_tag;
    std::string cue;
    std::vector<std::string> responses;    // 0..3 normalized words, never blank
    std::map<std::string, int> valences;   // cue and given responses only, 1..5

    // Throws Error(BadInput) when any record invariant is violated.
    void validate() const;
};

// Column names of the association file.
struct ColumnSpec {
    std::string participant_id = "participant_id";
    std::string cue = "cue";
    std::array<std::string, kMaxResponses> responses{"response_1", "response_2", "response_3"};
    std::string valence_cue = "valence_cue";
    std::array<std::string, kMaxResponses> valence_responses{"valence_r1", "valence_r2", "valence_r3"};
    std::string masit_participant_id = "participant_id";
    std::string masit_item_prefix = "item_";

    // Overrides from the `[columns]` section of a key-value config.
    static ColumnSpec from_config(const KvConfig& cfg);
};

struct RowDiagnostic {
    std::size_t row = 0; // 1-based data row (header excluded)
    std::string code;    // BadRating, DuplicateParticipantRow, ...
    std::string message;
};

struct AssociationParse {
    std::vector<AssociationRecord> records;
    std::vector<RowDiagnostic> diagnostics;
};

// Derived from the participant id prefix: trailing "_<digits>" is dropped
// and a leading "gpt_oss_" becomes "gpt_" (gpt_oss_psychology_001 ->
// gpt_psychology).
std::string group_tag_from_id(const std::string& participant_id);

AssociationParse parse_associations_text(const std::string& csv_text, const ColumnSpec& spec = {});
AssociationParse parse_associations(const std::string& path, const ColumnSpec& spec = {});

// Inverse of parse_associations (same column layout as ColumnSpec defaults).
std::string write_associations_csv(const std::vector<AssociationRecord>& records, const ColumnSpec& spec = {});

struct DroppedParticipant {
    std::string participant_id;
    std::size_t missing_cells = 0;
    std::size_t expected_cells = 0;
};

struct CleanResult {
    std::vector<AssociationRecord> kept;
    std::vector<AssociationRecord> dropped;
    std::vector<DroppedParticipant> dropped_participants; // sorted by id
};

// Drops every participant whose missing response cells reach 1/3 of
// 3 * cue_set_size. Cues a participant never answered count as fully missing.
CleanResult clean_participants(const std::vector<AssociationRecord>& records, std::size_t cue_set_size);

// --- MAS-IT --------------------------------------------------------------

enum class MasItFactor { evaluation, everyday_social, passive_observation };
std::string to_string(MasItFactor f);

// Factor -> 1-based item indices. Supplied by configuration.
using FactorMap = std::map<MasItFactor, std::vector<std::size_t>>;
FactorMap factor_map_from_config(const KvConfig& cfg);

struct MasItScore {
    std::string participant_id;
    std::vector<int> item_scores;
    int total = 0;
    std::map<MasItFactor, int> factor_scores;

    static MasItScore make(std::string participant_id, std::vector<int> items, const FactorMap& factors = {});
};

struct MasItParse {
    std::vector<MasItScore> scores;
    std::vector<RowDiagnostic> diagnostics;
};

MasItParse parse_masit_text(const std::string& csv_text, const FactorMap& factors = {}, const ColumnSpec& spec = {});
MasItParse parse_masit(const std::string& path, const FactorMap& factors = {}, const ColumnSpec& spec = {});
std::string write_masit_csv(const std::vector<MasItScore>& scores, std::size_t item_count);

enum class Subgroup { low_anxiety, high_anxiety, excluded, unsplit };
std::string to_string(Subgroup s);

struct GroupAssignment {
    std::string participant_id;
    Subgroup subgroup = Subgroup::unsplit;
};

// Midpoint median of the totals (mean of the two central values when even).
double median_total(const std::vector<MasItScore>& scores);

// Strict split around the within-sample median; totals equal to it are excluded.
std::vector<GroupAssignment> assign_subgroups(const std::vector<MasItScore>& scores);

// --- lexical resources -----------------------------------------------------

inline constexpr std::size_t kEmotionCount = 8;
using EmotionMask = std::uint8_t;

struct LexicalResources {
    std::map<std::string, std::string> lemma_map;      // surface -> lemma
    std::map<std::string, EmotionMask> emotion_lexicon; // lemma -> bit i set for emotion i
    std::map<std::string, double> concreteness_norms;  // lemma -> 1..5
    std::map<std::string, std::string> translation_map; // word -> display word
    std::vector<std::string> warnings;

    // Lemma of a (normalized) word; the word itself when unmapped.
    const std::string& lemmatize(const std::string& word) const;
    std::string display(const std::string& word) const;
};

inline constexpr double kNormMin = 1.0;
inline constexpr double kNormMax = 5.0;

std::map<std::string, std::string> load_pair_map(const std::string& path, std::vector<std::string>& warnings);
std::map<std::string, EmotionMask> load_emotion_lexicon(const std::string& path, std::vector<std::string>& warnings);
std::map<std::string, double> load_concreteness_norms(const std::string& path, std::vector<std::string>& warnings);

// Empty paths leave the corresponding resource empty.
LexicalResources load_resources(const std::string& lemma_path, const std::string& emotion_path,
                                const std::string& concreteness_path, const std::string& translation_path = {});

// --- edge frequencies --------------------------------------------------------

using WordPair = std::pair<std::string, std::string>; // first <= second
WordPair make_word_pair(const std::string& a, const std::string& b);

// Counts every cue-response instance before deduplication. Kept outside
// the graph, which stays unweighted.
using EdgeFrequencyTable = std::map<WordPair, std::size_t>;
EdgeFrequencyTable edge_frequency_table(const std::vector<AssociationRecord>& records);

} // namespace bfmn
