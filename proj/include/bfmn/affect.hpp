#pragma once

#include "bfmn/ingestion.hpp"
#include "bfmn/types.hpp"

#include <array>
#include <cstdint>
#include <set>
#include <string>

namespace bfmn {

using EmotionCounts = std::array<std::size_t, kEmotionCount>;

// Words are lemmatized first; each distinct lemma adds 1 to every emotion
// it is tagged with.
EmotionCounts emotion_counts(const std::set<std::string>& words, const LexicalResources& lex);

inline constexpr std::size_t kDefaultEmotionNulls = 1000;
inline constexpr double kEmotionZCritical = 1.96;

struct EmotionNullOptions {
    std::size_t n_null = kDefaultEmotionNulls;
    std::uint64_t seed = 0;
    double z_critical = kEmotionZCritical;
    // Drop lemmas missing from the lexicon instead of letting them dilute counts.
    bool exclude_unknown = false;
};

struct EmotionProfile {
    EmotionCounts counts{};
    std::array<double, kEmotionCount> z{};
    std::array<bool, kEmotionCount> significant{};
    std::size_t sample_size = 0;
    double z_critical = kEmotionZCritical;

    double z_of(Emotion e) const { return z[static_cast<std::size_t>(e)]; }
    bool significant_of(Emotion e) const { return significant[static_cast<std::size_t>(e)]; }
};

// z_e = (observed_e - null mean_e) / null sd_e, the null being emotion
// counts of `n_null` word lists of the same size drawn uniformly without
// replacement from the lexicon vocabulary. A zero null sd gives z = 0.
// Throws Error(SampleTooLarge) when the sample outgrows the vocabulary and
// Error(BadInput) for an empty sample.
EmotionProfile emotion_zscores(const std::set<std::string>& words, const LexicalResources& lex,
                               const EmotionNullOptions& options);

} // namespace bfmn
