#include "bfmn/affect.hpp"
#include "bfmn/error.hpp"
#include "bfmn/rng.hpp"

#include <cmath>
#include <vector>

namespace bfmn {

namespace {

std::set<std::string> lemma_set(const std::set<std::string>& words, const LexicalResources& lex, bool exclude_unknown) {
    std::set<std::string> lemmas;
    for (const auto& w : words) {
        const auto& lemma = lex.lemmatize(w);
        if (exclude_unknown && !lex.emotion_lexicon.count(lemma)) continue;
        lemmas.insert(lemma);
    }
    return lemmas;
}

void add_mask(EmotionCounts& counts, EmotionMask mask) {
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        if (mask & (1u << e)) ++counts[e];
    }
}

} // namespace

EmotionCounts emotion_counts(const std::set<std::string>& words, const LexicalResources& lex) {
    EmotionCounts counts{};
    for (const auto& lemma : lemma_set(words, lex, false)) {
        if (auto it = lex.emotion_lexicon.find(lemma); it != lex.emotion_lexicon.end()) add_mask(counts, it->second);
    }
    return counts;
}

EmotionProfile emotion_zscores(const std::set<std::string>& words, const LexicalResources& lex,
                               const EmotionNullOptions& options) {
    const auto lemmas = lemma_set(words, lex, options.exclude_unknown);
    if (lemmas.empty()) throw Error(ErrorCode::BadInput, "emotion profile of an empty word set");

    EmotionProfile profile;
    profile.sample_size = lemmas.size();
    profile.z_critical = options.z_critical;
    for (const auto& lemma : lemmas) {
        if (auto it = lex.emotion_lexicon.find(lemma); it != lex.emotion_lexicon.end()) {
            add_mask(profile.counts, it->second);
        }
    }

    std::vector<EmotionMask> vocabulary;
    vocabulary.reserve(lex.emotion_lexicon.size());
    for (const auto& [lemma, mask] : lex.emotion_lexicon) vocabulary.push_back(mask);
    if (profile.sample_size > vocabulary.size()) {
        throw Error(ErrorCode::SampleTooLarge, std::to_string(profile.sample_size) + " words but lexicon holds " +
                                                   std::to_string(vocabulary.size()));
    }
    if (options.n_null == 0) throw Error(ErrorCode::BadInput, "n_null must be positive");

    std::array<double, kEmotionCount> sum{}, sum_sq{};
    Rng rng(options.seed);
    IndexSampler sampler(vocabulary.size());
    for (std::size_t s = 0; s < options.n_null; ++s) {
        EmotionCounts c{};
        for (auto idx : sampler.draw(profile.sample_size, rng)) add_mask(c, vocabulary[idx]);
        for (std::size_t e = 0; e < kEmotionCount; ++e) {
            const double x = static_cast<double>(c[e]);
            sum[e] += x;
            sum_sq[e] += x * x;
        }
    }
    const double n = static_cast<double>(options.n_null);
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        const double mean = sum[e] / n;
        const double var = std::max(0.0, sum_sq[e] / n - mean * mean);
        const double sd = std::sqrt(var);
        profile.z[e] = sd > 1e-12 ? (static_cast<double>(profile.counts[e]) - mean) / sd : 0.0;
        profile.significant[e] = std::abs(profile.z[e]) >= options.z_critical;
    }
    return profile;
}

} // namespace bfmn
