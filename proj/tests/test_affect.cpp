#include "bfmn/affect.hpp"
#include "bfmn/error.hpp"
#include "bfmn/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace bfmn;

namespace {

LexicalResources small_lexicon() {
    LexicalResources lex;
    lex.emotion_lexicon["gioia"] = 0b10000001; // joy, anticipation
    lex.emotion_lexicon["paura"] = 0b00000100; // fear
    lex.emotion_lexicon["ansia"] = 0b10000100; // fear, anticipation
    lex.emotion_lexicon["tavolo"] = 0;
    lex.emotion_lexicon["fiducia"] = 0b00000010;
    lex.lemma_map["paure"] = "paura";
    return lex;
}

LexicalResources random_lexicon(std::size_t n, std::uint64_t seed) {
    LexicalResources lex;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        EmotionMask m = 0;
        for (std::size_t e = 0; e < kEmotionCount; ++e)
            if (rng.below(100) < 12 + 3 * e) m = static_cast<EmotionMask>(m | (1u << e));
        lex.emotion_lexicon["w" + std::to_string(i)] = m;
    }
    return lex;
}

} // namespace

TEST_CASE("emotion counts") {
    const auto lex = small_lexicon();
    auto c = emotion_counts({"gioia"}, lex);
    CHECK(c[static_cast<std::size_t>(Emotion::joy)] == 1);
    CHECK(c[static_cast<std::size_t>(Emotion::anticipation)] == 1);
    CHECK(c[static_cast<std::size_t>(Emotion::fear)] == 0);
    CHECK(emotion_counts({}, lex) == EmotionCounts{});

    // surface forms of one lemma count once
    c = emotion_counts({"paura", "paure", "ansia", "ignota"}, lex);
    CHECK(c[static_cast<std::size_t>(Emotion::fear)] == 2);

    LexicalResources ten;
    std::set<std::string> words;
    for (int i = 0; i < 10; ++i) {
        ten.emotion_lexicon["x" + std::to_string(i)] = i < 3 ? 0b100 : 0;
        words.insert("x" + std::to_string(i));
    }
    CHECK(emotion_counts(words, ten)[static_cast<std::size_t>(Emotion::fear)] == 3);
}

TEST_CASE("z-score errors and determinism") {
    const auto lex = small_lexicon();
    EmotionNullOptions o;
    o.seed = 5;
    o.n_null = 200;
    CHECK_THROWS_AS(emotion_zscores({}, lex, o), Error);
    try {
        emotion_zscores({"a", "b", "c", "d", "e", "f"}, lex, o);
        FAIL("expected SampleTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SampleTooLarge);
    }
    const auto a = emotion_zscores({"gioia", "ansia"}, lex, o);
    const auto b = emotion_zscores({"ansia", "gioia", "gioia"}, lex, o);
    CHECK(a.z == b.z);
    CHECK(a.sample_size == 2);
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        CHECK(a.counts[e] <= a.sample_size);
        CHECK(a.significant[e] == (std::abs(a.z[e]) >= a.z_critical));
    }
    // a sample equal to the whole vocabulary has zero null variance: z = 0
    const auto whole = emotion_zscores({"gioia", "paura", "ansia", "tavolo", "fiducia"}, lex, o);
    for (double z : whole.z) CHECK(z == 0.0);
}

TEST_CASE("exclude_unknown drops words missing from the lexicon") {
    const auto lex = small_lexicon();
    EmotionNullOptions o;
    o.seed = 1;
    o.n_null = 50;
    CHECK(emotion_zscores({"gioia", "sconosciuta"}, lex, o).sample_size == 2);
    o.exclude_unknown = true;
    CHECK(emotion_zscores({"gioia", "sconosciuta"}, lex, o).sample_size == 1);
}

TEST_CASE("null sd against a direct two-pass computation") {
    const auto lex = random_lexicon(300, 8);
    std::set<std::string> words;
    for (int i = 0; i < 20; ++i) words.insert("w" + std::to_string(i * 7));
    EmotionNullOptions o;
    o.seed = 21;
    o.n_null = 500;
    const auto prof = emotion_zscores(words, lex, o);

    // Replay the same draws and compute mean/sd with two passes.
    std::vector<EmotionMask> vocab;
    for (const auto& [w, m] : lex.emotion_lexicon) vocab.push_back(m);
    Rng rng(21);
    IndexSampler sampler(vocab.size());
    std::vector<std::array<double, kEmotionCount>> draws;
    for (int s = 0; s < 500; ++s) {
        std::array<double, kEmotionCount> c{};
        for (auto idx : sampler.draw(words.size(), rng))
            for (std::size_t e = 0; e < kEmotionCount; ++e) c[e] += (vocab[idx] >> e) & 1u;
        draws.push_back(c);
    }
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        double mean = 0;
        for (auto& d : draws) mean += d[e];
        mean /= draws.size();
        double var = 0;
        for (auto& d : draws) var += (d[e] - mean) * (d[e] - mean);
        const double sd = std::sqrt(var / draws.size());
        CHECK(prof.z[e] == doctest::Approx((prof.counts[e] - mean) / sd).epsilon(1e-9));
    }
}

TEST_CASE("z is stable across seeds at n_null = 1000") {
    const auto lex = random_lexicon(2000, 3);
    std::set<std::string> words;
    for (int i = 0; i < 25; ++i) words.insert("w" + std::to_string(i * 13));
    std::array<double, kEmotionCount> sum{}, sq{};
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        EmotionNullOptions o;
        o.seed = static_cast<std::uint64_t>(s + 100);
        const auto p = emotion_zscores(words, lex, o);
        for (std::size_t e = 0; e < kEmotionCount; ++e) {
            sum[e] += p.z[e];
            sq[e] += p.z[e] * p.z[e];
        }
    }
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
        const double m = sum[e] / seeds;
        CHECK(std::sqrt(std::max(0.0, sq[e] / seeds - m * m)) < 0.15);
    }
}
