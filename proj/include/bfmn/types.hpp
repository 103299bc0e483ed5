#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace bfmn {

enum class Valence { negative, neutral, positive };

std::string_view to_string(Valence v);
std::optional<Valence> parse_valence(std::string_view s);

// Plutchik order; also the bit order of emotion lexicon masks and the
// column order of emotion lexicon files.
enum class Emotion { joy, trust, fear, surprise, sadness, disgust, anger, anticipation };

inline constexpr std::array<Emotion, 8> kAllEmotions{
    Emotion::joy,     Emotion::trust,   Emotion::fear,  Emotion::surprise,
    Emotion::sadness, Emotion::disgust, Emotion::anger, Emotion::anticipation,
};

std::string_view to_string(Emotion e);

} // namespace bfmn
