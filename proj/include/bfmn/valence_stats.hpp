#pragma once

#include "bfmn/ingestion.hpp"
#include "bfmn/types.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bfmn {

inline constexpr double kDefaultValenceAlpha = 0.1;
inline constexpr std::size_t kMinRatingsForTest = 3;

struct KruskalWallisResult {
    double h = 0.0;
    double p = 1.0;
    bool degenerate = false; // every pooled value identical; h = 0, p = 1
};

// Two-group Kruskal-Wallis H on midranks with the standard tie correction,
// p from the chi-square survival function with one degree of freedom.
// Throws Error(BadInput) when a group is empty or the pooled size is < 3.
KruskalWallisResult kruskal_wallis(std::span<const double> group_a, std::span<const double> group_b);

// Same statistic for two histograms over the Likert categories 1..5.
// Runs in O(5) and is what group categorization uses.
using LikertCounts = std::array<std::size_t, kMaxRating>;
KruskalWallisResult kruskal_wallis(const LikertCounts& group_a, const LikertCounts& group_b);

// Survival function of chi-square with 1 degree of freedom.
double chi2_sf_df1(double x);

struct ValenceSample {
    std::string word;
    std::vector<double> ratings;
};

struct ValenceLabel {
    std::string word;
    Valence label = Valence::neutral;
    std::optional<double> p_value;
    std::optional<double> mean;
    std::size_t n_ratings = 0;
    std::size_t occurrences = 0; // appearances as cue or response in the group
};

// `baseline` must hold every rating of the group except this word's own.
ValenceLabel categorize_word(const ValenceSample& sample, std::span<const double> baseline,
                             double alpha = kDefaultValenceAlpha);

// One label for every word appearing as cue or response in `records`.
std::map<std::string, ValenceLabel> categorize_group(const std::vector<AssociationRecord>& records,
                                                     double alpha = kDefaultValenceAlpha);

// Audit table: word, label, p, mean, n.
std::string valence_table_tsv(const std::map<std::string, ValenceLabel>& labels);

} // namespace bfmn
