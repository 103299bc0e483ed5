#pragma once

#include "bfmn/frames.hpp"
#include "bfmn/ingestion.hpp"
#include "bfmn/valence_stats.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bfmn {

inline constexpr std::size_t kDefaultConcretenessNulls = 300;
inline constexpr double kDefaultConcretenessAlpha = 0.1;
inline constexpr double kLowCoverageThreshold = 0.5;

// Majority vote of surface-form labels per lemma, each form weighted by its
// occurrence count (at least 1). Ties give neutral.
std::map<std::string, Valence> lemma_valence_propagate(const std::map<std::string, ValenceLabel>& labels,
                                                       const std::map<std::string, std::string>& lemma_map);

struct FrameScores {
    std::vector<double> scores;           // one per matched member, member order
    std::vector<std::string> matched;     // lemmas found in the norms
    std::vector<std::string> unmatched;   // member words without a norm
    double coverage() const;
};

// Looks up every member (never the target) by lemma; multi-word members are
// single keys. Throws Error(EmptyFrame) for an empty frame and
// Error(EmptyAfterLookup) when nothing matches.
FrameScores frame_concreteness(const SemanticFrame& frame, const std::map<std::string, double>& norms,
                               const std::map<std::string, std::string>& lemma_map);

struct NullDistribution {
    double mean = 0.0;
    double stddev = 0.0;               // population sd of the sample means
    std::vector<double> sample_means;
    std::vector<double> pooled_scores; // every sampled word score, sample by sample
};

// `n_samples` lists of k scores drawn uniformly without replacement from
// `norm_scores`. Throws Error(KTooLarge) when k exceeds the pool.
NullDistribution null_distribution(std::size_t k, std::span<const double> norm_scores, std::size_t n_samples,
                                   std::uint64_t seed);
NullDistribution null_distribution(std::size_t k, const std::map<std::string, double>& norms,
                                   std::size_t n_samples, std::uint64_t seed);

// Two-sided normal critical value: |z| beyond it is significant at `alpha`.
double two_sided_critical_z(double alpha);

// |mean(a) - mean(b)| / pooled sd.
double cohens_d(std::span<const double> a, std::span<const double> b);

// |P(a > b) - P(a < b)| over all pairs, by sorting b and binary search.
double cliffs_delta(std::span<const double> a, std::span<const double> b);
// Reference O(|a||b|) version.
double cliffs_delta_brute(std::span<const double> a, std::span<const double> b);

struct ConcretenessOptions {
    std::size_t n_samples = kDefaultConcretenessNulls;
    std::uint64_t seed = 0;
    double alpha = kDefaultConcretenessAlpha;
};

struct ConcretenessResult {
    std::string group_tag;
    std::string keyword;
    std::size_t k = 0;         // frame degree
    std::size_t matched = 0;   // members with a norm; the null list length
    double mean_frame = 0.0;
    double mean_null = 0.0;
    double std_null = 0.0;
    double z = 0.0;
    double cohens_d = 0.0;
    double cliffs_delta = 0.0;
    bool significant = false;
    bool low_coverage = false;
    std::optional<std::string> diagnostic;

    double mean_diff() const { return mean_frame - mean_null; }
};

ConcretenessResult concreteness_test(const SemanticFrame& frame, const std::map<std::string, double>& norms,
                                     const std::map<std::string, std::string>& lemma_map,
                                     const ConcretenessOptions& options);

// Columns: group, keyword, k, mean_diff, Z, cohens_d, mean_frame,
// cliffs_delta; rows by decreasing mean_diff.
std::string concreteness_report_tsv(std::vector<ConcretenessResult> results);

} // namespace bfmn
