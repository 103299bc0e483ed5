#include "bfmn/concreteness.hpp"
#include "bfmn/error.hpp"
#include "bfmn/rng.hpp"
#include "bfmn/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace bfmn {

std::map<std::string, Valence> lemma_valence_propagate(const std::map<std::string, ValenceLabel>& labels,
                                                       const std::map<std::string, std::string>& lemma_map) {
    std::map<std::string, std::array<std::size_t, 3>> votes;
    for (const auto& [word, lab] : labels) {
        auto it = lemma_map.find(word);
        const std::string& lemma = it == lemma_map.end() ? word : it->second;
        votes[lemma][static_cast<std::size_t>(lab.label)] += std::max<std::size_t>(1, lab.occurrences);
    }
    std::map<std::string, Valence> out;
    for (const auto& [lemma, v] : votes) out.emplace(lemma, aura_from_counts(lemma, v).polarity);
    return out;
}

double FrameScores::coverage() const {
    const std::size_t total = matched.size() + unmatched.size();
    return total == 0 ? 0.0 : static_cast<double>(matched.size()) / static_cast<double>(total);
}

FrameScores frame_concreteness(const SemanticFrame& frame, const std::map<std::string, double>& norms,
                               const std::map<std::string, std::string>& lemma_map) {
    if (frame.members.empty()) throw Error(ErrorCode::EmptyFrame, "frame of '" + frame.target + "' has no members");
    FrameScores out;
    for (const auto& member : frame.members) {
        auto lm = lemma_map.find(member);
        const std::string& lemma = lm == lemma_map.end() ? member : lm->second;
        if (auto it = norms.find(lemma); it != norms.end()) {
            out.scores.push_back(it->second);
            out.matched.push_back(lemma);
        } else {
            out.unmatched.push_back(member);
        }
    }
    if (out.scores.empty()) {
        throw Error(ErrorCode::EmptyAfterLookup, "no member of '" + frame.target + "' has a concreteness norm");
    }
    return out;
}

NullDistribution null_distribution(std::size_t k, std::span<const double> norm_scores, std::size_t n_samples,
                                   std::uint64_t seed) {
    if (k == 0) throw Error(ErrorCode::BadInput, "null list length must be positive");
    if (k > norm_scores.size()) {
        throw Error(ErrorCode::KTooLarge,
                    "k = " + std::to_string(k) + " exceeds " + std::to_string(norm_scores.size()) + " norms");
    }
    if (n_samples == 0) throw Error(ErrorCode::BadInput, "n_samples must be positive");

    NullDistribution out;
    out.sample_means.reserve(n_samples);
    out.pooled_scores.reserve(n_samples * k);
    Rng rng(seed);
    IndexSampler sampler(norm_scores.size());
    for (std::size_t s = 0; s < n_samples; ++s) {
        double sum = 0.0;
        for (auto idx : sampler.draw(k, rng)) {
            sum += norm_scores[idx];
            out.pooled_scores.push_back(norm_scores[idx]);
        }
        out.sample_means.push_back(sum / static_cast<double>(k));
    }
    const double n = static_cast<double>(n_samples);
    out.mean = std::accumulate(out.sample_means.begin(), out.sample_means.end(), 0.0) / n;
    double ss = 0.0;
    for (double m : out.sample_means) ss += (m - out.mean) * (m - out.mean);
    out.stddev = std::sqrt(ss / n);
    return out;
}

NullDistribution null_distribution(std::size_t k, const std::map<std::string, double>& norms, std::size_t n_samples,
                                   std::uint64_t seed) {
    std::vector<double> scores;
    scores.reserve(norms.size());
    for (const auto& [w, s] : norms) scores.push_back(s);
    return null_distribution(k, std::span<const double>(scores), n_samples, seed);
}

double two_sided_critical_z(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadInput, "alpha must lie in (0, 1)");
    // Solve erfc(z / sqrt 2) = alpha by bisection; erfc is monotone.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::erfc(mid / std::sqrt(2.0)) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sum_sq_dev(std::span<const double> x, double mean) {
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss;
}

} // namespace

double cohens_d(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::BadInput, "Cohen's d of an empty sample");
    const double ma = mean_of(a), mb = mean_of(b);
    const double dof = static_cast<double>(a.size() + b.size()) - 2.0;
    if (dof <= 0.0) return 0.0;
    const double pooled = std::sqrt((sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / dof);
    return pooled > 0.0 ? std::abs(ma - mb) / pooled : 0.0;
}

double cliffs_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::BadInput, "Cliff's delta of an empty sample");
    std::vector<double> sorted(b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    long double dominance = 0;
    for (double x : a) {
        const auto less = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        const auto greater = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        dominance += static_cast<long double>(less) - static_cast<long double>(greater);
    }
    return static_cast<double>(std::abs(dominance) /
                               (static_cast<long double>(a.size()) * static_cast<long double>(b.size())));
}

double cliffs_delta_brute(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::BadInput, "Cliff's delta of an empty sample");
    long long dominance = 0;
    for (double x : a) {
        for (double y : b) dominance += (x > y) - (x < y);
    }
    return std::abs(static_cast<double>(dominance)) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

ConcretenessResult concreteness_test(const SemanticFrame& frame, const std::map<std::string, double>& norms,
                                     const std::map<std::string, std::string>& lemma_map,
                                     const ConcretenessOptions& options) {
    const auto fs = frame_concreteness(frame, norms, lemma_map);
    ConcretenessResult r;
    r.group_tag = frame.induced.group_tag();
    r.keyword = frame.target;
    r.k = frame.member_count();
    r.matched = fs.scores.size();
    r.low_coverage = fs.coverage() < kLowCoverageThreshold;
    r.mean_frame = mean_of(fs.scores);

    const auto null = null_distribution(r.matched, norms, options.n_samples, options.seed);
    r.mean_null = null.mean;
    r.std_null = null.stddev;
    r.cohens_d = cohens_d(fs.scores, null.pooled_scores);
    r.cliffs_delta = cliffs_delta(fs.scores, null.pooled_scores);

    if (null.stddev > 0.0) {
        r.z = (r.mean_frame - r.mean_null) / null.stddev;
        // Cutoff at the 4 decimals tables quote (1.6449 for alpha = 0.1).
        const double cutoff = std::round(two_sided_critical_z(options.alpha) * 1e4) / 1e4;
        r.significant = std::abs(r.z) > cutoff;
    } else {
        r.z = 0.0;
        r.significant = false;
        r.diagnostic = std::string(to_string(ErrorCode::ZeroNullVariance)) + ": null sample means are all equal";
    }
    if (r.low_coverage) {
        const std::string note = "low norm coverage (" + format_fixed(100.0 * fs.coverage(), 1) + "%)";
        r.diagnostic = r.diagnostic ? *r.diagnostic + "; " + note : note;
    }
    return r;
}

std::string concreteness_report_tsv(std::vector<ConcretenessResult> results) {
    std::stable_sort(results.begin(), results.end(), [](const ConcretenessResult& a, const ConcretenessResult& b) {
        return a.mean_diff() > b.mean_diff();
    });
    std::string out = "group\tkeyword\tk\tmean_diff\tZ\tcohens_d\tmean_frame\tcliffs_delta\n";
    for (const auto& r : results) {
        out += r.group_tag + "\t" + r.keyword + "\t" + std::to_string(r.k) + "\t" + format_fixed(r.mean_diff(), 2) +
               "\t" + format_fixed(r.z, 2) + "\t" + format_fixed(r.cohens_d, 2) + "\t" +
               format_fixed(r.mean_frame, 2) + "\t" + format_fixed(r.cliffs_delta, 2) + "\n";
    }
    return out;
}

} // namespace bfmn
