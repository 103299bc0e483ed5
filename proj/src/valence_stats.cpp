#include "bfmn/valence_stats.hpp"
#include "bfmn/error.hpp"
#include "bfmn/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bfmn {

double chi2_sf_df1(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(0.5 * x));
}

namespace {

// H from per-group rank sums, tie term sum(t^3 - t) and sizes.
KruskalWallisResult finish(double rank_sum_a, double rank_sum_b, double n_a, double n_b, double tie_term) {
    const double n = n_a + n_b;
    const double tie_correction = 1.0 - tie_term / (n * n * n - n);
    if (tie_correction <= 0.0) return {0.0, 1.0, true};
    double h = 12.0 / (n * (n + 1.0)) * (rank_sum_a * rank_sum_a / n_a + rank_sum_b * rank_sum_b / n_b) -
               3.0 * (n + 1.0);
    h /= tie_correction;
    h = std::max(h, 0.0);
    return {h, chi2_sf_df1(h), false};
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) throw Error(ErrorCode::BadInput, "Kruskal-Wallis needs two non-empty groups");
    if (a + b < 3) throw Error(ErrorCode::BadInput, "Kruskal-Wallis needs at least 3 pooled values");
}

} // namespace

KruskalWallisResult kruskal_wallis(std::span<const double> group_a, std::span<const double> group_b) {
    check_sizes(group_a.size(), group_b.size());

    struct Item {
        double value;
        bool in_a;
    };
    std::vector<Item> pooled;
    pooled.reserve(group_a.size() + group_b.size());
    for (double v : group_a) pooled.push_back({v, true});
    for (double v : group_b) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(), [](const Item& x, const Item& y) { return x.value < y.value; });

    double rank_sum_a = 0.0, rank_sum_b = 0.0, tie_term = 0.0;
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) (pooled[k].in_a ? rank_sum_a : rank_sum_b) += midrank;
        tie_term += t * t * t - t;
        i = j;
    }
    return finish(rank_sum_a, rank_sum_b, static_cast<double>(group_a.size()), static_cast<double>(group_b.size()),
                  tie_term);
}

KruskalWallisResult kruskal_wallis(const LikertCounts& group_a, const LikertCounts& group_b) {
    const std::size_t n_a = std::accumulate(group_a.begin(), group_a.end(), std::size_t{0});
    const std::size_t n_b = std::accumulate(group_b.begin(), group_b.end(), std::size_t{0});
    check_sizes(n_a, n_b);

    double rank_sum_a = 0.0, rank_sum_b = 0.0, tie_term = 0.0;
    double below = 0.0;
    for (std::size_t c = 0; c < group_a.size(); ++c) {
        const double t = static_cast<double>(group_a[c] + group_b[c]);
        if (t == 0.0) continue;
        const double midrank = below + 0.5 * (t + 1.0);
        rank_sum_a += midrank * static_cast<double>(group_a[c]);
        rank_sum_b += midrank * static_cast<double>(group_b[c]);
        tie_term += t * t * t - t;
        below += t;
    }
    return finish(rank_sum_a, rank_sum_b, static_cast<double>(n_a), static_cast<double>(n_b), tie_term);
}

namespace {

Valence direction(double word_mean, double baseline_mean) {
    if (word_mean < baseline_mean) return Valence::negative;
    if (word_mean > baseline_mean) return Valence::positive;
    return Valence::neutral;
}

} // namespace

ValenceLabel categorize_word(const ValenceSample& sample, std::span<const double> baseline, double alpha) {
    ValenceLabel out;
    out.word = sample.word;
    out.n_ratings = sample.ratings.size();
    if (!sample.ratings.empty()) {
        out.mean = std::accumulate(sample.ratings.begin(), sample.ratings.end(), 0.0) /
                   static_cast<double>(sample.ratings.size());
    }
    if (sample.ratings.size() < kMinRatingsForTest || baseline.empty()) return out;

    const auto kw = kruskal_wallis(std::span<const double>(sample.ratings), baseline);
    out.p_value = kw.p;
    if (kw.p < alpha) {
        const double base_mean =
            std::accumulate(baseline.begin(), baseline.end(), 0.0) / static_cast<double>(baseline.size());
        out.label = direction(*out.mean, base_mean);
    }
    return out;
}

std::map<std::string, ValenceLabel> categorize_group(const std::vector<AssociationRecord>& records, double alpha) {
    struct WordStats {
        LikertCounts counts{};
        std::size_t occurrences = 0;
    };
    std::map<std::string, WordStats> stats;
    LikertCounts total{};

    for (const auto& rec : records) {
        ++stats[rec.cue].occurrences;
        for (const auto& r : rec.responses) ++stats[r].occurrences;
        for (const auto& [word, rating] : rec.valences) {
            ++stats[word].counts[static_cast<std::size_t>(rating - kMinRating)];
            ++total[static_cast<std::size_t>(rating - kMinRating)];
        }
    }
    const std::size_t n_total = std::accumulate(total.begin(), total.end(), std::size_t{0});
    double sum_total = 0.0;
    for (std::size_t c = 0; c < total.size(); ++c) sum_total += static_cast<double>((c + 1) * total[c]);

    std::map<std::string, ValenceLabel> labels;
    for (const auto& [word, ws] : stats) {
        ValenceLabel lab;
        lab.word = word;
        lab.occurrences = ws.occurrences;
        const std::size_t n = std::accumulate(ws.counts.begin(), ws.counts.end(), std::size_t{0});
        lab.n_ratings = n;
        double sum = 0.0;
        for (std::size_t c = 0; c < ws.counts.size(); ++c) sum += static_cast<double>((c + 1) * ws.counts[c]);
        if (n > 0) lab.mean = sum / static_cast<double>(n);

        const std::size_t n_base = n_total - n;
        if (n >= kMinRatingsForTest && n_base > 0) {
            LikertCounts baseline{};
            for (std::size_t c = 0; c < total.size(); ++c) baseline[c] = total[c] - ws.counts[c];
            const auto kw = kruskal_wallis(ws.counts, baseline);
            lab.p_value = kw.p;
            if (kw.p < alpha) lab.label = direction(*lab.mean, (sum_total - sum) / static_cast<double>(n_base));
        }
        labels.emplace(word, std::move(lab));
    }
    return labels;
}

std::string valence_table_tsv(const std::map<std::string, ValenceLabel>& labels) {
    std::string out = "word\tlabel\tp\tmean\tn\n";
    for (const auto& [word, lab] : labels) {
        out += word;
        out += '\t';
        out += to_string(lab.label);
        out += '\t';
        out += lab.p_value ? format_fixed(*lab.p_value, 6) : "NA";
        out += '\t';
        out += lab.mean ? format_fixed(*lab.mean, 4) : "NA";
        out += '\t';
        out += std::to_string(lab.n_ratings);
        out += '\n';
    }
    return out;
}

} // namespace bfmn
