#include "bfmn/frames.hpp"
#include "bfmn/text.hpp"

#include <algorithm>
#include <iterator>

namespace bfmn {

std::vector<std::pair<std::string, std::string>> SemanticFrame::induced_edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : induced.edges()) out.emplace_back(induced.word(a), induced.word(b));
    return out;
}

SemanticFrame extract_frame(const Bfmn& g, const std::string& target) {
    const NodeId t = g.require(target);
    SemanticFrame frame;
    frame.target = target;
    frame.target_valence = g.valence(t);

    const auto& nbrs = g.neighbors(t);
    std::map<std::string, Valence> labels{{target, frame.target_valence}};
    for (NodeId v : nbrs) {
        frame.members.push_back(g.word(v)); // ids are lexicographic, so already sorted
        frame.member_valences.emplace(g.word(v), g.valence(v));
        labels.emplace(g.word(v), g.valence(v));
    }

    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        edges.emplace_back(target, g.word(nbrs[i]));
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
            if (g.adjacent(nbrs[i], nbrs[j])) edges.emplace_back(g.word(nbrs[i]), g.word(nbrs[j]));
        }
    }
    std::vector<std::string> words = frame.members;
    words.push_back(target);
    frame.induced = Bfmn(g.group_tag(), std::move(words), edges, labels);
    return frame;
}

Aura aura_from_counts(std::string target, std::array<std::size_t, 3> counts) {
    Aura a;
    a.target = std::move(target);
    a.counts = counts;
    const std::size_t top = *std::max_element(counts.begin(), counts.end());
    const auto n_top = std::count(counts.begin(), counts.end(), top);
    if (top > 0 && n_top == 1) {
        a.polarity = static_cast<Valence>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    }
    return a;
}

Aura aura(const SemanticFrame& frame) {
    std::array<std::size_t, 3> counts{};
    for (const auto& [word, v] : frame.member_valences) ++counts[static_cast<std::size_t>(v)];
    return aura_from_counts(frame.target, counts);
}

double jaccard(const std::vector<std::string>& sorted_a, const std::vector<std::string>& sorted_b) {
    std::vector<std::string> inter;
    std::set_intersection(sorted_a.begin(), sorted_a.end(), sorted_b.begin(), sorted_b.end(),
                          std::back_inserter(inter));
    const std::size_t uni = sorted_a.size() + sorted_b.size() - inter.size();
    if (uni == 0) return 0.0;
    return static_cast<double>(inter.size()) / static_cast<double>(uni);
}

double jaccard(const SemanticFrame& a, const SemanticFrame& b) {
    return jaccard(a.members, b.members);
}

NetworkFeatures frame_features(const SemanticFrame& frame) {
    return compute_features(frame.induced, kFrameHubFraction);
}

std::vector<JaccardEntry> jaccard_pairs(const std::vector<SemanticFrame>& frames) {
    std::vector<JaccardEntry> out;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        for (std::size_t j = i + 1; j < frames.size(); ++j) {
            out.push_back({frames[i].target, frames[j].target, jaccard(frames[i], frames[j])});
        }
    }
    return out;
}

std::string jaccard_tsv(const std::vector<JaccardEntry>& entries) {
    std::string out = "target_a\ttarget_b\tjaccard\n";
    for (const auto& e : entries) out += e.a + "\t" + e.b + "\t" + format_fixed(e.value, 6) + "\n";
    return out;
}

} // namespace bfmn
