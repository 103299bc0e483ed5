#pragma once

#include "bfmn/graph.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace bfmn {

// Ego neighbourhood of a target word: its first neighbours plus the
// subgraph induced on {target} + members.
struct SemanticFrame {
    std::string target;
    Valence target_valence = Valence::neutral;
    std::vector<std::string> members;               // sorted, target excluded
    std::map<std::string, Valence> member_valences;
    Bfmn induced;                                    // nodes: target + members

    std::size_t member_count() const { return members.size(); }
    // Node count in the tables' convention, which includes the target.
    std::size_t table_node_count() const { return members.size() + 1; }
    std::vector<std::pair<std::string, std::string>> induced_edges() const;
};

SemanticFrame extract_frame(const Bfmn& g, const std::string& target);

struct Aura {
    std::string target;
    std::array<std::size_t, 3> counts{}; // indexed by Valence
    Valence polarity = Valence::neutral;

    std::size_t count(Valence v) const { return counts[static_cast<std::size_t>(v)]; }
};

// Modal label among the members (the target's own label is not counted).
// Ties for the maximum, and empty frames, give neutral.
Aura aura(const SemanticFrame& frame);
Aura aura_from_counts(std::string target, std::array<std::size_t, 3> counts);

// |A n B| / |A u B| over member sets; 0 when both are empty.
double jaccard(const SemanticFrame& a, const SemanticFrame& b);
double jaccard(const std::vector<std::string>& sorted_a, const std::vector<std::string>& sorted_b);

// Features of the induced subgraph with the 5% hub cutoff.
NetworkFeatures frame_features(const SemanticFrame& frame);

struct JaccardEntry {
    std::string a;
    std::string b;
    double value = 0.0;
};

// All unordered pairs of frames, in input order.
std::vector<JaccardEntry> jaccard_pairs(const std::vector<SemanticFrame>& frames);
std::string jaccard_tsv(const std::vector<JaccardEntry>& entries);

} // namespace bfmn
