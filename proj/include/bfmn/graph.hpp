#pragma once

#include "bfmn/ingestion.hpp"
#include "bfmn/types.hpp"
#include "bfmn/valence_stats.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bfmn {

using NodeId = std::uint32_t;

// Behavioural forma mentis network: simple, undirected, unweighted graph
// whose nodes are words carrying a valence label. Immutable once built.
// Node ids follow lexicographic word order, so the structure is independent
// of input order.
class Bfmn {
public:
    Bfmn() = default;

    // Self-loops are dropped and duplicate edges collapsed. Every edge
    // endpoint must be in `words`; missing labels default to neutral.
    Bfmn(std::string group_tag, std::vector<std::string> words,
         const std::vector<std::pair<std::string, std::string>>& edges,
         const std::map<std::string, Valence>& labels = {});

    const std::string& group_tag() const { return group_tag_; }
    std::size_t node_count() const { return words_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const std::string& word(NodeId id) const { return words_[id]; }
    const std::vector<std::string>& words() const { return words_; }
    std::optional<NodeId> find(const std::string& word) const;
    // Throws Error(NodeNotFound).
    NodeId require(const std::string& word) const;

    Valence valence(NodeId id) const { return valences_[id]; }
    const std::vector<NodeId>& neighbors(NodeId id) const { return adjacency_[id]; } // sorted
    std::size_t degree(NodeId id) const { return adjacency_[id].size(); }
    bool adjacent(NodeId a, NodeId b) const;

    // Each undirected edge once, as (lower id, higher id), sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    std::string group_tag_;
    std::vector<std::string> words_;
    std::vector<Valence> valences_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
};

struct BuildReport {
    std::vector<std::string> unlabeled_words; // defaulted to neutral
    std::size_t self_pairs_dropped = 0;
};

// One edge per distinct cue-response pair across all records; words enter
// the graph through edges only.
Bfmn build_bfmn(const std::vector<AssociationRecord>& records, const std::map<std::string, ValenceLabel>& labels,
                BuildReport* report = nullptr);

struct Hub {
    std::string word;
    std::size_t degree = 0;
    bool operator==(const Hub&) const = default;
};

struct NetworkFeatures {
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double avg_shortest_path = 0.0; // on the largest connected component
    int diameter = 0;               // on the largest connected component
    double clustering = 0.0;        // mean of node-wise c_u over all nodes
    std::vector<Hub> hubs;
    std::size_t component_nodes = 0; // size of the component used for paths
};

inline constexpr double kNetworkHubFraction = 0.01;
inline constexpr double kFrameHubFraction = 0.05;

double clustering_coefficient(const Bfmn& g, NodeId node);
double clustering_coefficient(const Bfmn& g, const std::string& word);
double mean_clustering(const Bfmn& g);

// Nodes of the largest connected component, sorted; ties go to the
// component containing the smallest node id.
std::vector<NodeId> largest_component(const Bfmn& g);

struct PathStats {
    double avg_shortest_path = 0.0;
    int diameter = 0;
    std::size_t component_nodes = 0;
};

// All-pairs BFS over the largest component. Throws Error(EmptyGraph).
PathStats path_stats(const Bfmn& g);
double avg_shortest_path(const Bfmn& g);
int diameter(const Bfmn& g);

// Every node whose degree reaches the degree found at rank
// ceil(top_fraction * N) of the descending degree order; sorted by degree
// descending then word.
std::vector<Hub> hubs(const Bfmn& g, double top_fraction);

// (r - 1) / sum of distances, scaled by (r - 1) / (n - 1) where r is the
// number of nodes reachable from `node` including itself. 0 when isolated.
double closeness_centrality(const Bfmn& g, NodeId node);
double closeness_centrality(const Bfmn& g, const std::string& word);

NetworkFeatures compute_features(const Bfmn& g, double hub_fraction);

std::string edge_list_tsv(const Bfmn& g);
std::string node_table_tsv(const Bfmn& g);

} // namespace bfmn
