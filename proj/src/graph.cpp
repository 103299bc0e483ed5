#include "bfmn/graph.hpp"
#include "bfmn/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace bfmn {

Bfmn::Bfmn(std::string group_tag, std::vector<std::string> words,
           const std::vector<std::pair<std::string, std::string>>& edges, const std::map<std::string, Valence>& labels)
    : group_tag_(std::move(group_tag)), words_(std::move(words)) {
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());

    valences_.resize(words_.size(), Valence::neutral);
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (auto it = labels.find(words_[i]); it != labels.end()) valences_[i] = it->second;
    }

    adjacency_.resize(words_.size());
    for (const auto& [a, b] : edges) {
        if (a == b) continue;
        NodeId ia = require(a), ib = require(b);
        adjacency_[ia].push_back(ib);
        adjacency_[ib].push_back(ia);
    }
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        edge_count_ += nbrs.size();
    }
    edge_count_ /= 2;
}

std::optional<NodeId> Bfmn::find(const std::string& word) const {
    auto it = std::lower_bound(words_.begin(), words_.end(), word);
    if (it == words_.end() || *it != word) return std::nullopt;
    return static_cast<NodeId>(it - words_.begin());
}

NodeId Bfmn::require(const std::string& word) const {
    auto id = find(word);
    if (!id) throw Error(ErrorCode::NodeNotFound, "'" + word + "' is not a node");
    return *id;
}

bool Bfmn::adjacent(NodeId a, NodeId b) const {
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::vector<std::pair<NodeId, NodeId>> Bfmn::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
        for (NodeId v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Bfmn build_bfmn(const std::vector<AssociationRecord>& records, const std::map<std::string, ValenceLabel>& labels,
                BuildReport* report) {
    std::set<std::pair<std::string, std::string>> edge_set;
    std::set<std::string> word_set;
    std::size_t self_pairs = 0;
    std::string tag;
    for (const auto& rec : records) {
        if (tag.empty()) tag = rec.group_tag;
        for (const auto& r : rec.responses) {
            if (r == rec.cue) {
                ++self_pairs;
                continue;
            }
            edge_set.insert(make_word_pair(rec.cue, r));
            word_set.insert(rec.cue);
            word_set.insert(r);
        }
    }

    std::map<std::string, Valence> valence_of;
    std::vector<std::string> unlabeled;
    for (const auto& w : word_set) {
        if (auto it = labels.find(w); it != labels.end()) {
            valence_of.emplace(w, it->second.label);
        } else {
            unlabeled.push_back(w);
        }
    }
    if (report) {
        report->unlabeled_words = std::move(unlabeled);
        report->self_pairs_dropped = self_pairs;
    }
    return Bfmn(tag, {word_set.begin(), word_set.end()}, {edge_set.begin(), edge_set.end()}, valence_of);
}

// --- clustering ------------------------------------------------------------

double clustering_coefficient(const Bfmn& g, NodeId node) {
    if (node >= g.node_count()) throw Error(ErrorCode::NodeNotFound, "node id out of range");
    const auto& nbrs = g.neighbors(node);
    const std::size_t k = nbrs.size();
    if (k < 2) return 0.0;
    std::size_t triangles = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (g.adjacent(nbrs[i], nbrs[j])) ++triangles;
        }
    }
    return 2.0 * static_cast<double>(triangles) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

double clustering_coefficient(const Bfmn& g, const std::string& word) {
    return clustering_coefficient(g, g.require(word));
}

double mean_clustering(const Bfmn& g) {
    if (g.node_count() == 0) return 0.0;
    double sum = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) sum += clustering_coefficient(g, u);
    return sum / static_cast<double>(g.node_count());
}

// --- shortest paths ----------------------------------------------------------

namespace {

constexpr int kUnreached = -1;

// BFS distances from `source`; unreachable nodes stay kUnreached.
void bfs(const Bfmn& g, NodeId source, std::vector<int>& dist, std::vector<NodeId>& queue) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] == kUnreached) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
}

} // namespace

std::vector<NodeId> largest_component(const Bfmn& g) {
    const std::size_t n = g.node_count();
    std::vector<int> dist(n);
    std::vector<NodeId> queue;
    std::vector<bool> seen(n, false);
    std::vector<NodeId> best;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        bfs(g, s, dist, queue);
        for (NodeId v : queue) seen[v] = true;
        // Strictly larger wins, so ties keep the component found first
        // (the one holding the smaller id).
        if (queue.size() > best.size()) best = queue;
    }
    std::sort(best.begin(), best.end());
    return best;
}

PathStats path_stats(const Bfmn& g) {
    if (g.node_count() == 0) throw Error(ErrorCode::EmptyGraph, "path statistics of an empty graph");
    const auto component = largest_component(g);
    const std::size_t n = component.size();
    PathStats stats;
    stats.component_nodes = n;
    if (n < 2) return stats;

    std::vector<int> dist(g.node_count());
    std::vector<NodeId> queue;
    std::uint64_t total = 0;
    int diam = 0;
    for (NodeId s : component) {
        bfs(g, s, dist, queue);
        for (NodeId v : queue) {
            total += static_cast<std::uint64_t>(dist[v]);
            diam = std::max(diam, dist[v]);
        }
    }
    stats.avg_shortest_path = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n - 1));
    stats.diameter = diam;
    return stats;
}

double avg_shortest_path(const Bfmn& g) { return path_stats(g).avg_shortest_path; }
int diameter(const Bfmn& g) { return path_stats(g).diameter; }

std::vector<Hub> hubs(const Bfmn& g, double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
        throw Error(ErrorCode::BadInput, "hub fraction must lie in (0, 1]");
    }
    const std::size_t n = g.node_count();
    if (n == 0) return {};
    std::vector<Hub> all;
    all.reserve(n);
    for (NodeId u = 0; u < n; ++u) all.push_back({g.word(u), g.degree(u)});
    std::sort(all.begin(), all.end(), [](const Hub& a, const Hub& b) {
        return a.degree != b.degree ? a.degree > b.degree : a.word < b.word;
    });
    // Guard against 0.01 * 100 landing on 1.0000000000000002.
    auto rank = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    const std::size_t cutoff = all[rank - 1].degree;
    std::vector<Hub> out;
    for (const auto& h : all) {
        if (h.degree < cutoff) break;
        out.push_back(h);
    }
    return out;
}

double closeness_centrality(const Bfmn& g, NodeId node) {
    if (node >= g.node_count()) throw Error(ErrorCode::NodeNotFound, "node id out of range");
    const std::size_t n = g.node_count();
    if (n < 2) return 0.0;
    std::vector<int> dist(n);
    std::vector<NodeId> queue;
    bfs(g, node, dist, queue);
    const double reachable = static_cast<double>(queue.size());
    double total = 0.0;
    for (NodeId v : queue) total += dist[v];
    if (total <= 0.0) return 0.0;
    return (reachable - 1.0) / total * ((reachable - 1.0) / static_cast<double>(n - 1));
}

double closeness_centrality(const Bfmn& g, const std::string& word) {
    return closeness_centrality(g, g.require(word));
}

NetworkFeatures compute_features(const Bfmn& g, double hub_fraction) {
    NetworkFeatures f;
    f.n_nodes = g.node_count();
    f.n_edges = g.edge_count();
    if (f.n_nodes == 0) return f;
    const auto ps = path_stats(g);
    f.avg_shortest_path = ps.avg_shortest_path;
    f.diameter = ps.diameter;
    f.component_nodes = ps.component_nodes;
    f.clustering = mean_clustering(g);
    f.hubs = hubs(g, hub_fraction);
    return f;
}

std::string edge_list_tsv(const Bfmn& g) {
    std::string out = "word_a\tword_b\n";
    for (const auto& [a, b] : g.edges()) out += g.word(a) + "\t" + g.word(b) + "\n";
    return out;
}

std::string node_table_tsv(const Bfmn& g) {
    std::string out = "word\tvalence\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
        out += g.word(u);
        out += '\t';
        out += to_string(g.valence(u));
        out += '\n';
    }
    return out;
}

} // namespace bfmn
