#include "bfmn/frames.hpp"
#include "bfmn/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace bfmn;

namespace {

Bfmn labelled(std::vector<std::pair<std::string, std::string>> edges, std::map<std::string, Valence> labels = {}) {
    std::set<std::string> words;
    for (auto& [a, b] : edges) {
        words.insert(a);
        words.insert(b);
    }
    return Bfmn("t", {words.begin(), words.end()}, edges, labels);
}

} // namespace

TEST_CASE("frame of a target with two linked neighbours") {
    const auto g = labelled({{"t", "a"}, {"t", "b"}, {"a", "b"}, {"b", "far"}});
    const auto f = extract_frame(g, "t");
    CHECK(f.members == std::vector<std::string>{"a", "b"});
    CHECK(f.member_count() == 2);
    CHECK(f.table_node_count() == 3);
    CHECK(f.induced.edge_count() == 3);
    CHECK(f.induced_edges().size() == 3);
    CHECK_THROWS_AS(extract_frame(g, "missing"), Error);
}

TEST_CASE("isolated target gives an empty frame") {
    const Bfmn g("t", {"iso", "x", "y"}, {{"x", "y"}});
    const auto f = extract_frame(g, "iso");
    CHECK(f.members.empty());
    CHECK(f.table_node_count() == 1);
    CHECK(aura(f).polarity == Valence::neutral);
}

TEST_CASE("aura counts and tie rule") {
    CHECK(aura_from_counts("x", {5, 1, 2}).polarity == Valence::negative);
    CHECK(aura_from_counts("x", {3, 0, 3}).polarity == Valence::neutral);
    CHECK(aura_from_counts("x", {3, 15, 34}).polarity == Valence::positive);
    CHECK(aura_from_counts("school", {3, 34, 15}).polarity == Valence::neutral);
    CHECK(aura_from_counts("x", {0, 0, 0}).polarity == Valence::neutral);

    const auto g = labelled({{"t", "a"}, {"t", "b"}, {"t", "c"}},
                            {{"t", Valence::positive}, {"a", Valence::negative}, {"b", Valence::negative}});
    const auto au = aura(extract_frame(g, "t"));
    CHECK(au.count(Valence::negative) == 2);
    CHECK(au.count(Valence::neutral) == 1);
    CHECK(au.count(Valence::positive) == 0); // the target itself is not counted
    CHECK(au.polarity == Valence::negative);
}

TEST_CASE("aura argmax is invariant under rank-preserving relabelling") {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        std::array<std::size_t, 3> c{static_cast<std::size_t>(rng.below(6)), static_cast<std::size_t>(rng.below(6)),
                                     static_cast<std::size_t>(rng.below(6))};
        std::array<std::size_t, 3> scaled{c[0] * 3 + 1, c[1] * 3 + 1, c[2] * 3 + 1};
        const auto a = aura_from_counts("x", c), b = aura_from_counts("x", scaled);
        if (c[0] + c[1] + c[2] > 0) CHECK(a.polarity == b.polarity);
        // mirror negative <-> positive
        const auto m = aura_from_counts("x", {c[2], c[1], c[0]});
        if (a.polarity == Valence::positive) CHECK(m.polarity == Valence::negative);
        if (a.polarity == Valence::negative) CHECK(m.polarity == Valence::positive);
        if (a.polarity == Valence::neutral) CHECK(m.polarity == Valence::neutral);
    }
}

TEST_CASE("jaccard boundaries") {
    CHECK(jaccard(std::vector<std::string>{"a", "b"}, std::vector<std::string>{"a", "b"}) == 1.0);
    CHECK(jaccard(std::vector<std::string>{"a"}, std::vector<std::string>{"b"}) == 0.0);
    CHECK(jaccard(std::vector<std::string>{}, std::vector<std::string>{}) == 0.0);
    CHECK(jaccard(std::vector<std::string>{"a", "b", "c"}, std::vector<std::string>{"b", "c", "d"}) ==
          doctest::Approx(0.5));
}

TEST_CASE("frame properties on random graphs") {
    Rng rng(77);
    for (int t = 0; t < 60; ++t) {
        const auto og = oracle::random_graph(static_cast<std::size_t>(rng.between(2, 40)), 0.15, rng);
        const auto g = oracle::to_bfmn(og);
        std::vector<SemanticFrame> frames;
        for (NodeId u = 0; u < g.node_count(); ++u) frames.push_back(extract_frame(g, g.word(u)));
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const auto& fa = frames[i];
            if (!fa.members.empty()) {
                CHECK(jaccard(fa, fa) == 1.0);
                const auto ff = frame_features(fa);
                CHECK(ff.avg_shortest_path <= 2.0);
                CHECK(ff.diameter <= 2);
                CHECK(ff.n_nodes == fa.table_node_count());
                if (fa.members.size() == 1) {
                    CHECK(ff.avg_shortest_path == 1.0);
                    CHECK(ff.diameter == 1);
                }
            }
            // induced edges are parent edges
            for (const auto& [a, b] : fa.induced_edges()) CHECK(g.adjacent(g.require(a), g.require(b)));
            for (std::size_t j = 0; j < frames.size(); ++j) {
                const auto& fb = frames[j];
                CHECK(jaccard(fa, fb) == jaccard(fb, fa));
                const bool b_in_a = std::binary_search(fa.members.begin(), fa.members.end(), fb.target);
                const bool a_in_b = std::binary_search(fb.members.begin(), fb.members.end(), fa.target);
                CHECK(b_in_a == a_in_b);
            }
        }
    }
}

TEST_CASE("star frame features") {
    const auto g = labelled({{"t", "a"}, {"t", "b"}, {"t", "c"}});
    const auto ff = frame_features(extract_frame(g, "t"));
    CHECK(ff.clustering == 0.0);
    CHECK(ff.avg_shortest_path < 2.0);
    REQUIRE_FALSE(ff.hubs.empty());
    CHECK(ff.hubs[0] == Hub{"t", 3});
}

TEST_CASE("jaccard pairs and table") {
    const auto g = labelled({{"x", "a"}, {"x", "b"}, {"y", "b"}, {"y", "c"}, {"z", "q"}});
    std::vector<SemanticFrame> fr{extract_frame(g, "x"), extract_frame(g, "y"), extract_frame(g, "z")};
    const auto pairs = jaccard_pairs(fr);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].a == "x");
    CHECK(pairs[0].b == "y");
    CHECK(pairs[0].value == doctest::Approx(1.0 / 3.0));
    CHECK(pairs[1].value == 0.0);
    CHECK(jaccard_tsv(pairs).find("x\ty\t0.333333\n") != std::string::npos);
}
