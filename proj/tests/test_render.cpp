#include "bfmn/error.hpp"
#include "bfmn/render.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <doctest.h>

#include <set>
#include <sstream>

using namespace bfmn;
namespace pt = boost::property_tree;

namespace {

pt::ptree parse_svg(const std::string& svg) {
    std::istringstream in(svg);
    pt::ptree tree;
    pt::read_xml(in, tree);
    return tree;
}

// All children of `tag` found anywhere below `node`.
void collect(const pt::ptree& node, const std::string& tag, std::vector<pt::ptree>& out) {
    for (const auto& [name, child] : node) {
        if (name == tag) out.push_back(child);
        collect(child, tag, out);
    }
}

std::vector<pt::ptree> find_all(const pt::ptree& tree, const std::string& tag) {
    std::vector<pt::ptree> out;
    collect(tree, tag, out);
    return out;
}

std::string attr(const pt::ptree& node, const std::string& name) {
    return node.get<std::string>("<xmlattr>." + name, "");
}

SemanticFrame sample_frame() {
    const std::vector<std::pair<std::string, std::string>> edges = {
        {"math", "joy"}, {"math", "fear"}, {"math", "x&y"}, {"joy", "fear"}, {"fear", "x&y"}, {"joy", "x&y"}};
    const Bfmn g("t", {"fear", "joy", "math", "x&y"}, edges,
                 {{"joy", Valence::positive}, {"fear", Valence::negative}});
    return extract_frame(g, "math");
}

EmotionProfile flat_profile() {
    EmotionProfile p;
    p.sample_size = 10;
    return p;
}

} // namespace

TEST_CASE("frame svg is well formed and coloured by valence") {
    const auto frame = sample_frame();
    RenderSpec spec;
    const auto svg = render_frame_svg(frame, spec, {});
    const auto tree = parse_svg(svg);

    std::map<std::string, std::string> label_color;
    for (const auto& t : find_all(tree, "text")) label_color[attr(t, "data-word")] = attr(t, "fill");
    CHECK(label_color.size() == 4);
    CHECK(label_color["joy"] == spec.positive_color);
    CHECK(label_color["fear"] == spec.negative_color);
    CHECK(label_color["math"] == spec.neutral_color);
    CHECK(label_color["x&y"] == spec.neutral_color);

    const auto paths = find_all(tree, "path");
    CHECK(paths.size() == 6);
    std::size_t purple = 0;
    for (const auto& p : paths) {
        const std::set<std::string> ends{attr(p, "data-a"), attr(p, "data-b")};
        const bool contrast = ends == std::set<std::string>{"fear", "joy"};
        CHECK((attr(p, "stroke") == spec.contrast_edge_color) == contrast);
        purple += contrast;
    }
    CHECK(purple == 1);

    CHECK(render_frame_svg(frame, spec, {}) == svg);
}

TEST_CASE("frame svg drops rare links and applies translations") {
    const auto frame = sample_frame();
    RenderSpec spec;
    spec.min_edge_frequency = 2;
    EdgeFrequencyTable freq{{make_word_pair("joy", "math"), 5}, {make_word_pair("fear", "joy"), 2}};
    const std::map<std::string, std::string> tr{{"math", "matematica"}};
    spec.translation_map = &tr;
    const auto tree = parse_svg(render_frame_svg(frame, spec, freq));
    CHECK(find_all(tree, "path").size() == 2);
    std::set<std::string> labels;
    for (const auto& t : find_all(tree, "text")) labels.insert(t.get_value<std::string>());
    CHECK(labels.count("matematica") == 1);
    CHECK(labels.count("x&y") == 1);
}

TEST_CASE("frame svg rejects empty frames and bad colours") {
    const Bfmn g("t", {"a", "b", "iso"}, {{"a", "b"}});
    CHECK_THROWS_AS(render_frame_svg(extract_frame(g, "iso"), RenderSpec{}, {}), Error);
    RenderSpec bad;
    bad.positive_color = "cyan";
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("flower with no signal has short empty petals") {
    const auto petals = flower_petals(flat_profile());
    REQUIRE(petals.size() == kEmotionCount);
    for (std::size_t i = 0; i < petals.size(); ++i) {
        CHECK(petals[i].length == doctest::Approx(kPetalMinLength));
        CHECK_FALSE(petals[i].filled);
        CHECK(petals[i].angle_deg == doctest::Approx(45.0 * static_cast<double>(i)));
    }
    const auto tree = parse_svg(render_flower_svg(flat_profile(), "flat"));
    bool neutral_circle = false;
    for (const auto& c : find_all(tree, "circle")) neutral_circle |= attr(c, "id") == "neutral";
    CHECK(neutral_circle);
    for (const auto& p : find_all(tree, "path")) CHECK(attr(p, "fill") == "none");
}

TEST_CASE("significant positive z fills a longer petal") {
    auto prof = flat_profile();
    prof.z[static_cast<std::size_t>(Emotion::trust)] = 3.89;
    prof.significant[static_cast<std::size_t>(Emotion::trust)] = true;
    prof.z[static_cast<std::size_t>(Emotion::fear)] = -2.5;
    prof.significant[static_cast<std::size_t>(Emotion::fear)] = true;
    prof.z[static_cast<std::size_t>(Emotion::joy)] = 20.0;
    const auto petals = flower_petals(prof);
    const auto& trust = petals[static_cast<std::size_t>(Emotion::trust)];
    CHECK(trust.filled);
    CHECK(trust.length == doctest::Approx(kPetalMinLength + (kPetalMaxLength - kPetalMinLength) * 3.89 / kPetalZAtMax));
    const auto& fear = petals[static_cast<std::size_t>(Emotion::fear)];
    CHECK_FALSE(fear.filled);
    CHECK(fear.length == doctest::Approx(kPetalMinLength));
    const auto& joy = petals[static_cast<std::size_t>(Emotion::joy)];
    CHECK_FALSE(joy.filled);
    CHECK(joy.length == doctest::Approx(kPetalMaxLength));

    const auto tree = parse_svg(render_flower_svg(prof));
    std::size_t filled = 0;
    for (const auto& p : find_all(tree, "path")) filled += attr(p, "fill") != "none";
    CHECK(filled == 1);
}

TEST_CASE("jaccard bars") {
    const auto v = jaccard_bar_values({{"a / b", 0.0}, {"a / c", 1.0}, {"b / c", 0.25}});
    CHECK(v.at("a / b") == kJaccardFloor);
    CHECK(v.at("a / c") == 1.0);
    CHECK(v.at("b / c") == 0.25);
    CHECK_THROWS_AS(jaccard_bar_values({{"x", 1.5}}), Error);
    CHECK_THROWS_AS(jaccard_bar_values({{"x", -0.1}}), Error);

    for (bool log_scale : {false, true}) {
        const auto tree = parse_svg(render_jaccard_bars({{"a / b", 0.0}, {"a / c", 1.0}}, log_scale, "J"));
        const auto rects = find_all(tree, "rect");
        std::map<std::string, double> heights;
        for (const auto& r : rects) {
            if (!attr(r, "data-label").empty()) heights[attr(r, "data-label")] = std::stod(attr(r, "height"));
        }
        REQUIRE(heights.size() == 2);
        CHECK(heights["a / c"] == doctest::Approx(300.0));
        CHECK(heights["a / b"] == doctest::Approx(log_scale ? 0.0 : 0.3));
    }

    const auto empty = parse_svg(render_jaccard_bars({}));
    CHECK(find_all(empty, "line").size() == 2);
    CHECK(find_all(empty, "rect").size() == 1); // background only
}

TEST_CASE("escaping") {
    CHECK(xml_escape("a<b>&\"c'") == "a&lt;b&gt;&amp;&quot;c&apos;");
}
