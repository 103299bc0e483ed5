#include "bfmn/render.hpp"
#include "bfmn/error.hpp"
#include "bfmn/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bfmn {

namespace {

std::string num(double v) { return format_fixed(v, 2); }

std::string svg_open(double width, double height) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
           "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
}

bool is_hex_color(const std::string& c) {
    if (c.size() != 7 || c[0] != '#') return false;
    return std::all_of(c.begin() + 1, c.end(), [](unsigned char ch) { return std::isxdigit(ch) != 0; });
}

} // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

const std::string& RenderSpec::color_of(Valence v) const {
    switch (v) {
    case Valence::positive: return positive_color;
    case Valence::negative: return negative_color;
    case Valence::neutral: return neutral_color;
    }
    return neutral_color;
}

void RenderSpec::validate() const {
    for (const auto* c : {&positive_color, &neutral_color, &negative_color, &contrast_edge_color, &plain_edge_color}) {
        if (!is_hex_color(*c)) throw Error(ErrorCode::BadConfig, "colour '" + *c + "' is not #rrggbb");
    }
    if (min_edge_frequency < 1) throw Error(ErrorCode::BadConfig, "min_edge_frequency must be >= 1");
}

std::vector<std::string> frame_node_order(const SemanticFrame& frame) {
    const Bfmn& g = frame.induced;
    std::vector<NodeId> ids(g.node_count());
    for (NodeId i = 0; i < ids.size(); ++i) ids[i] = i;
    std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
        return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : g.word(a) < g.word(b);
    });
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(g.word(id));
    return out;
}

std::string render_frame_svg(const SemanticFrame& frame, const RenderSpec& spec, const EdgeFrequencyTable& freq) {
    spec.validate();
    if (frame.members.empty()) throw Error(ErrorCode::EmptyFrame, "frame of '" + frame.target + "' has no members");
    const Bfmn& g = frame.induced;
    const auto order = frame_node_order(frame);
    const double size = 800.0, cx = size / 2, cy = size / 2, radius = 280.0;

    std::map<std::string, std::pair<double, double>> pos;
    std::map<std::string, double> angle;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(order.size());
        angle[order[i]] = a;
        pos[order[i]] = {cx + radius * std::cos(a), cy + radius * std::sin(a)};
    }

    std::string svg = svg_open(size, size);
    svg += "<g id=\"edges\" fill=\"none\">\n";
    for (const auto& [ia, ib] : g.edges()) {
        const std::string& a = g.word(ia);
        const std::string& b = g.word(ib);
        auto f = freq.find(make_word_pair(a, b));
        const std::size_t count = f == freq.end() ? 1 : f->second;
        if (count < spec.min_edge_frequency) continue;
        const Valence va = g.valence(ia), vb = g.valence(ib);
        const bool contrast = (va == Valence::positive && vb == Valence::negative) ||
                              (va == Valence::negative && vb == Valence::positive);
        std::string color = spec.plain_edge_color;
        if (contrast) {
            color = spec.contrast_edge_color;
        } else if (va == vb && va != Valence::neutral) {
            color = spec.color_of(va);
        }
        const auto [x1, y1] = pos[a];
        const auto [x2, y2] = pos[b];
        // Single quadratic arc pulled towards the centre.
        const double mx = 0.5 * (x1 + x2), my = 0.5 * (y1 + y2);
        const double qx = cx + 0.35 * (mx - cx), qy = cy + 0.35 * (my - cy);
        svg += "<path d=\"M " + num(x1) + " " + num(y1) + " Q " + num(qx) + " " + num(qy) + " " + num(x2) + " " +
               num(y2) + "\" stroke=\"" + color + "\" stroke-width=\"1.20\" stroke-opacity=\"" +
               (contrast ? "0.90" : "0.55") + "\" data-a=\"" + xml_escape(a) + "\" data-b=\"" + xml_escape(b) +
               "\"/>\n";
    }
    svg += "</g>\n<g id=\"nodes\" font-family=\"Helvetica, Arial, sans-serif\">\n";
    for (const auto& w : order) {
        const NodeId id = g.require(w);
        const double closeness = closeness_centrality(g, id);
        const double font = 8.0 + 14.0 * closeness;
        const auto [x, y] = pos[w];
        const double a = angle[w];
        const double lx = cx + (radius + 10.0) * std::cos(a), ly = cy + (radius + 10.0) * std::sin(a);
        const bool left = std::cos(a) < -1e-9;
        std::string label = w;
        if (spec.translation_map) {
            if (auto it = spec.translation_map->find(w); it != spec.translation_map->end()) label = it->second;
        }
        const std::string& color = spec.color_of(g.valence(id));
        svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"3.00\" fill=\"" + color + "\"/>\n";
        svg += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" font-size=\"" + num(font) + "\" fill=\"" + color +
               "\" text-anchor=\"" + (left ? "end" : "start") + "\" dominant-baseline=\"middle\" data-word=\"" +
               xml_escape(w) + "\" data-valence=\"" + std::string(to_string(g.valence(id))) + "\">" +
               xml_escape(label) + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

namespace {

const char* plutchik_color(Emotion e) {
    switch (e) {
    case Emotion::joy: return "#f2c500";
    case Emotion::trust: return "#7ac143";
    case Emotion::fear: return "#00843d";
    case Emotion::surprise: return "#00a3d9";
    case Emotion::sadness: return "#1f5aa6";
    case Emotion::disgust: return "#8e44ad";
    case Emotion::anger: return "#e4032e";
    case Emotion::anticipation: return "#f39200";
    }
    return "#000000";
}

} // namespace

std::vector<Petal> flower_petals(const EmotionProfile& profile) {
    std::vector<Petal> petals;
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
        const Emotion e = kAllEmotions[i];
        const double z = std::clamp(profile.z[i], 0.0, kPetalZAtMax);
        Petal p;
        p.emotion = e;
        p.angle_deg = 45.0 * static_cast<double>(i);
        p.length = kPetalMinLength + (kPetalMaxLength - kPetalMinLength) * z / kPetalZAtMax;
        p.filled = profile.significant[i] && profile.z[i] > 0.0;
        p.color = plutchik_color(e);
        petals.push_back(p);
    }
    return petals;
}

std::string render_flower_svg(const EmotionProfile& profile, const std::string& title) {
    const double size = 400.0, c = size / 2;
    std::string svg = svg_open(size, size);
    if (!title.empty()) {
        svg += "<text x=\"" + num(c) + "\" y=\"20.00\" font-size=\"14.00\" text-anchor=\"middle\" "
               "font-family=\"Helvetica, Arial, sans-serif\">" + xml_escape(title) + "</text>\n";
    }
    svg += "<g id=\"petals\">\n";
    for (const auto& p : flower_petals(profile)) {
        const double a = p.angle_deg * std::numbers::pi / 180.0;
        const double dx = std::sin(a), dy = -std::cos(a);
        const double w = 0.32 * p.length;
        const double tipx = c + dx * p.length, tipy = c + dy * p.length;
        const double midx = c + dx * p.length * 0.5, midy = c + dy * p.length * 0.5;
        const double lx = midx - dy * w, ly = midy + dx * w;
        const double rx = midx + dy * w, ry = midy - dx * w;
        svg += "<path d=\"M " + num(c) + " " + num(c) + " Q " + num(lx) + " " + num(ly) + " " + num(tipx) + " " +
               num(tipy) + " Q " + num(rx) + " " + num(ry) + " " + num(c) + " " + num(c) + " Z\" fill=\"" +
               (p.filled ? std::string(p.color) : std::string("none")) + "\" fill-opacity=\"0.80\" stroke=\"" +
               p.color + "\" stroke-width=\"1.50\" data-emotion=\"" + std::string(to_string(p.emotion)) +
               "\" data-length=\"" + num(p.length) + "\"/>\n";
        const double tx = c + dx * (kPetalMaxLength + 22.0), ty = c + dy * (kPetalMaxLength + 22.0);
        svg += "<text x=\"" + num(tx) + "\" y=\"" + num(ty) +
               "\" font-size=\"11.00\" text-anchor=\"middle\" dominant-baseline=\"middle\" "
               "font-family=\"Helvetica, Arial, sans-serif\">" +
               std::string(to_string(p.emotion)) + "</text>\n";
    }
    svg += "</g>\n<circle id=\"neutral\" cx=\"" + num(c) + "\" cy=\"" + num(c) + "\" r=\"" + num(kPetalMinLength) +
           "\" fill=\"#ffffff\" stroke=\"#888888\" stroke-width=\"1.00\"/>\n</svg>\n";
    return svg;
}

std::map<std::string, double> jaccard_bar_values(const std::map<std::string, double>& values) {
    std::map<std::string, double> out;
    for (const auto& [label, v] : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::BadInput, "Jaccard value for '" + label + "' outside [0,1]");
        out.emplace(label, std::max(v, kJaccardFloor));
    }
    return out;
}

std::string render_jaccard_bars(const std::map<std::string, double>& values, bool log_scale, const std::string& title) {
    const auto bars = jaccard_bar_values(values);
    const double left = 60.0, bottom = 60.0, top = 40.0, plot_h = 300.0, bar_w = 40.0, gap = 20.0;
    const double width = left + 20.0 + std::max<double>(1.0, static_cast<double>(bars.size())) * (bar_w + gap);
    const double height = top + plot_h + bottom;
    const double base_y = top + plot_h;

    auto fraction = [&](double v) {
        if (!log_scale) return v;
        return (std::log10(v) - std::log10(kJaccardFloor)) / (0.0 - std::log10(kJaccardFloor));
    };

    std::string svg = svg_open(width, height);
    if (!title.empty()) {
        svg += "<text x=\"" + num(width / 2) + "\" y=\"20.00\" font-size=\"14.00\" text-anchor=\"middle\" "
               "font-family=\"Helvetica, Arial, sans-serif\">" + xml_escape(title) + "</text>\n";
    }
    svg += "<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1.00\">\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(base_y) + "\" x2=\"" + num(width - 10.0) + "\" y2=\"" +
           num(base_y) + "\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(base_y) +
           "\"/>\n</g>\n";
    const std::vector<double> ticks = log_scale ? std::vector<double>{0.001, 0.01, 0.1, 1.0}
                                                : std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0};
    svg += "<g id=\"ticks\" font-size=\"10.00\" font-family=\"Helvetica, Arial, sans-serif\" text-anchor=\"end\">\n";
    for (double t : ticks) {
        const double y = base_y - plot_h * fraction(t);
        svg += "<text x=\"" + num(left - 6.0) + "\" y=\"" + num(y) + "\" dominant-baseline=\"middle\">" +
               format_fixed(t, 3) + "</text>\n";
    }
    svg += "</g>\n<g id=\"bars\" font-size=\"10.00\" font-family=\"Helvetica, Arial, sans-serif\">\n";
    std::size_t i = 0;
    for (const auto& [label, v] : bars) {
        const double h = plot_h * fraction(v);
        const double x = left + gap / 2 + static_cast<double>(i) * (bar_w + gap);
        svg += "<rect x=\"" + num(x) + "\" y=\"" + num(base_y - h) + "\" width=\"" + num(bar_w) + "\" height=\"" +
               num(h) + "\" fill=\"#5b7db1\" data-label=\"" + xml_escape(label) + "\" data-value=\"" +
               format_fixed(v, 6) + "\"/>\n";
        svg += "<text x=\"" + num(x + bar_w / 2) + "\" y=\"" + num(base_y + 14.0) + "\" text-anchor=\"middle\">" +
               xml_escape(label) + "</text>\n";
        ++i;
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

} // namespace bfmn
