#pragma once

#include "bfmn/affect.hpp"
#include "bfmn/frames.hpp"
#include "bfmn/ingestion.hpp"

#include <map>
#include <string>
#include <vector>

namespace bfmn {

struct RenderSpec {
    std::string positive_color = "#00b7eb"; // cyan
    std::string neutral_color = "#000000";
    std::string negative_color = "#d62728";
    std::string contrast_edge_color = "#800080";
    std::string plain_edge_color = "#9e9e9e";
    std::size_t min_edge_frequency = 1;
    const std::map<std::string, std::string>* translation_map = nullptr;

    const std::string& color_of(Valence v) const;
    void validate() const;
};

// Frame nodes in drawing order: degree descending, then word.
std::vector<std::string> frame_node_order(const SemanticFrame& frame);

// Circular layout. Label colour follows valence, links between a positive
// and a negative word are purple, links seen fewer than
// spec.min_edge_frequency times are omitted (pairs missing from the table
// count once), and font size is affine in frame closeness centrality.
// Throws Error(EmptyFrame).
std::string render_frame_svg(const SemanticFrame& frame, const RenderSpec& spec, const EdgeFrequencyTable& freq);

struct Petal {
    Emotion emotion;
    double angle_deg = 0.0; // 0 = up, clockwise
    double length = 0.0;
    bool filled = false;
    std::string color;
};

inline constexpr double kPetalMinLength = 20.0;
inline constexpr double kPetalMaxLength = 150.0;
inline constexpr double kPetalZAtMax = 8.0;

// Length = min + (max - min) * clamp(z, 0, kPetalZAtMax) / kPetalZAtMax.
std::vector<Petal> flower_petals(const EmotionProfile& profile);
std::string render_flower_svg(const EmotionProfile& profile, const std::string& title = {});

inline constexpr double kJaccardFloor = 0.001;

// Zero (or sub-floor) values are drawn at kJaccardFloor. Throws
// Error(BadInput) for values outside [0, 1].
std::map<std::string, double> jaccard_bar_values(const std::map<std::string, double>& values);
std::string render_jaccard_bars(const std::map<std::string, double>& values, bool log_scale = false,
                                const std::string& title = {});

std::string xml_escape(const std::string& text);

} // namespace bfmn
