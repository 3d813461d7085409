#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reachset/models.hpp"

namespace reachset {

/// Overlay of reachable-area boundaries for a set of models evaluated at
/// one kinematic state and horizon.
struct OverlayConfig {
    KinematicState state{{0.0, 0.0}, {5.0, 0.0}};
    double dt = 1.0;
    std::size_t n_vertices = 200;
    double width_px = 640.0;
    double height_px = 640.0;
};

std::string boundary_overlay_svg(const std::vector<std::pair<std::string, MotionModel>>& models,
                                 const OverlayConfig& cfg);

/// Horizontal bar chart of inverse scores (m^2, smaller is better).
struct ScoreBar {
    std::string label;
    double score_inverse_m2 = 0.0;
};

std::string score_chart_svg(const std::vector<ScoreBar>& bars);

}  // namespace reachset
