#pragma once

#include <cstddef>

namespace reachset::defaults {

// Experiment defaults shared by the CLI and the library consumers.
inline constexpr double kTimeHorizonS = 1.0;
inline constexpr double kHitRatioMin = 0.99975;
inline constexpr std::size_t kTrailSampleSize = 500000;
inline constexpr std::size_t kPolygonVertices = 200;
inline constexpr double kPitchLengthM = 105.0;
inline constexpr double kPitchWidthM = 68.0;
inline constexpr std::size_t kOptimizerBudgetPerCombo = 60;
inline constexpr std::size_t kOptimizerInitPoints = 10;

}  // namespace reachset::defaults
