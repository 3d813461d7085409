#pragma once

#include <cstddef>
#include <cstdint>

#include "reachset/ingest.hpp"

namespace reachset {

/// Ground-truth kinematics for generated trails.
enum class SyntheticGenerator { ConstantSpeed, CappedAccel, TwoSegment };

struct SyntheticSpec {
    SyntheticGenerator generator = SyntheticGenerator::ConstantSpeed;
    double v_true = 8.0;        // speed cap (a, c) / final speed (d), m/s
    double a_true = 0.0;        // acceleration cap, capped-accel only, m/s^2
    double t_inert_true = 0.0;  // inertial duration, two-segment only, s
    std::size_t n_trails = 0;
    double outlier_fraction = 0.0;  // in [0, 1)
    double outlier_offset = 0.0;    // metres beyond the true boundary
    std::uint64_t seed = 0;
    double dt = 1.0;  // s
    /// Stress option: sample xt on the reachable boundary instead of
    /// uniformly over the reachable area.
    bool boundary_biased = false;
};

/// Generates trails whose reached positions lie, by construction, inside
/// the generator's true reachable set. Exactly
/// floor(outlier_fraction * n_trails) trails are made outliers: their xt
/// is pushed outlier_offset metres beyond the boundary, radially.
/// Per-trail counter-based RNG streams make the output independent of
/// evaluation order and reproducible for a fixed seed.
TrailSet generate_trails(const SyntheticSpec& spec);

struct ConstantSpeedOptimum {
    double v_max = 0.0;  // m/s
    double score = 0.0;  // 1/m^2
};

/// Brute-force oracle for the constant-speed family: the optimal v_max is
/// the smallest speed whose n-gon covers the ceil(hit_ratio_min * |T|)
/// smallest per-trail covering speeds; the score is the full-scan
/// validator run at that speed. Per-trail covering speeds account for the
/// polygon's radial extent (an inscribed n-gon reaches only
/// r*cos(pi/n) between vertices), so the optimum is exact for the
/// polygonised model, not just for the ideal disk.
ConstantSpeedOptimum analytic_optimum_constant_speed(const TrailSet& trails, double hit_ratio_min,
                                                     std::size_t n_vertices = 200);

/// Smallest v_max such that the n-gon reachable polygon of the
/// constant-speed model contains the trail's reached position.
double covering_speed_constant_speed(const Trail& trail, std::size_t n_vertices);

}  // namespace reachset
