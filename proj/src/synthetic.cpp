#include "reachset/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "reachset/models.hpp"
#include "reachset/rng.hpp"
#include "reachset/validation.hpp"

namespace reachset {

namespace {

constexpr double kPitchLength = 105.0;
constexpr double kPitchWidth = 68.0;

void check_spec(const SyntheticSpec& spec) {
    if (spec.n_trails == 0) {
        throw std::invalid_argument("generate_trails: n_trails must be at least 1");
    }
    if (!(spec.dt > 0.0)) {
        throw std::invalid_argument("generate_trails: dt must be positive");
    }
    if (spec.outlier_fraction < 0.0 || spec.outlier_fraction >= 1.0) {
        throw std::invalid_argument("generate_trails: outlier_fraction must be in [0, 1)");
    }
    if (!(spec.v_true > 0.0)) {
        throw std::invalid_argument("generate_trails: v_true must be positive");
    }
    switch (spec.generator) {
        case SyntheticGenerator::ConstantSpeed:
            break;
        case SyntheticGenerator::CappedAccel:
            if (!(spec.a_true > 0.0)) {
                throw std::invalid_argument("generate_trails: capped-accel needs a_true > 0");
            }
            break;
        case SyntheticGenerator::TwoSegment:
            if (!(spec.t_inert_true >= 0.0) || spec.t_inert_true >= spec.dt) {
                throw std::invalid_argument(
                    "generate_trails: two-segment needs 0 <= t_inert_true < dt");
            }
            break;
    }
}

// Reachable set of the generator for one kinematic state, described by a
// centre and a per-angle boundary radius around it.
struct TrueRegion {
    Vec2 center;
    double max_radius = 0.0;

    // Radius of the boundary along direction phi (measured from center).
    // Constant for the disk-shaped generators, angle-dependent for
    // capped acceleration.
    std::function<double(double)> radius;
};

TrueRegion true_region(const SyntheticSpec& spec, const KinematicState& s) {
    TrueRegion region;
    switch (spec.generator) {
        case SyntheticGenerator::ConstantSpeed: {
            region.center = s.x0;
            const double r = spec.v_true * spec.dt;
            region.max_radius = r;
            region.radius = [r](double) { return r; };
            break;
        }
        case SyntheticGenerator::CappedAccel: {
            Vec2 v0_clipped = s.v0;
            const double speed = s.v0.norm();
            if (speed > spec.v_true) {
                v0_clipped = s.v0 * (spec.v_true / speed);
            }
            region.center = s.x0 + v0_clipped * spec.dt;
            const double a = spec.a_true;
            const double v = spec.v_true;
            const double dt = spec.dt;
            region.radius = [v0_clipped, a, v, dt](double phi) {
                const double t_acc = capped_accel_time_to_limit(v0_clipped, a, v, phi);
                const double t_eff = std::min(t_acc, dt);
                return a * t_eff * (dt - 0.5 * t_eff);
            };
            // The boundary radius is maximal opposite the initial velocity,
            // where the acceleration phase lasts longest.
            const double phi_back = std::atan2(-v0_clipped.y, -v0_clipped.x);
            region.max_radius = region.radius(phi_back);
            break;
        }
        case SyntheticGenerator::TwoSegment: {
            // keep_initial semantics: drift along v0 at |v0| for t_inert.
            region.center = s.x0 + s.v0 * spec.t_inert_true;
            const double r = spec.v_true * (spec.dt - spec.t_inert_true);
            region.max_radius = r;
            region.radius = [r](double) { return r; };
            break;
        }
    }
    return region;
}

}  // namespace

TrailSet generate_trails(const SyntheticSpec& spec) {
    check_spec(spec);

    const std::size_t n_outliers =
        static_cast<std::size_t>(spec.outlier_fraction * static_cast<double>(spec.n_trails));
    // Outliers at deterministic, evenly spread indices.
    const auto is_outlier = [&](std::size_t i) {
        if (n_outliers == 0) {
            return false;
        }
        const std::size_t stride = spec.n_trails / n_outliers;
        return i % stride == 0 && i / stride < n_outliers;
    };

    TrailSet set;
    set.seed = spec.seed;
    set.source = "synthetic";
    set.trails.resize(spec.n_trails);

    for (std::size_t i = 0; i < spec.n_trails; ++i) {
        SplitMix64 rng(mix_seed(spec.seed, i));
        KinematicState s;
        s.x0 = {rng.next_uniform(0.0, kPitchLength), rng.next_uniform(0.0, kPitchWidth)};
        const double v0_dir = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
        const double v0_speed = spec.v_true * rng.next_double();
        s.v0 = v0_speed * unit_vector(v0_dir);

        const TrueRegion region = true_region(spec, s);
        double phi = 0.0;
        double r = 0.0;
        if (is_outlier(i)) {
            phi = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
            r = region.radius(phi) + spec.outlier_offset;
        } else if (spec.boundary_biased) {
            phi = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
            r = region.radius(phi);
        } else {
            // Uniform over the region: rejection-sample in the bounding
            // disk, testing against the per-angle boundary radius.
            for (;;) {
                const double cand_phi = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
                const double cand_r = region.max_radius * std::sqrt(rng.next_double());
                if (cand_r <= region.radius(cand_phi)) {
                    phi = cand_phi;
                    r = cand_r;
                    break;
                }
            }
        }
        set.trails[i] = Trail{s.x0, s.v0, region.center + r * unit_vector(phi), spec.dt};
    }
    return set;
}

double covering_speed_constant_speed(const Trail& trail, std::size_t n_vertices) {
    const Vec2 d = trail.xt - trail.x0;
    const double dist = d.norm();
    if (dist == 0.0) {
        return 0.0;
    }
    // Radial extent of a regular n-gon with circumradius R, vertex k at
    // angle 2*pi*k/n: R * cos(pi/n) / cos(delta), where delta is the
    // angular offset from the nearest sector midline.
    const double n = static_cast<double>(n_vertices);
    const double sector = 2.0 * std::numbers::pi / n;
    double theta = std::atan2(d.y, d.x);
    if (theta < 0.0) {
        theta += 2.0 * std::numbers::pi;
    }
    const double within = theta - sector * std::floor(theta / sector);  // in [0, sector)
    const double delta = within - 0.5 * sector;                         // offset from midline
    const double extent_factor = std::cos(0.5 * sector) / std::cos(delta);
    const double covering_radius = dist / extent_factor;
    return covering_radius / trail.dt;
}

ConstantSpeedOptimum analytic_optimum_constant_speed(const TrailSet& trails, double hit_ratio_min,
                                                     std::size_t n_vertices) {
    if (trails.trails.empty()) {
        throw std::invalid_argument("analytic_optimum_constant_speed: empty trail set");
    }
    if (!(hit_ratio_min > 0.0) || hit_ratio_min > 1.0) {
        throw std::invalid_argument(
            "analytic_optimum_constant_speed: hit_ratio_min must be in (0, 1]");
    }
    const double dt = trails.trails.front().dt;
    for (const Trail& t : trails.trails) {
        if (t.dt != dt) {
            throw std::invalid_argument(
                "analytic_optimum_constant_speed: trails must share one dt");
        }
    }

    std::vector<double> speeds;
    speeds.reserve(trails.trails.size());
    for (const Trail& t : trails.trails) {
        speeds.push_back(covering_speed_constant_speed(t, n_vertices));
    }
    std::sort(speeds.begin(), speeds.end());

    const double n = static_cast<double>(speeds.size());
    // ceil(hit_ratio_min * n) with a guard against the product landing an
    // ulp above the intended integer.
    std::size_t k = static_cast<std::size_t>(std::ceil(hit_ratio_min * n - 1e-9));
    k = std::clamp<std::size_t>(k, 1, speeds.size());

    ConstantSpeedOptimum best;
    best.v_max = speeds[k - 1];
    if (!(best.v_max > 0.0)) {
        throw std::runtime_error(
            "analytic_optimum_constant_speed: degenerate trail set (zero displacement quantile)");
    }
    ValidationConfig cfg{hit_ratio_min, n_vertices};
    best.score = validate_reference(make_constant_speed(best.v_max), trails, cfg).score;
    return best;
}

}  // namespace reachset
