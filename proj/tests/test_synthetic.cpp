#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "reachset/models.hpp"
#include "reachset/synthetic.hpp"
#include "reachset/validation.hpp"

using namespace reachset;

namespace {

constexpr double kPi = std::numbers::pi;

SyntheticSpec base_spec(std::size_t n, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.generator = SyntheticGenerator::ConstantSpeed;
    spec.v_true = 8.0;
    spec.n_trails = n;
    spec.seed = seed;
    spec.dt = 1.0;
    return spec;
}

}  // namespace

TEST_SUITE("synthetic") {

TEST_CASE("constant-speed trails stay within the true disk") {
    const TrailSet set = generate_trails(base_spec(2000, 31));
    REQUIRE(set.trails.size() == 2000);
    for (const Trail& t : set.trails) {
        CHECK((t.xt - t.x0).norm() <= 8.0 + 1e-12);
        CHECK(t.v0.norm() <= 8.0 + 1e-12);
        CHECK(t.dt == 1.0);
    }
}

TEST_CASE("same seed reproduces the identical trail set") {
    const TrailSet a = generate_trails(base_spec(500, 7));
    const TrailSet b = generate_trails(base_spec(500, 7));
    for (std::size_t i = 0; i < a.trails.size(); ++i) {
        CHECK(a.trails[i].x0 == b.trails[i].x0);
        CHECK(a.trails[i].v0 == b.trails[i].v0);
        CHECK(a.trails[i].xt == b.trails[i].xt);
    }
    const TrailSet c = generate_trails(base_spec(500, 8));
    bool any_diff = false;
    for (std::size_t i = 0; i < a.trails.size(); ++i) {
        any_diff = any_diff || !(a.trails[i].xt == c.trails[i].xt);
    }
    CHECK(any_diff);
}

TEST_CASE("outlier injection count and displacement are exact") {
    SyntheticSpec spec = base_spec(1000, 13);
    spec.outlier_fraction = 0.004;
    spec.outlier_offset = 5.0;
    const TrailSet set = generate_trails(spec);

    std::size_t outside = 0;
    for (const Trail& t : set.trails) {
        const double dist = (t.xt - t.x0).norm();
        if (dist > 8.0 + 1e-9) {
            ++outside;
            CHECK(dist == doctest::Approx(8.0 + 5.0).epsilon(1e-12));
        }
    }
    CHECK(outside == 4);  // floor(0.004 * 1000)
}

TEST_CASE("capped-accel generator respects the angle-dependent boundary") {
    SyntheticSpec spec = base_spec(500, 99);
    spec.generator = SyntheticGenerator::CappedAccel;
    spec.a_true = 19.42;
    spec.v_true = 8.91;
    const TrailSet set = generate_trails(spec);
    for (const Trail& t : set.trails) {
        Vec2 clipped = t.v0;
        const double speed = t.v0.norm();
        CHECK(speed <= spec.v_true + 1e-12);
        const Vec2 center = t.x0 + clipped * spec.dt;
        const Vec2 d = t.xt - center;
        const double dist = d.norm();
        if (dist == 0.0) {
            continue;
        }
        const double t_acc =
            capped_accel_time_to_limit(clipped, spec.a_true, spec.v_true, std::atan2(d.y, d.x));
        const double t_eff = std::min(t_acc, spec.dt);
        const double rho = spec.a_true * t_eff * (spec.dt - 0.5 * t_eff);
        CHECK(dist <= rho * (1.0 + 1e-9) + 1e-9);
    }
}

TEST_CASE("two-segment generator drifts then bounds the second leg") {
    SyntheticSpec spec = base_spec(500, 5);
    spec.generator = SyntheticGenerator::TwoSegment;
    spec.v_true = 7.0;
    spec.t_inert_true = 0.22;
    const TrailSet set = generate_trails(spec);
    for (const Trail& t : set.trails) {
        const Vec2 center = t.x0 + t.v0 * spec.t_inert_true;
        CHECK((t.xt - center).norm() <= 7.0 * (1.0 - 0.22) + 1e-9);
    }
}

TEST_CASE("boundary-biased sampling puts every target on the boundary") {
    SyntheticSpec spec = base_spec(300, 21);
    spec.boundary_biased = true;
    const TrailSet set = generate_trails(spec);
    for (const Trail& t : set.trails) {
        CHECK((t.xt - t.x0).norm() == doctest::Approx(8.0).epsilon(1e-12));
    }
}

TEST_CASE("covering speed accounts for the polygon's radial extent") {
    const Trail vertex_aligned = Trail{{0.0, 0.0}, {0.0, 0.0}, {6.0, 0.0}, 1.0};
    // Angle 0 is a vertex direction: covering speed equals distance / dt.
    CHECK(covering_speed_constant_speed(vertex_aligned, 200) ==
          doctest::Approx(6.0).epsilon(1e-12));

    // Mid-sector direction needs the full 1/cos(pi/n) inflation.
    const double mid = kPi / 200.0;
    const Trail mid_sector = Trail{{0.0, 0.0}, {0.0, 0.0}, 6.0 * unit_vector(mid), 1.0};
    CHECK(covering_speed_constant_speed(mid_sector, 200) ==
          doctest::Approx(6.0 / std::cos(kPi / 200.0)).epsilon(1e-12));

    // The model polygon at exactly the covering speed contains the point.
    for (const Trail& t : {vertex_aligned, mid_sector}) {
        const double v = covering_speed_constant_speed(t, 200);
        const MotionModel at = make_constant_speed(v);
        CHECK(evaluate_trail(at, t, 200).correct);
        const MotionModel below = make_constant_speed(v * (1.0 - 1e-6));
        CHECK_FALSE(evaluate_trail(below, t, 200).correct);
    }
}

TEST_CASE("analytic optimum: zero outliers and hit_ratio_min 1 covers every trail") {
    const TrailSet set = generate_trails(base_spec(2000, 17));
    const ConstantSpeedOptimum best = analytic_optimum_constant_speed(set, 1.0);

    double max_covering = 0.0;
    for (const Trail& t : set.trails) {
        max_covering = std::max(max_covering, covering_speed_constant_speed(t, 200));
    }
    CHECK(best.v_max == max_covering);
    CHECK(best.v_max >= 8.0 * 0.9);  // 2000 disk draws get close to the rim
    CHECK(best.v_max <= 8.0 * (1.0 / std::cos(kPi / 200.0)) + 1e-12);

    // Minimality: the full validator agrees that v* is feasible and any
    // slightly smaller radius is not.
    const ValidationConfig cfg{1.0, 200};
    CHECK(validate(make_constant_speed(best.v_max), set, cfg).score == best.score);
    CHECK(best.score > 0.0);
    CHECK(validate(make_constant_speed(best.v_max * (1.0 - 1e-9)), set, cfg).score == 0.0);
}

TEST_CASE("analytic optimum: quantile ignores an injected outlier") {
    SyntheticSpec spec = base_spec(2000, 23);
    spec.outlier_fraction = 0.0005;  // exactly one outlier
    spec.outlier_offset = 5.0;
    const TrailSet set = generate_trails(spec);

    // hit_ratio_min chosen to tolerate exactly one outlier.
    const double hrm = 1999.0 / 2000.0;
    const ConstantSpeedOptimum best = analytic_optimum_constant_speed(set, hrm);

    // Exhaustive cross-check over candidate radii: v* must be the largest
    // covering speed among the 1999 smallest.
    std::vector<double> speeds;
    for (const Trail& t : set.trails) {
        speeds.push_back(covering_speed_constant_speed(t, 200));
    }
    std::sort(speeds.begin(), speeds.end());
    CHECK(best.v_max == speeds[1998]);
    CHECK(best.v_max < speeds[1999]);  // outlier excluded
    CHECK(best.v_max <= 8.0 / std::cos(kPi / 200.0) + 1e-12);
    CHECK(best.score > 0.0);
}

TEST_CASE("analytic optimum: identical displacements collapse to that distance") {
    TrailSet set;
    const double d = 5.5;
    for (int i = 0; i < 50; ++i) {
        set.trails.push_back(Trail{{10.0, 10.0}, {0.0, 0.0}, Vec2{10.0, 10.0} + d * unit_vector(0.3), 1.0});
    }
    const ConstantSpeedOptimum best = analytic_optimum_constant_speed(set, 1.0);
    CHECK(best.v_max >= d);
    CHECK(best.v_max <= d / std::cos(kPi / 200.0) + 1e-12);
    const double expected_score =
        50.0 / (50.0 * polygon_area(make_constant_speed(best.v_max)
                                        .reachable_polygon({{10.0, 10.0}, {0.0, 0.0}}, 1.0, 200)));
    CHECK(best.score == doctest::Approx(expected_score).epsilon(1e-12));
}

TEST_CASE("constant-speed score is zero below the quantile and decreasing above it") {
    const TrailSet set = generate_trails(base_spec(1000, 3));
    const ConstantSpeedOptimum best = analytic_optimum_constant_speed(set, 1.0);
    const ValidationConfig cfg{1.0, 200};

    double previous = best.score;
    for (double factor : {1.02, 1.1, 1.25, 1.5}) {
        const double score =
            validate(make_constant_speed(best.v_max * factor), set, cfg).score;
        CHECK(score > 0.0);
        CHECK(score < previous);
        previous = score;
    }
    for (double factor : {0.999, 0.9, 0.5}) {
        CHECK(validate(make_constant_speed(best.v_max * factor), set, cfg).score == 0.0);
    }
}

TEST_CASE("generator spec validation") {
    SyntheticSpec spec = base_spec(0, 1);
    CHECK_THROWS_AS(generate_trails(spec), std::invalid_argument);
    spec = base_spec(10, 1);
    spec.outlier_fraction = 1.0;
    CHECK_THROWS_AS(generate_trails(spec), std::invalid_argument);
    spec = base_spec(10, 1);
    spec.generator = SyntheticGenerator::TwoSegment;
    spec.t_inert_true = 1.0;  // must stay below dt
    CHECK_THROWS_AS(generate_trails(spec), std::invalid_argument);
    spec = base_spec(10, 1);
    spec.generator = SyntheticGenerator::CappedAccel;
    spec.a_true = 0.0;
    CHECK_THROWS_AS(generate_trails(spec), std::invalid_argument);
}

}  // TEST_SUITE
