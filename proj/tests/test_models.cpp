#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "doctest.h"

#include "reachset/models.hpp"
#include "reachset/rng.hpp"

using namespace reachset;

namespace {

constexpr double kPi = std::numbers::pi;

// Scalar-kinematics oracle for the capped-acceleration radius from rest:
// accelerate for t_acc = v_max / a_max, then coast.
double capped_accel_radius_from_rest(double a_max, double v_max, double dt) {
    const double t_acc = std::min(v_max / a_max, dt);
    return a_max * t_acc * (dt - 0.5 * t_acc);
}

double max_vertex_radius_deviation(const Polygon& poly, const Vec2& center, double radius) {
    double worst = 0.0;
    for (const Vec2& v : poly.vertices) {
        worst = std::max(worst, std::abs((v - center).norm() - radius));
    }
    return worst;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("constant speed boundary examples") {
    const KinematicState s{{0.0, 0.0}, {3.0, -1.0}};  // v0 must not matter
    const Vec2 p0 = constant_speed_boundary(s, 1.0, 8.0, 0.0);
    CHECK(p0.x == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(p0.y == doctest::Approx(0.0).epsilon(1e-15));

    const Vec2 p_half = constant_speed_boundary(s, 0.5, 8.0, 0.0);
    CHECK(p_half.x == doctest::Approx(4.0).epsilon(1e-15));

    const Vec2 p_pi = constant_speed_boundary(s, 1.0, 8.0, kPi);
    CHECK(p_pi.x == doctest::Approx(-8.0).epsilon(1e-15));
    CHECK(p_pi.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("constant acceleration boundary examples") {
    const KinematicState s{{0.0, 0.0}, {5.0, 0.0}};
    // Backwards at full acceleration exactly cancels the drift.
    const Vec2 back = constant_accel_boundary(s, 1.0, 10.0, kPi);
    CHECK(back.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(0.0).epsilon(1e-12));

    const KinematicState rest{{2.0, 3.0}, {0.0, 0.0}};
    for (double phi : {0.0, 1.0, 2.5, 4.0}) {
        const Vec2 p = constant_accel_boundary(rest, 1.0, 10.0, phi);
        CHECK((p - rest.x0).norm() == doctest::Approx(5.0).epsilon(1e-14));
    }

    const Vec2 far = constant_accel_boundary(rest, 2.0, 10.0, 0.0);
    CHECK(far.x - rest.x0.x == doctest::Approx(20.0).epsilon(1e-14));  // quadratic in dt
}

TEST_CASE("capped acceleration: radius from rest matches the scalar oracle") {
    const KinematicState rest{{10.0, 20.0}, {0.0, 0.0}};
    const double a_max = 19.42;
    const double v_max = 8.91;
    const double expected = capped_accel_radius_from_rest(a_max, v_max, 1.0);
    for (double phi = 0.0; phi < 2.0 * kPi; phi += 0.37) {
        const Vec2 p = capped_accel_boundary(rest, 1.0, a_max, v_max, phi);
        CHECK((p - rest.x0).norm() == doctest::Approx(expected).epsilon(1e-12));
    }
    // t_acc = v_max / a_max from rest.
    CHECK(capped_accel_time_to_limit({0.0, 0.0}, a_max, v_max, 1.2) ==
          doctest::Approx(v_max / a_max).epsilon(1e-15));
}

TEST_CASE("capped acceleration: no headroom along v0 when already at the speed cap") {
    const double v_max = 8.91;
    const KinematicState s{{0.0, 0.0}, {v_max, 0.0}};
    CHECK(capped_accel_time_to_limit(s.v0, 19.42, v_max, 0.0) == 0.0);
    const Vec2 p = capped_accel_boundary(s, 1.0, 19.42, v_max, 0.0);
    CHECK(p.x == doctest::Approx(v_max).epsilon(1e-14));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("capped acceleration: initial speed above the cap is clipped") {
    const double v_max = 5.0;
    const KinematicState s{{0.0, 0.0}, {20.0, 0.0}};  // 4x over the cap
    const Vec2 forward = capped_accel_boundary(s, 1.0, 10.0, v_max, 0.0);
    // Drift is the clipped velocity; no acceleration headroom forward.
    CHECK(forward.x == doctest::Approx(v_max).epsilon(1e-14));
    // Backwards: t_acc = 2 v_max / a = 1.0 >= dt, so acceleration all the way.
    const Vec2 backward = capped_accel_boundary(s, 1.0, 10.0, v_max, kPi);
    CHECK(backward.x == doctest::Approx(v_max - 0.5 * 10.0).epsilon(1e-12));
}

TEST_CASE("capped acceleration: huge a_max approaches the constant-speed disk") {
    const KinematicState rest{{0.0, 0.0}, {0.0, 0.0}};
    const double v_max = 8.91;
    for (double phi : {0.0, 1.0, 3.0, 5.5}) {
        const Vec2 p = capped_accel_boundary(rest, 1.0, 1e6, v_max, phi);
        const Vec2 disk_point = rest.x0 + v_max * unit_vector(phi);
        CHECK((p - disk_point).norm() < 1e-3);
    }
}

TEST_CASE("capped acceleration: huge v_max reduces to constant acceleration pointwise") {
    SplitMix64 rng(99);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const KinematicState s{{rng.next_uniform(-50.0, 50.0), rng.next_uniform(-50.0, 50.0)},
                               rng.next_uniform(0.0, 15.0) *
                                   unit_vector(rng.next_uniform(0.0, 2.0 * kPi))};
        const double a_max = rng.next_uniform(1.0, 25.0);
        const double dt = rng.next_uniform(0.1, 2.0);
        for (int k = 0; k < 32; ++k) {
            const double phi = 2.0 * kPi * k / 32.0;
            const Vec2 capped = capped_accel_boundary(s, dt, a_max, 1e6, phi);
            const Vec2 unlimited = constant_accel_boundary(s, dt, a_max, phi);
            worst = std::max(worst, (capped - unlimited).norm());
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("two segment boundary: worked example") {
    // Drift 0.22 s at |v0| = 5, then 0.78 s at v_const = 7.
    const KinematicState s{{0.0, 0.0}, {5.0, 0.0}};
    const TwoSegmentParams p{0.22, true, 7.0, std::nullopt, std::nullopt};
    const Vec2 center{1.1, 0.0};
    for (double phi : {0.0, 0.7, 2.0, 4.5}) {
        const Vec2 b = two_segment_boundary(s, 1.0, p, phi);
        CHECK((b - center).norm() == doctest::Approx(7.0 * 0.78).epsilon(1e-12));
    }
}

TEST_CASE("two segment boundary: t_inert = 0 reduces to a constant-speed disk") {
    const KinematicState s{{3.0, 4.0}, {5.0, 0.0}};
    const TwoSegmentParams p{0.0, true, 6.5, std::nullopt, std::nullopt};
    for (double phi : {0.0, 1.0, 3.0}) {
        const Vec2 b = two_segment_boundary(s, 1.0, p, phi);
        CHECK((b - s.x0).norm() == doctest::Approx(6.5).epsilon(1e-14));
    }
}

TEST_CASE("two segment boundary: zero initial speed keeps the centre at x0") {
    const KinematicState s{{3.0, 4.0}, {0.0, 0.0}};
    const TwoSegmentParams p{0.25, true, 6.0, std::nullopt, std::nullopt};
    for (double phi : {0.0, 2.0}) {
        const Vec2 b = two_segment_boundary(s, 1.0, p, phi);
        CHECK((b - s.x0).norm() == doctest::Approx(6.0 * 0.75).epsilon(1e-14));
    }
}

TEST_CASE("two segment boundary: v_final follows the acceleration cap when set") {
    const KinematicState s{{0.0, 0.0}, {5.0, 0.0}};
    const TwoSegmentParams p{0.2, true, 1.0, 10.0, 8.0};
    // v_final = min(5 + 10 * 0.2, 8) = 7.
    const Vec2 b = two_segment_boundary(s, 1.0, p, kPi / 2.0);
    CHECK((b - Vec2{1.0, 0.0}).norm() == doctest::Approx(7.0 * 0.8).epsilon(1e-12));

    const TwoSegmentParams capped{0.5, true, 1.0, 10.0, 8.0};
    // v_final = min(5 + 5, 8) = 8.
    const Vec2 b2 = two_segment_boundary(s, 1.0, capped, kPi / 2.0);
    CHECK((b2 - Vec2{2.5, 0.0}).norm() == doctest::Approx(8.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("two segment boundary: dt <= t_inert is a degenerate point prediction") {
    const KinematicState s{{0.0, 0.0}, {5.0, 0.0}};
    const TwoSegmentParams p{2.0, true, 7.0, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(two_segment_boundary(s, 1.0, p, 0.0), DegenerateReachableSet);
    CHECK_THROWS_AS(two_segment_boundary(s, 2.0, p, 0.0), DegenerateReachableSet);
    CHECK_THROWS_AS(make_two_segment(2.0, true, 7.0).reachable_polygon(s, 1.0, 200),
                    DegenerateReachableSet);
}

TEST_CASE("reachable polygon: constant speed gives a regular 200-gon around x0") {
    const KinematicState s{{13.0, 7.0}, {4.0, 4.0}};
    const Polygon poly = make_constant_speed(8.91).reachable_polygon(s, 1.0, 200);
    REQUIRE(poly.size() == 200);
    CHECK(max_vertex_radius_deviation(poly, s.x0, 8.91) < 8.91 * 1e-12);
    CHECK(signed_area(poly) > 0.0);
    CHECK(point_in_polygon(s.x0, poly));
}

TEST_CASE("reachable polygon: constant acceleration centre drifts with v0") {
    const KinematicState s{{0.0, 0.0}, {5.0, 0.0}};
    const Polygon poly = make_constant_accel(10.0).reachable_polygon(s, 1.0, 200);
    const Vec2 center{5.0, 0.0};
    CHECK(max_vertex_radius_deviation(poly, center, 5.0) < 5.0 * 1e-12);
    CHECK(point_in_polygon(center, poly));
}

TEST_CASE("reachable polygon: all families produce CCW polygons containing their centre") {
    SplitMix64 rng(4242);
    const double dt = 1.0;
    // Model plus the analytic centre its boundary surrounds.
    using CenterFn = Vec2 (*)(const KinematicState&);
    const std::vector<std::pair<MotionModel, CenterFn>> cases = {
        {make_constant_speed(8.91), [](const KinematicState& s) { return s.x0; }},
        {make_constant_accel(19.0), [](const KinematicState& s) { return s.x0 + s.v0; }},
        {make_capped_accel(19.42, 8.91),
         [](const KinematicState& s) {
             const double speed = s.v0.norm();
             const Vec2 clipped = speed > 8.91 ? s.v0 * (8.91 / speed) : s.v0;
             return s.x0 + clipped;
         }},
        {make_two_segment(0.22, true, 7.0),
         [](const KinematicState& s) { return s.x0 + s.v0 * 0.22; }},
        {make_two_segment(0.3, false, 5.0, 12.0, 9.0), [](const KinematicState& s) {
             const double speed = s.v0.norm();
             const Vec2 dir = speed >= kZeroSpeedEps ? s.v0 * (1.0 / speed) : Vec2{0.0, 0.0};
             return s.x0 + dir * (5.0 * 0.3);
         }}};
    for (int i = 0; i < 50; ++i) {
        const KinematicState s{{rng.next_uniform(0.0, 105.0), rng.next_uniform(0.0, 68.0)},
                               rng.next_uniform(0.0, 9.0) *
                                   unit_vector(rng.next_uniform(0.0, 2.0 * kPi))};
        for (const auto& [model, center_of] : cases) {
            const Polygon poly = model.reachable_polygon(s, dt, 200);
            CHECK(signed_area(poly) > 0.0);
            CHECK(point_in_polygon(center_of(s), poly));
        }
    }
}

TEST_CASE("membership oracle: polygon containment matches the analytic region") {
    SplitMix64 rng(31337);
    const std::size_t n_vertices = 200;
    const double sagitta = 1.0 - std::cos(kPi / static_cast<double>(n_vertices));

    // Disk-shaped families: centre + constant radius.
    struct DiskCase {
        MotionModel model;
        Vec2 center;
        double radius;
    };
    const KinematicState s{{20.0, 30.0}, {4.0, 3.0}};  // |v0| = 5
    const std::vector<DiskCase> disk_cases = {
        {make_constant_speed(8.0), s.x0, 8.0},
        {make_constant_accel(10.0), s.x0 + s.v0, 5.0},
        {make_two_segment(0.22, true, 7.0), s.x0 + s.v0 * 0.22, 7.0 * 0.78},
    };
    for (const auto& c : disk_cases) {
        const Polygon poly = c.model.reachable_polygon(s, 1.0, n_vertices);
        int checked = 0;
        while (checked < 1000) {
            const Vec2 q = c.center + rng.next_uniform(0.0, 1.3 * c.radius) *
                                          unit_vector(rng.next_uniform(0.0, 2.0 * kPi));
            const double dist = (q - c.center).norm();
            if (std::abs(dist - c.radius) <= c.radius * sagitta + 1e-9) {
                continue;  // discretisation annulus; membership undefined there
            }
            CHECK(point_in_polygon(q, poly) == (dist < c.radius));
            ++checked;
        }
    }

    // Capped acceleration: star-shaped with an angle-dependent radius.
    {
        const double a_max = 19.42;
        const double v_max = 8.91;
        const MotionModel model = make_capped_accel(a_max, v_max);
        const Polygon poly = model.reachable_polygon(s, 1.0, n_vertices);
        const Vec2 center = s.x0 + s.v0;  // |v0| < v_max, no clipping
        int checked = 0;
        while (checked < 1000) {
            const Vec2 q = center + rng.next_uniform(0.0, 9.0) *
                                        unit_vector(rng.next_uniform(0.0, 2.0 * kPi));
            const Vec2 d = q - center;
            const double dist = d.norm();
            const double t_acc =
                capped_accel_time_to_limit(s.v0, a_max, v_max, std::atan2(d.y, d.x));
            const double t_eff = std::min(t_acc, 1.0);
            const double rho = a_max * t_eff * (1.0 - 0.5 * t_eff);
            // Wider band than for the disks: between sampled angles the true
            // boundary also moves, not just the chord.
            if (std::abs(dist - rho) <= rho * 4.0 * sagitta + 1e-9) {
                continue;
            }
            CHECK(point_in_polygon(q, poly) == (dist < rho));
            ++checked;
        }
    }
}

TEST_CASE("model params validation") {
    CHECK_THROWS_AS(make_constant_speed(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_constant_speed(-3.0), std::invalid_argument);
    CHECK_THROWS_AS(make_constant_accel(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_capped_accel(10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_two_segment(-0.1, true, 7.0), std::invalid_argument);
    // a_max and v_max must come together.
    CHECK_THROWS_AS(make_two_segment(0.2, true, 7.0, 10.0, std::nullopt),
                    std::invalid_argument);
    // v_const required whenever it is used.
    CHECK_THROWS_AS(make_two_segment(0.2, false, 0.0, 10.0, 8.0), std::invalid_argument);
    CHECK_NOTHROW(make_two_segment(0.2, true, 0.0, 10.0, 8.0));  // v_const unused here
    CHECK_NOTHROW(make_two_segment(0.0, true, 7.0));
}

TEST_CASE("model JSON round trip and error naming") {
    const auto j = nlohmann::json::parse(
        R"({"model": "two_segment", "t_inert": 0.22, "keep_initial": true, "v_const": 7.0})");
    const MotionModel model = model_from_json(j);
    CHECK(model.family() == ModelFamily::TwoSegment);
    const nlohmann::json round = params_to_json(model.params());
    CHECK(round.at("t_inert").get<double>() == 0.22);
    CHECK(round.at("keep_initial").get<bool>() == true);
    CHECK_FALSE(round.contains("a_max"));

    CHECK_THROWS_WITH_AS(model_from_json(nlohmann::json::parse(R"({"v_max": 8.0})")),
                         doctest::Contains("model"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        model_from_json(nlohmann::json::parse(R"({"model": "constant_speed"})")),
        doctest::Contains("v_max"), std::invalid_argument);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"model": "warp_drive"})")),
                    std::invalid_argument);
}

TEST_CASE("family metadata") {
    CHECK(family_name(ModelFamily::ConstantSpeed) == "constant_speed");
    CHECK(family_from_name("two_segment") == ModelFamily::TwoSegment);
    CHECK(family_param_count(ModelFamily::ConstantSpeed) == 1);
    CHECK(family_param_count(ModelFamily::ConstantAccel) == 1);
    CHECK(family_param_count(ModelFamily::CappedAccel) == 2);
    CHECK(family_param_count(ModelFamily::TwoSegment) == 5);
    CHECK_THROWS_AS(family_from_name("nope"), std::invalid_argument);
}

}  // TEST_SUITE
