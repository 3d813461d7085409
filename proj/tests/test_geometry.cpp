#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "reachset/geometry.hpp"
#include "reachset/rng.hpp"

using namespace reachset;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form area of a regular n-gon inscribed in a circle of radius r.
double regular_ngon_area(std::size_t n, double r) {
    return 0.5 * static_cast<double>(n) * std::sin(2.0 * kPi / static_cast<double>(n)) * r * r;
}

// Independent shoelace hand-roll over explicit index pairs, used as the
// oracle for polygon_area.
double shoelace_oracle(const Polygon& poly) {
    const auto& v = poly.vertices;
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = (i + 1) % v.size();
        acc += v[i].x * v[j].y - v[j].x * v[i].y;
    }
    return std::abs(acc) * 0.5;
}

// Half-plane membership oracle; valid for convex CCW polygons only.
bool convex_contains_oracle(const Vec2& q, const Polygon& poly) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = (i + 1) % v.size();
        if ((v[j] - v[i]).cross(q - v[i]) < 0.0) {
            return false;
        }
    }
    return true;
}

double min_edge_distance(const Vec2& q, const Polygon& poly) {
    const auto& v = poly.vertices;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t j = (i + 1) % v.size();
        const Vec2 ab = v[j] - v[i];
        const double len_sq = ab.norm_sq();
        double t = len_sq > 0.0 ? (q - v[i]).dot(ab) / len_sq : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (q - (v[i] + ab * t)).norm());
    }
    return best;
}

Polygon unit_square() {
    return Polygon{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("polygon area: unit square") { CHECK(polygon_area(unit_square()) == 1.0); }

TEST_CASE("polygon area: collinear points give zero") {
    const Polygon degenerate{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}};
    CHECK(polygon_area(degenerate) == 0.0);
}

TEST_CASE("polygon area: fewer than 3 vertices rejected") {
    CHECK_THROWS_AS(polygon_area(Polygon{{{0.0, 0.0}, {1.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(polygon_area(Polygon{}), std::invalid_argument);
}

TEST_CASE("polygon area: regular 200-gon matches the closed form and the shoelace oracle") {
    const Polygon poly =
        boundary_polygon([](double phi) { return Vec2{3.0, -7.5} + unit_vector(phi); }, 200);
    const double expected = regular_ngon_area(200, 1.0);
    CHECK(polygon_area(poly) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(polygon_area(poly) == doctest::Approx(shoelace_oracle(poly)).epsilon(1e-14));
}

TEST_CASE("point in polygon: unit square cases") {
    const Polygon square = unit_square();
    CHECK(point_in_polygon({0.5, 0.5}, square));
    CHECK_FALSE(point_in_polygon({2.0, 2.0}, square));
    // Boundary-inclusive: an edge midpoint counts as inside.
    CHECK(point_in_polygon({1.0, 0.5}, square));
    // Vertices count as inside too.
    CHECK(point_in_polygon({0.0, 0.0}, square));
}

TEST_CASE("point in polygon: agrees with the half-plane oracle on random convex polygons") {
    SplitMix64 rng(20240517);
    std::size_t tested = 0;
    while (tested < 10000) {
        const std::size_t n = 3 + rng.next_index(10);
        const Vec2 center{rng.next_uniform(-50.0, 50.0), rng.next_uniform(-50.0, 50.0)};
        const double radius = rng.next_uniform(0.5, 20.0);
        const double rot = rng.next_uniform(0.0, 2.0 * kPi);
        Polygon poly;
        for (std::size_t k = 0; k < n; ++k) {
            const double phi = rot + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
            poly.vertices.push_back(center + radius * unit_vector(phi));
        }
        const Vec2 q{center.x + rng.next_uniform(-1.5 * radius, 1.5 * radius),
                     center.y + rng.next_uniform(-1.5 * radius, 1.5 * radius)};
        if (min_edge_distance(q, poly) <= 1e-9) {
            continue;  // inside the on-boundary band; excluded by contract
        }
        CHECK(point_in_polygon(q, poly) == convex_contains_oracle(q, poly));
        ++tested;
    }
}

TEST_CASE("point in polygon: correct for a star-shaped non-convex polygon") {
    // Radial spikes around the origin; winding must not be fooled.
    Polygon star;
    const std::size_t n = 16;
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        const double r = k % 2 == 0 ? 10.0 : 2.0;
        star.vertices.push_back(r * unit_vector(phi));
    }
    CHECK(point_in_polygon({0.0, 0.0}, star));
    CHECK(point_in_polygon({9.9, 0.0}, star));         // inside a spike (phi = 0)
    CHECK(point_in_polygon({5.0, 5.0}, star));         // inside the spike at phi = pi/4
    const Vec2 valley = 5.0 * unit_vector(kPi / 8.0);  // valley radius is only 2
    CHECK_FALSE(point_in_polygon(valley, star));
    CHECK_FALSE(point_in_polygon({10.5, 0.0}, star));  // beyond the spike tip
}

TEST_CASE("polygon area: translation invariant and quadratic under scaling") {
    SplitMix64 rng(77);
    for (int iter = 0; iter < 200; ++iter) {
        // Random star-shaped polygon (sorted angles, positive radii).
        Polygon poly;
        const std::size_t n = 3 + rng.next_index(30);
        for (std::size_t k = 0; k < n; ++k) {
            const double phi = 2.0 * kPi * (static_cast<double>(k) + rng.next_double() * 0.8) /
                               static_cast<double>(n);
            poly.vertices.push_back(rng.next_uniform(0.5, 30.0) * unit_vector(phi));
        }
        const double area = polygon_area(poly);

        const Vec2 shift{rng.next_uniform(-100.0, 100.0), rng.next_uniform(-100.0, 100.0)};
        Polygon shifted = poly;
        for (Vec2& v : shifted.vertices) {
            v += shift;
        }
        CHECK(polygon_area(shifted) == doctest::Approx(area).epsilon(1e-12));

        const double s = rng.next_uniform(0.1, 5.0);
        Polygon scaled = poly;
        for (Vec2& v : scaled.vertices) {
            v = v * s;
        }
        CHECK(polygon_area(scaled) == doctest::Approx(area * s * s).epsilon(1e-12));
    }
}

TEST_CASE("boundary polygon: unit circle with 4 vertices is the inscribed square") {
    const Polygon poly = boundary_polygon([](double phi) { return unit_vector(phi); }, 4);
    REQUIRE(poly.size() == 4);
    CHECK(poly.vertices[0].x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(poly.vertices[0].y == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(poly.vertices[1].y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(poly.vertices[2].x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(poly.vertices[3].y == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("boundary polygon: 200-gon area error versus the true circle stays below 2.1e-4") {
    for (double r : {1.0, 4.8, 8.91, 0.03, 250.0}) {
        const Polygon poly =
            boundary_polygon([r](double phi) { return r * unit_vector(phi); }, 200);
        const double rel_err = std::abs(polygon_area(poly) - kPi * r * r) / (kPi * r * r);
        CHECK(rel_err < 2.1e-4);
        CHECK(polygon_area(poly) ==
              doctest::Approx(regular_ngon_area(200, r)).epsilon(1e-12));
    }
}

TEST_CASE("boundary polygon: clockwise parametrisation is reordered to CCW") {
    const Polygon poly =
        boundary_polygon([](double phi) { return unit_vector(-phi); }, 16);  // CW circle
    CHECK(signed_area(poly) > 0.0);
}

TEST_CASE("boundary polygon: rejects degenerate and invalid input") {
    CHECK_THROWS_AS(boundary_polygon([](double) { return Vec2{1.0, 1.0}; }, 200),
                    std::invalid_argument);  // constant point
    CHECK_THROWS_AS(boundary_polygon([](double phi) { return unit_vector(phi); }, 2),
                    std::invalid_argument);  // too few vertices
    CHECK_THROWS_AS(boundary_polygon(
                        [](double phi) {
                            return phi > 3.0 ? Vec2{std::nan(""), 0.0} : unit_vector(phi);
                        },
                        8),
                    std::invalid_argument);  // non-finite output
}

}  // TEST_SUITE
