#include "reachset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace reachset {

double signed_area(const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) {
        throw std::invalid_argument("polygon_area: polygon needs at least 3 vertices");
    }
    double twice_area = 0.0;
    Vec2 prev = v.back();
    for (const Vec2& cur : v) {
        twice_area += prev.cross(cur);
        prev = cur;
    }
    return 0.5 * twice_area;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

namespace {

// Squared distance from q to segment [a, b].
double dist_sq_to_segment(const Vec2& q, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const Vec2 aq = q - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) {
        return aq.norm_sq();
    }
    double t = aq.dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 closest = a + ab * t;
    return (q - closest).norm_sq();
}

}  // namespace

bool point_in_polygon(const Vec2& q, const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) {
        throw std::invalid_argument("point_in_polygon: polygon needs at least 3 vertices");
    }
    constexpr double on_eps_sq = kOnBoundaryEps * kOnBoundaryEps;
    int winding = 0;
    Vec2 a = v.back();
    for (const Vec2& b : v) {
        if (dist_sq_to_segment(q, a, b) <= on_eps_sq) {
            return true;  // boundary counts as inside
        }
        if (a.y <= q.y) {
            if (b.y > q.y && (b - a).cross(q - a) > 0.0) {
                ++winding;
            }
        } else {
            if (b.y <= q.y && (b - a).cross(q - a) < 0.0) {
                --winding;
            }
        }
        a = b;
    }
    return winding != 0;
}

Polygon boundary_polygon(const std::function<Vec2(double)>& boundary, std::size_t n_vertices) {
    if (n_vertices < 3) {
        throw std::invalid_argument("boundary_polygon: need at least 3 vertices");
    }
    Polygon poly;
    poly.vertices.reserve(n_vertices);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_vertices);
    for (std::size_t k = 0; k < n_vertices; ++k) {
        Vec2 p = boundary(step * static_cast<double>(k));
        if (!p.finite()) {
            throw std::invalid_argument("boundary_polygon: boundary produced a non-finite point");
        }
        poly.vertices.push_back(p);
    }
    const double area2 = signed_area(poly);
    if (area2 == 0.0) {
        throw std::invalid_argument("boundary_polygon: degenerate zero-area boundary");
    }
    if (area2 < 0.0) {
        std::reverse(poly.vertices.begin(), poly.vertices.end());
    }
    return poly;
}

}  // namespace reachset
