#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace reachset {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Unit vector for angle phi (radians).
inline Vec2 unit_vector(double phi) { return {std::cos(phi), std::sin(phi)}; }

/// Closed planar polygon, vertices in counter-clockwise order.
/// The closing edge (last vertex -> first vertex) is implicit.
struct Polygon {
    std::vector<Vec2> vertices;

    Polygon() = default;
    explicit Polygon(std::vector<Vec2> verts) : vertices(std::move(verts)) {}

    std::size_t size() const { return vertices.size(); }
};

/// Shoelace signed area; positive for counter-clockwise vertex order.
double signed_area(const Polygon& poly);

/// Surface area in square meters. Requires at least 3 vertices.
double polygon_area(const Polygon& poly);

/// Boundary-inclusive containment test: true if q lies inside the polygon
/// or within kOnBoundaryEps of an edge. Winding-number based, so it is
/// correct for star-shaped (not only convex) simple polygons.
bool point_in_polygon(const Vec2& q, const Polygon& poly);

/// Distance band within which a point counts as "on the boundary".
inline constexpr double kOnBoundaryEps = 1e-9;

/// Builds the polygon with vertices boundary(2*pi*k/n), k = 0..n-1,
/// reoriented to counter-clockwise if needed. Rejects n < 3, non-finite
/// boundary outputs and zero-area (degenerate) results.
Polygon boundary_polygon(const std::function<Vec2(double)>& boundary, std::size_t n_vertices);

}  // namespace reachset
