#pragma once

#include <array>
#include <vector>

#include "spargen/geometry.hpp"

namespace spargen {

struct Triangle2D {
    std::array<int, 3> v;  // indices into the point set
};

/// Bowyer-Watson Delaunay triangulation of a 2D point set. Duplicate points
/// must be removed by the caller; exact cocircular ties resolve to either
/// valid diagonal. Returns an empty list for fewer than 3 points or fully
/// collinear input.
std::vector<Triangle2D> delaunay_triangulate(const std::vector<Vec2>& points);

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c);
double triangle_circumradius(const Vec2& a, const Vec2& b, const Vec2& c);

/// Indices of the convex hull in counter-clockwise order (Andrew monotone
/// chain). Collinear input returns the two extreme points.
std::vector<int> convex_hull(const std::vector<Vec2>& points);

double convex_hull_area(const std::vector<Vec2>& points);

/// Alpha-shape area: total area of Delaunay triangles with circumradius
/// <= 1/alpha. Falls back to the convex hull area when no triangle
/// qualifies. Returns a negative value for degenerate (collinear) input.
double alpha_shape_area(const std::vector<Vec2>& points, double alpha);

}  // namespace spargen
