#include "spargen/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spargen {

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) -
                          (c.x() - a.x()) * (b.y() - a.y()));
}

double triangle_circumradius(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double la = (b - c).norm();
    const double lb = (a - c).norm();
    const double lc = (a - b).norm();
    const double area = triangle_area(a, b, c);
    if (area < 1e-14) return std::numeric_limits<double>::infinity();
    return la * lb * lc / (4.0 * area);
}

namespace {

struct CircumCircle {
    Vec2 center;
    double radius_sq;
};

bool circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, CircumCircle& out) {
    const double d = 2.0 * ((a.x() * (b.y() - c.y())) + (b.x() * (c.y() - a.y())) +
                            (c.x() * (a.y() - b.y())));
    if (std::abs(d) < 1e-14) return false;
    const double a2 = a.squaredNorm(), b2 = b.squaredNorm(), c2 = c.squaredNorm();
    const double ux = (a2 * (b.y() - c.y()) + b2 * (c.y() - a.y()) + c2 * (a.y() - b.y())) / d;
    const double uy = (a2 * (c.x() - b.x()) + b2 * (a.x() - c.x()) + c2 * (b.x() - a.x())) / d;
    out.center = Vec2(ux, uy);
    out.radius_sq = (out.center - a).squaredNorm();
    return true;
}

struct WorkTriangle {
    std::array<int, 3> v;
    CircumCircle circle;
    bool alive = true;
};

}  // namespace

std::vector<Triangle2D> delaunay_triangulate(const std::vector<Vec2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) return {};

    // Super-triangle generously containing every input point.
    Vec2 lo = points[0], hi = points[0];
    for (const Vec2& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec2 mid = (lo + hi) / 2;
    const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
    std::vector<Vec2> pts = points;
    pts.push_back(mid + Vec2(-20 * span, -10 * span));
    pts.push_back(mid + Vec2(20 * span, -10 * span));
    pts.push_back(mid + Vec2(0, 20 * span));

    std::vector<WorkTriangle> tris;
    {
        WorkTriangle root;
        root.v = {n, n + 1, n + 2};
        circumcircle(pts[n], pts[n + 1], pts[n + 2], root.circle);
        tris.push_back(root);
    }

    std::map<std::pair<int, int>, int> edge_count;
    for (int i = 0; i < n; ++i) {
        const Vec2& p = pts[i];
        edge_count.clear();

        for (auto& t : tris) {
            if (!t.alive) continue;
            // Strict interior test; exact cocircularity keeps the triangle.
            if ((p - t.circle.center).squaredNorm() < t.circle.radius_sq - 1e-12) {
                t.alive = false;
                for (int e = 0; e < 3; ++e) {
                    int a = t.v[e], b = t.v[(e + 1) % 3];
                    if (a > b) std::swap(a, b);
                    edge_count[{a, b}]++;
                }
            }
        }

        std::erase_if(tris, [](const WorkTriangle& t) { return !t.alive; });

        for (const auto& [edge, count] : edge_count) {
            if (count != 1) continue;  // interior edge of the cavity
            WorkTriangle t;
            t.v = {edge.first, edge.second, i};
            if (!circumcircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], t.circle))
                continue;  // collinear with the new point
            tris.push_back(t);
        }
    }

    std::vector<Triangle2D> out;
    for (const auto& t : tris) {
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
        out.push_back({t.v});
    }
    // Canonical order for reproducible downstream sums.
    for (auto& t : out) std::sort(t.v.begin(), t.v.end());
    std::sort(out.begin(), out.end(),
              [](const Triangle2D& a, const Triangle2D& b) { return a.v < b.v; });
    return out;
}

std::vector<int> convex_hull(const std::vector<Vec2>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (points[a].x() != points[b].x()) return points[a].x() < points[b].x();
        return points[a].y() < points[b].y();
    });

    auto cross = [&](int o, int a, int b) {
        const Vec2 oa = points[a] - points[o];
        const Vec2 ob = points[b] - points[o];
        return oa.x() * ob.y() - oa.y() * ob.x();
    };

    std::vector<int> hull;
    for (int i : idx) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0)
            hull.pop_back();
        hull.push_back(i);
    }
    const size_t lower = hull.size() + 1;
    for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
        while (hull.size() >= lower && cross(hull[hull.size() - 2], hull.back(), *it) <= 0)
            hull.pop_back();
        hull.push_back(*it);
    }
    if (!hull.empty()) hull.pop_back();
    return hull;
}

double convex_hull_area(const std::vector<Vec2>& points) {
    const std::vector<int> hull = convex_hull(points);
    if (hull.size() < 3) return 0.0;
    double twice = 0;
    for (size_t i = 0; i < hull.size(); ++i) {
        const Vec2& a = points[hull[i]];
        const Vec2& b = points[hull[(i + 1) % hull.size()]];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return std::abs(twice) / 2.0;
}

double alpha_shape_area(const std::vector<Vec2>& points, double alpha) {
    // Dedupe: the triangulator assumes distinct points.
    std::vector<Vec2> pts;
    pts.reserve(points.size());
    {
        std::vector<Vec2> sorted = points;
        std::sort(sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
            if (a.x() != b.x()) return a.x() < b.x();
            return a.y() < b.y();
        });
        for (const Vec2& p : sorted)
            if (pts.empty() || (pts.back() - p).norm() > 1e-9) pts.push_back(p);
    }
    if (pts.size() < 3) return -1.0;

    const std::vector<Triangle2D> tris = delaunay_triangulate(pts);
    if (tris.empty()) return -1.0;  // collinear input

    const double max_radius = 1.0 / alpha;
    double area = 0;
    bool any = false;
    for (const auto& t : tris) {
        const Vec2 &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
        if (triangle_circumradius(a, b, c) <= max_radius) {
            area += triangle_area(a, b, c);
            any = true;
        }
    }
    if (!any) return convex_hull_area(pts);
    return area;
}

}  // namespace spargen
