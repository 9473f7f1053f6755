#include "spargen/geometry.hpp"

namespace spargen {

namespace {

// Projection radius of a box onto a unit axis.
double project_radius(const OrientedBox& b, const Vec3& axis) {
    double r = 0;
    for (int i = 0; i < 3; ++i)
        r += b.half_extents[i] * std::abs(axis.dot(b.rotation.col(i)));
    return r;
}

}  // namespace

bool obb_overlap(const OrientedBox& a, const OrientedBox& b) {
    std::vector<Vec3> axes;
    axes.reserve(15);
    for (int i = 0; i < 3; ++i) axes.push_back(a.rotation.col(i));
    for (int i = 0; i < 3; ++i) axes.push_back(b.rotation.col(i));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Vec3 c = a.rotation.col(i).cross(b.rotation.col(j));
            if (c.norm() > 1e-9) axes.push_back(c.normalized());
        }

    const Vec3 d = b.center - a.center;
    for (const Vec3& axis : axes) {
        double dist = std::abs(d.dot(axis));
        if (dist > project_radius(a, axis) + project_radius(b, axis)) return false;
    }
    return true;
}

}  // namespace spargen
