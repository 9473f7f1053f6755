#include "spargen/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace spargen {

namespace {

constexpr double kNearPlane = 1e-4;  // meters

struct ScreenVertex {
    double u, v, z;
};

double edge_fn(const ScreenVertex& a, const ScreenVertex& b, double px, double py) {
    return (px - a.u) * (b.v - a.v) - (py - a.v) * (b.u - a.u);
}

// Clip a camera-space triangle against z = kNearPlane. Returns the clipped
// polygon (0, 3 or 4 vertices).
std::vector<Vec3> clip_near(const std::array<Vec3, 3>& tri) {
    std::vector<Vec3> out;
    out.reserve(4);
    for (int i = 0; i < 3; ++i) {
        const Vec3& cur = tri[i];
        const Vec3& nxt = tri[(i + 1) % 3];
        const bool cur_in = cur.z() > kNearPlane;
        const bool nxt_in = nxt.z() > kNearPlane;
        if (cur_in) out.push_back(cur);
        if (cur_in != nxt_in) {
            const double t = (kNearPlane - cur.z()) / (nxt.z() - cur.z());
            out.push_back(cur + t * (nxt - cur));
        }
    }
    return out;
}

void raster_triangle(const CameraModel& cam, const std::array<Vec3, 3>& tri_cam,
                     int face_index, RasterResult& result) {
    std::vector<Vec3> poly = clip_near(tri_cam);
    if (poly.size() < 3) return;

    // Fan-triangulate the clipped polygon.
    for (size_t k = 1; k + 1 < poly.size(); ++k) {
        const std::array<Vec3, 3> t = {poly[0], poly[k], poly[k + 1]};
        std::array<ScreenVertex, 3> s;
        for (int i = 0; i < 3; ++i) {
            s[i].u = cam.fx * t[i].x() / t[i].z() + cam.cx;
            s[i].v = cam.fy * t[i].y() / t[i].z() + cam.cy;
            s[i].z = t[i].z();
        }

        const double area = edge_fn(s[0], s[1], s[2].u, s[2].v);
        if (area == 0.0) continue;

        double umin = std::min({s[0].u, s[1].u, s[2].u});
        double umax = std::max({s[0].u, s[1].u, s[2].u});
        double vmin = std::min({s[0].v, s[1].v, s[2].v});
        double vmax = std::max({s[0].v, s[1].v, s[2].v});
        int x0 = std::max(0, static_cast<int>(std::floor(umin - 0.5)));
        int x1 = std::min(result.width - 1, static_cast<int>(std::ceil(umax - 0.5)));
        int y0 = std::max(0, static_cast<int>(std::floor(vmin - 0.5)));
        int y1 = std::min(result.height - 1, static_cast<int>(std::ceil(vmax - 0.5)));

        for (int y = y0; y <= y1; ++y) {
            const double py = y + 0.5;
            for (int x = x0; x <= x1; ++x) {
                const double px = x + 0.5;
                double w0 = edge_fn(s[1], s[2], px, py);
                double w1 = edge_fn(s[2], s[0], px, py);
                double w2 = edge_fn(s[0], s[1], px, py);
                // No culling: accept either winding.
                const bool inside = (w0 >= 0 && w1 >= 0 && w2 >= 0) ||
                                    (w0 <= 0 && w1 <= 0 && w2 <= 0);
                if (!inside) continue;
                w0 /= area;
                w1 /= area;
                w2 /= area;
                const double inv_z = w0 / s[0].z + w1 / s[1].z + w2 / s[2].z;
                if (inv_z <= 0) continue;
                const double z = 1.0 / inv_z;
                const size_t idx = static_cast<size_t>(y) * result.width + x;
                if (z < result.z_buffer[idx]) {
                    result.z_buffer[idx] = z;
                    result.pix_to_face[idx] = face_index;
                }
            }
        }
    }
}

}  // namespace

RasterResult rasterize(const FrameMeta& frame, const TriangleMesh& mesh,
                       double raster_scale) {
    const CameraModel cam = raster_scale == 1.0 ? frame.camera : frame.camera.scaled(raster_scale);

    RasterResult result;
    result.width = cam.width;
    result.height = cam.height;
    result.pix_to_face.assign(static_cast<size_t>(cam.width) * cam.height, kNoFace);
    result.z_buffer.assign(static_cast<size_t>(cam.width) * cam.height,
                           std::numeric_limits<double>::infinity());

    const RigidTransform world_from_cam = frame.pose;
    const Mat3 r_inv = world_from_cam.rotation.transpose();
    const Vec3 t = world_from_cam.translation;

    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& face = mesh.faces[f];
        std::array<Vec3, 3> tri_cam;
        double zmax = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) {
            tri_cam[i] = r_inv * (mesh.vertices[face[i]] - t);
            zmax = std::max(zmax, tri_cam[i].z());
        }
        if (zmax <= kNearPlane) continue;
        raster_triangle(cam, tri_cam, static_cast<int>(f), result);
    }
    return result;
}

}  // namespace spargen
