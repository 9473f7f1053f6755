#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "spargen/util.hpp"

namespace spargen {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

constexpr double kDegPerRad = 180.0 / EIGEN_PI;
constexpr double kRadPerDeg = EIGEN_PI / 180.0;

/// SE(3) pose stored camera-to-world: p_world = R * p_cam + t.
/// Camera frame convention: x right, y down, z forward.
struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static RigidTransform identity() { return {}; }

    static RigidTransform from_matrix(const Mat4& m) {
        RigidTransform t;
        t.rotation = m.block<3, 3>(0, 0);
        t.translation = m.block<3, 1>(0, 3);
        return t;
    }

    Mat4 matrix() const {
        Mat4 m = Mat4::Identity();
        m.block<3, 3>(0, 0) = rotation;
        m.block<3, 1>(0, 3) = translation;
        return m;
    }

    RigidTransform inverse() const {
        RigidTransform t;
        t.rotation = rotation.transpose();
        t.translation = -(rotation.transpose() * translation);
        return t;
    }

    /// this ∘ other (apply `other` first).
    RigidTransform compose(const RigidTransform& other) const {
        RigidTransform t;
        t.rotation = rotation * other.rotation;
        t.translation = rotation * other.translation + translation;
        return t;
    }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    bool is_valid(double tol = 1e-6) const {
        if (!rotation.allFinite() || !translation.allFinite()) return false;
        Mat3 should_be_identity = rotation.transpose() * rotation;
        if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
        return std::abs(rotation.determinant() - 1.0) <= tol;
    }
};

/// Map a world point into the camera frame of a camera-to-world pose.
inline Vec3 world_to_camera(const RigidTransform& pose, const Vec3& p) {
    return pose.rotation.transpose() * (p - pose.translation);
}

/// Map a camera-frame point back to world.
inline Vec3 camera_to_world(const RigidTransform& pose, const Vec3& p) {
    return pose.apply(p);
}

/// Pinhole intrinsics, zero skew.
struct CameraModel {
    double fx = 0, fy = 0, cx = 0, cy = 0;
    int width = 0, height = 0;

    Mat3 intrinsics() const {
        Mat3 k = Mat3::Zero();
        k(0, 0) = fx;
        k(1, 1) = fy;
        k(0, 2) = cx;
        k(1, 2) = cy;
        k(2, 2) = 1.0;
        return k;
    }

    static CameraModel from_intrinsics(const Mat3& k, int width, int height) {
        CameraModel c;
        c.fx = k(0, 0);
        c.fy = k(1, 1);
        c.cx = k(0, 2);
        c.cy = k(1, 2);
        c.width = width;
        c.height = height;
        return c;
    }

    /// Intrinsics for an image resized by `scale` in both axes.
    CameraModel scaled(double scale) const {
        CameraModel c = *this;
        c.fx *= scale;
        c.fy *= scale;
        c.cx *= scale;
        c.cy *= scale;
        c.width = std::max(1, static_cast<int>(std::lround(width * scale)));
        c.height = std::max(1, static_cast<int>(std::lround(height * scale)));
        return c;
    }

    bool is_valid() const {
        return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 && cx < width &&
               cy >= 0 && cy < height;
    }
};

struct PixelPoint {
    double u = 0;  // pixels, +right
    double v = 0;  // pixels, +down
    double z = 0;  // meters, camera-frame depth
};

constexpr double kMinProjectDepth = 1e-6;

/// Perspective projection of a camera-frame point. Throws BehindCamera for
/// points at or behind the optical center plane.
inline PixelPoint project_point(const CameraModel& camera, const Vec3& p_cam) {
    if (p_cam.z() <= kMinProjectDepth)
        throw BehindCamera("project_point: depth " + std::to_string(p_cam.z()));
    PixelPoint out;
    out.u = camera.fx * p_cam.x() / p_cam.z() + camera.cx;
    out.v = camera.fy * p_cam.y() / p_cam.z() + camera.cy;
    out.z = p_cam.z();
    return out;
}

/// Inverse of project_point at a given depth.
inline Vec3 unproject_pixel(const CameraModel& camera, double u, double v, double z) {
    return Vec3((u - camera.cx) / camera.fx * z, (v - camera.cy) / camera.fy * z, z);
}

/// Oriented 3D box: world = rotation * (local point) + center, local points
/// in [-half_extents, +half_extents].
struct OrientedBox {
    Vec3 center = Vec3::Zero();
    Vec3 half_extents = Vec3::Zero();
    Mat3 rotation = Mat3::Identity();

    std::array<Vec3, 8> corners() const {
        std::array<Vec3, 8> out;
        int k = 0;
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) {
                    Vec3 local(sx * half_extents.x(), sy * half_extents.y(),
                               sz * half_extents.z());
                    out[k++] = rotation * local + center;
                }
        return out;
    }

    double volume() const { return 8.0 * half_extents.prod(); }
};

/// Separating-axis test for two oriented boxes. True when the interiors
/// intersect; touching faces count as overlap (non-strict separation).
bool obb_overlap(const OrientedBox& a, const OrientedBox& b);

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<int> vertex_instance;  // object id per vertex, -1 = none

    size_t vertex_count() const { return vertices.size(); }
    size_t face_count() const { return faces.size(); }
};

struct ObjectAnnotation {
    int object_id = -1;
    std::string label;
    OrientedBox box;
    std::vector<int> vertex_ids;  // mesh vertices carrying this instance id
};

struct FrameMeta {
    int frame_index = -1;
    std::string image_path;
    RigidTransform pose;  // camera-to-world
    CameraModel camera;
};

struct SceneBundle {
    std::string scene_id;
    TriangleMesh mesh;
    std::vector<FrameMeta> frames;  // ordered by frame_index
    std::vector<ObjectAnnotation> objects;
    Vec3 up_axis = Vec3(0, 0, 1);

    const FrameMeta* frame_by_index(int frame_index) const {
        for (const auto& f : frames)
            if (f.frame_index == frame_index) return &f;
        return nullptr;
    }

    const ObjectAnnotation* object_by_id(int object_id) const {
        for (const auto& o : objects)
            if (o.object_id == object_id) return &o;
        return nullptr;
    }
};

}  // namespace spargen
