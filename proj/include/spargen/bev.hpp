#pragma once

#include <array>
#include <vector>

#include "spargen/geometry.hpp"
#include "spargen/task_geometry.hpp"

namespace spargen {

/// Observer-centric ground-plane frame anchored at a camera: origin under
/// the camera, y along the gaze projected to the ground, x to the right.
struct BevFrame {
    Vec3 origin = Vec3::Zero();  // up-component zeroed
    Vec3 x_axis = Vec3::Zero();  // unit, in the ground plane
    Vec3 y_axis = Vec3::Zero();  // unit, in the ground plane

    Vec2 to_bev(const Vec3& world) const {
        const Vec3 d = world - origin;
        return Vec2(d.dot(x_axis), d.dot(y_axis));
    }
};

/// Rejected(VerticalGaze) when the camera looks within 5 degrees of the
/// vertical, where the ground projection degenerates.
Result<BevFrame, Skip> bev_frame(const RigidTransform& first_pose, const Vec3& up);

struct BevObject {
    Vec3 gt_world = Vec3::Zero();
    Vec2 predicted = Vec2::Zero();  // meters, observer frame
};

struct BevSample {
    RigidTransform first_pose;
    std::vector<BevObject> objects;  // 3-7 per sample
};

inline const std::vector<std::pair<double, double>>& bev_distance_bins() {
    static const std::vector<std::pair<double, double>> bins = {
        {0, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 7}, {7, 10},
        {10, std::numeric_limits<double>::infinity()}};
    return bins;
}

struct BevBinStats {
    std::pair<double, double> range;
    int count = 0;
    double mean = 0;
    double p90 = 0;
};

struct BevReport {
    int n_objects = 0;
    double mean = 0;
    double p50 = 0;
    double p90 = 0;
    std::vector<BevBinStats> bins;
};

/// Average position error of predicted BEV coordinates, overall and per
/// ground-truth-distance bin. Samples whose frame is rejected are skipped.
BevReport bev_ape(const std::vector<BevSample>& samples, const Vec3& up);

/// Linear-interpolation percentile of a sample (q in [0, 1]).
double percentile(std::vector<double> values, double q);

}  // namespace spargen
