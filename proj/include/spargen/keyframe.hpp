#pragma once

#include <vector>

#include "spargen/geometry.hpp"

namespace spargen {

struct SubsampleConfig {
    double d_th = 0.5;       // meters
    double theta_th = 15.0;  // degrees

    bool is_valid() const { return d_th >= 0 && theta_th >= 0 && theta_th <= 180; }
};

// Per-dataset defaults.
inline SubsampleConfig scannet_subsample() { return {0.5, 15.0}; }
inline SubsampleConfig scannetpp_subsample() { return {0.5, 45.0}; }

/// Geodesic angle between two rotations, degrees in [0, 180]. The arccos
/// argument is clamped so near-identity drift cannot produce NaN.
double rotation_angle_deg(const Mat3& r_i, const Mat3& r_j);

/// Pose-based redundancy filter. The first frame is always kept; a frame is
/// dropped iff some previously kept frame is within d_th in translation AND
/// strictly within theta_th in rotation. Returns positions into `frames`
/// (not frame_index values), strictly increasing.
std::vector<size_t> subsample_frames(const std::vector<FrameMeta>& frames,
                                     const SubsampleConfig& cfg);

}  // namespace spargen
