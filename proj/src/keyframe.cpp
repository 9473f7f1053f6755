#include "spargen/keyframe.hpp"

#include <algorithm>

namespace spargen {

double rotation_angle_deg(const Mat3& r_i, const Mat3& r_j) {
    const Mat3 rel = r_i.transpose() * r_j;
    double c = (rel.trace() - 1.0) / 2.0;
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * kDegPerRad;
}

std::vector<size_t> subsample_frames(const std::vector<FrameMeta>& frames,
                                     const SubsampleConfig& cfg) {
    std::vector<size_t> kept;
    for (size_t j = 0; j < frames.size(); ++j) {
        bool redundant = false;
        for (size_t i : kept) {
            const double d = (frames[i].pose.translation - frames[j].pose.translation).norm();
            if (d > cfg.d_th) continue;
            const double theta =
                rotation_angle_deg(frames[i].pose.rotation, frames[j].pose.rotation);
            if (theta < cfg.theta_th) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(j);
    }
    return kept;
}

}  // namespace spargen
