#include "spargen/bev.hpp"

#include <algorithm>

namespace spargen {

Result<BevFrame, Skip> bev_frame(const RigidTransform& first_pose, const Vec3& up) {
    const Vec3 forward = first_pose.rotation.col(2);  // camera z in world
    if (std::abs(forward.dot(up)) > std::cos(5.0 * kRadPerDeg)) return Skip::DegenerateGaze;

    BevFrame frame;
    frame.origin = first_pose.translation - first_pose.translation.dot(up) * up;
    frame.y_axis = (forward - forward.dot(up) * up).normalized();
    // Observer's right: the gaze direction rotated -90 degrees about up.
    frame.x_axis = frame.y_axis.cross(up).normalized();
    return frame;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    const double idx = q * (values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(idx));
    const size_t hi = static_cast<size_t>(std::ceil(idx));
    const double frac = idx - lo;
    return values[lo] * (1 - frac) + values[hi] * frac;
}

BevReport bev_ape(const std::vector<BevSample>& samples, const Vec3& up) {
    std::vector<double> errors;
    std::vector<std::vector<double>> bin_errors(bev_distance_bins().size());

    for (const auto& sample : samples) {
        const auto frame = bev_frame(sample.first_pose, up);
        if (!frame.ok()) continue;
        for (const auto& obj : sample.objects) {
            const Vec2 gt = frame.value().to_bev(obj.gt_world);
            const double err = (gt - obj.predicted).norm();
            errors.push_back(err);
            const double dist = gt.norm();
            for (size_t b = 0; b < bev_distance_bins().size(); ++b) {
                const auto& [lo, hi] = bev_distance_bins()[b];
                if (dist >= lo && dist < hi) {
                    bin_errors[b].push_back(err);
                    break;
                }
            }
        }
    }

    BevReport report;
    report.n_objects = static_cast<int>(errors.size());
    if (!errors.empty()) {
        double sum = 0;
        for (double e : errors) sum += e;
        report.mean = sum / errors.size();
        report.p50 = percentile(errors, 0.5);
        report.p90 = percentile(errors, 0.9);
    }
    for (size_t b = 0; b < bev_distance_bins().size(); ++b) {
        BevBinStats stats;
        stats.range = bev_distance_bins()[b];
        stats.count = static_cast<int>(bin_errors[b].size());
        if (stats.count) {
            double sum = 0;
            for (double e : bin_errors[b]) sum += e;
            stats.mean = sum / stats.count;
            stats.p90 = percentile(bin_errors[b], 0.9);
        }
        report.bins.push_back(stats);
    }
    return report;
}

}  // namespace spargen
