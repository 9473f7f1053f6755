#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spargen/geometry.hpp"

namespace spargen {

/// Single-frame grounding prediction decoded from model text:
/// frame index, normalized image location, metric depth and box size.
struct MonoPrediction {
    int frame_index = -1;
    double u = 0, v = 0;      // [0, 1000]
    double depth = 0;         // meters
    double l = 0, w = 0, h = 0;  // meters

    bool is_valid() const {
        return depth > 0 && l > 0 && w > 0 && h > 0 && u >= 0 && u <= 1000 && v >= 0 &&
               v <= 1000;
    }
};

/// World-axis-aligned box.
struct Box3D {
    Vec3 center = Vec3::Zero();
    Vec3 size = Vec3::Zero();  // (l, w, h)

    Vec3 min() const { return center - size / 2; }
    Vec3 max() const { return center + size / 2; }
    double volume() const { return size.prod(); }
};

/// Parse `frame:<k>; uv:(u,v); depth:<d>; size:(l,w,h)`. Whitespace around
/// tokens is ignored; any missing field makes the text unparseable.
std::optional<MonoPrediction> decode_prediction(const std::string& text);

std::string encode_prediction(const MonoPrediction& pred);

/// Recover the world-space box from a prediction through the frame's camera:
/// the normalized pixel becomes a ray, scaled so its depth matches, then
/// mapped through the camera-to-world pose.
Box3D lift_to_world(const MonoPrediction& pred, const FrameMeta& frame);

/// Axis-aligned IoU.
double iou3d(const Box3D& a, const Box3D& b);

/// Snap a predicted box to the best proposal: max IoU, falling back to the
/// nearest center when every proposal has zero overlap. Empty proposal list
/// returns the box unchanged.
Box3D refine_with_proposals(const Box3D& box, const std::vector<Box3D>& proposals);

struct GroundingSample {
    Box3D predicted;
    Box3D ground_truth;
    std::vector<Box3D> proposals;
};

struct GroundingAccuracy {
    // threshold -> percent of samples with IoU >= threshold
    std::map<double, double> raw;
    std::map<double, double> refined;
    int n = 0;
};

GroundingAccuracy grounding_accuracy(const std::vector<GroundingSample>& samples,
                                     const std::vector<double>& thresholds = {0.25, 0.5});

}  // namespace spargen
