#include "spargen/grounding.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "spargen/util.hpp"

namespace spargen {

namespace {

std::string strip_spaces(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

// "key:value" fields split on ';', numbers possibly wrapped in parentheses.
bool parse_numbers(const std::string& value, std::vector<double>& out, size_t expected) {
    std::string body = value;
    if (!body.empty() && body.front() == '(') body = body.substr(1);
    if (!body.empty() && body.back() == ')') body.pop_back();
    std::stringstream ss(body);
    std::string tok;
    out.clear();
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used == 0) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return out.size() == expected;
}

}  // namespace

std::optional<MonoPrediction> decode_prediction(const std::string& text) {
    const std::string compact = strip_spaces(text);
    MonoPrediction pred;
    bool has_frame = false, has_uv = false, has_depth = false, has_size = false;

    std::stringstream ss(compact);
    std::string field;
    while (std::getline(ss, field, ';')) {
        const size_t colon = field.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = field.substr(0, colon);
        const std::string value = field.substr(colon + 1);
        std::vector<double> nums;
        if (key == "frame") {
            if (!parse_numbers(value, nums, 1)) return std::nullopt;
            pred.frame_index = static_cast<int>(nums[0]);
            has_frame = true;
        } else if (key == "uv") {
            if (!parse_numbers(value, nums, 2)) return std::nullopt;
            pred.u = nums[0];
            pred.v = nums[1];
            has_uv = true;
        } else if (key == "depth") {
            if (!parse_numbers(value, nums, 1)) return std::nullopt;
            pred.depth = nums[0];
            has_depth = true;
        } else if (key == "size") {
            if (!parse_numbers(value, nums, 3)) return std::nullopt;
            pred.l = nums[0];
            pred.w = nums[1];
            pred.h = nums[2];
            has_size = true;
        }
    }
    if (!(has_frame && has_uv && has_depth && has_size)) return std::nullopt;
    if (!pred.is_valid()) return std::nullopt;
    return pred;
}

std::string encode_prediction(const MonoPrediction& pred) {
    auto num = [](double v) {
        std::string s = format_fixed(v, 3);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    return "frame:" + std::to_string(pred.frame_index) + "; uv:(" + num(pred.u) + "," +
           num(pred.v) + "); depth:" + num(pred.depth) + "; size:(" + num(pred.l) + "," +
           num(pred.w) + "," + num(pred.h) + ")";
}

Box3D lift_to_world(const MonoPrediction& pred, const FrameMeta& frame) {
    const double px = pred.u / 1000.0 * frame.camera.width;
    const double py = pred.v / 1000.0 * frame.camera.height;
    const Vec3 ray((px - frame.camera.cx) / frame.camera.fx,
                   (py - frame.camera.cy) / frame.camera.fy, 1.0);
    const Vec3 center_cam = ray * (pred.depth / ray.z());

    Box3D box;
    box.center = camera_to_world(frame.pose, center_cam);
    box.size = Vec3(pred.l, pred.w, pred.h);
    return box;
}

double iou3d(const Box3D& a, const Box3D& b) {
    const Vec3 lo = a.min().cwiseMax(b.min());
    const Vec3 hi = a.max().cwiseMin(b.max());
    const Vec3 extent = (hi - lo).cwiseMax(0.0);
    const double inter = extent.prod();
    const double uni = a.volume() + b.volume() - inter;
    if (uni <= 0) return 0;
    return inter / uni;
}

Box3D refine_with_proposals(const Box3D& box, const std::vector<Box3D>& proposals) {
    if (proposals.empty()) return box;

    double best_iou = -1;
    size_t best = 0;
    for (size_t i = 0; i < proposals.size(); ++i) {
        const double v = iou3d(box, proposals[i]);
        if (v > best_iou) {
            best_iou = v;
            best = i;
        }
    }
    if (best_iou > 0) return proposals[best];

    // Nothing overlaps: nearest center wins.
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < proposals.size(); ++i) {
        const double d = (proposals[i].center - box.center).norm();
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return proposals[best];
}

GroundingAccuracy grounding_accuracy(const std::vector<GroundingSample>& samples,
                                     const std::vector<double>& thresholds) {
    GroundingAccuracy acc;
    acc.n = static_cast<int>(samples.size());
    for (double t : thresholds) {
        acc.raw[t] = 0;
        acc.refined[t] = 0;
    }
    if (samples.empty()) return acc;

    for (const auto& s : samples) {
        const double raw_iou = iou3d(s.predicted, s.ground_truth);
        const double refined_iou =
            iou3d(refine_with_proposals(s.predicted, s.proposals), s.ground_truth);
        for (double t : thresholds) {
            if (raw_iou >= t) acc.raw[t] += 1;
            if (refined_iou >= t) acc.refined[t] += 1;
        }
    }
    for (double t : thresholds) {
        acc.raw[t] = 100.0 * acc.raw[t] / samples.size();
        acc.refined[t] = 100.0 * acc.refined[t] / samples.size();
    }
    return acc;
}

}  // namespace spargen
