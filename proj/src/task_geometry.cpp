#include "spargen/task_geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spargen/hull.hpp"

namespace spargen {

const char* side_word(Side s) {
    switch (s) {
        case Side::None: return "";
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Above: return "above";
        case Side::Below: return "below";
        case Side::Near: return "near";
        case Side::Far: return "far";
        case Side::Front: return "front";
        case Side::Behind: return "behind";
    }
    return "";
}

const char* to_string(Skip s) {
    switch (s) {
        case Skip::Overlap: return "Overlap";
        case Skip::TooClose: return "TooClose";
        case Skip::Ambiguous: return "Ambiguous";
        case Skip::SingleView: return "SingleView";
        case Skip::DegenerateGaze: return "DegenerateGaze";
        case Skip::ExcessiveTilt: return "ExcessiveTilt";
        case Skip::TooSmall: return "TooSmall";
        case Skip::DegenerateGeometry: return "DegenerateGeometry";
        case Skip::OutOfView: return "OutOfView";
        case Skip::BehindCamera: return "BehindCamera";
    }
    return "?";
}

double depth_of(const Vec3& center_cam, const RelationConfig& cfg) {
    if (center_cam.z() <= 0)
        throw BehindCamera("depth_of: z = " + std::to_string(center_cam.z()));
    return round_to_step(center_cam.z(), cfg.round_step);
}

double relative_depth(double d_i, double d_j) { return std::abs(d_i - d_j); }

Result<double, Skip> distance_oo(const Vec3& c_a_cam, const Vec3& c_b_cam,
                                 const OrientedBox& box_a, const OrientedBox& box_b,
                                 const RelationConfig& cfg) {
    if (obb_overlap(box_a, box_b)) return Skip::Overlap;
    const double d = (c_a_cam - c_b_cam).norm();
    if (d < cfg.indist_threshold) return Skip::TooClose;
    return round_to_step(d, cfg.round_step);
}

double distance_oc(const Vec3& c_cam, const RelationConfig& cfg) {
    return round_to_step(c_cam.norm(), cfg.round_step);
}

Result<NearerPick, Skip> nearer_of(const Vec3& anchor_cam, const Vec3& b_cam,
                                   const Vec3& c_cam, const RelationConfig& cfg) {
    const double d_b = (anchor_cam - b_cam).norm();
    const double d_c = (anchor_cam - c_cam).norm();
    if (std::abs(d_b - d_c) < cfg.indist_threshold) return Skip::Ambiguous;
    return d_b < d_c ? NearerPick::B : NearerPick::C;
}

namespace {

Side axis_side(double delta, double thr, Side neg, Side pos) {
    if (delta < -thr) return neg;
    if (delta > thr) return pos;
    return Side::None;
}

}  // namespace

SpatialRelation relation_between(const Vec3& a_cam, const Vec3& b_cam,
                                 const RelationConfig& cfg) {
    const double thr = cfg.indist_threshold;
    SpatialRelation rel;
    rel.left_right = axis_side(a_cam.x() - b_cam.x(), thr, Side::Left, Side::Right);
    rel.above_below = axis_side(a_cam.y() - b_cam.y(), thr, Side::Above, Side::Below);
    // Smaller camera-frame z = closer to the viewer = in front.
    rel.front_behind = axis_side(a_cam.z() - b_cam.z(), thr, Side::Front, Side::Behind);
    rel.near_far = axis_side(a_cam.norm() - b_cam.norm(), thr, Side::Near, Side::Far);
    return rel;
}

SpatialRelation relation_to_observer(const Vec3& a_cam, const RelationConfig& cfg) {
    const double thr = cfg.indist_threshold;
    SpatialRelation rel;
    rel.left_right = axis_side(a_cam.x(), thr, Side::Left, Side::Right);
    rel.above_below = axis_side(a_cam.y(), thr, Side::Above, Side::Below);
    rel.front_behind = axis_side(a_cam.z(), thr, Side::Behind, Side::Front);
    rel.near_far = Side::None;
    return rel;
}

Result<RigidTransform, Skip> lookat_pose(const Vec3& c_a, const Vec3& c_b, const Vec3& up,
                                         const RelationConfig& cfg) {
    const Vec3 gaze = c_b - c_a;
    if (gaze.norm() < 1e-12) return Skip::DegenerateGaze;
    const Vec3 f = gaze.normalized();
    const Vec3 up_cross_f = up.cross(f);
    if (up_cross_f.norm() < 1e-6) return Skip::DegenerateGaze;
    const Vec3 v = up_cross_f.normalized();  // left
    const Vec3 u = f.cross(v);               // up
    const Vec3 r = -v;                       // right

    const double tilt = std::acos(std::clamp(u.dot(up), -1.0, 1.0)) * kDegPerRad;
    if (tilt > cfg.lookat_max_tilt) return Skip::ExcessiveTilt;

    // Stacking (r, u, f) verbatim would be left-handed; the y-down camera
    // frame stores the down vector in the second column, which restores
    // det +1 while keeping the forward column.
    RigidTransform pose;
    pose.rotation.col(0) = r;
    pose.rotation.col(1) = -u;
    pose.rotation.col(2) = f;
    pose.translation = c_a;
    return pose;
}

Result<RelationChange, Skip> imagined_relation(const Vec3& c_a, const Vec3& c_b,
                                               const Vec3& target_c,
                                               const std::optional<Vec3>& target_d,
                                               const RigidTransform& main_pose,
                                               const Vec3& up, const RelationConfig& cfg) {
    auto moved = lookat_pose(c_a, c_b, up, cfg);
    if (!moved.ok()) return moved.reason();

    auto relation_in = [&](const RigidTransform& pose) {
        const Vec3 c = world_to_camera(pose, target_c);
        if (target_d) return relation_between(c, world_to_camera(pose, *target_d), cfg);
        return relation_to_observer(c, cfg);
    };

    RelationChange change;
    change.before = relation_in(main_pose);
    change.after = relation_in(moved.value());
    return change;
}

ObjectDims object_dims(const OrientedBox& box) {
    const auto corners = box.corners();

    double z_lo = corners[0].z(), z_hi = corners[0].z();
    for (const Vec3& c : corners) {
        z_lo = std::min(z_lo, c.z());
        z_hi = std::max(z_hi, c.z());
    }

    // Distinct xy projections of the corners.
    std::vector<Vec2> xy;
    for (const Vec3& c : corners) {
        const Vec2 p(c.x(), c.y());
        bool dup = false;
        for (const Vec2& q : xy)
            if ((p - q).norm() <= 1e-6) {
                dup = true;
                break;
            }
        if (!dup) xy.push_back(p);
    }

    double l = 0, w = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < xy.size(); ++i)
        for (size_t j = i + 1; j < xy.size(); ++j) {
            const double d = (xy[i] - xy[j]).norm();
            l = std::max(l, d);
            w = std::min(w, d);
        }
    if (!std::isfinite(w)) w = 0;  // a single distinct footprint point

    ObjectDims dims;
    dims.h_cm = (z_hi - z_lo) * 100.0;
    dims.l_cm = l * 100.0;
    dims.w_cm = w * 100.0;
    dims.volume_cm3 = dims.h_cm * dims.l_cm * dims.w_cm;
    return dims;
}

Result<PositionMatch, Skip> position_match_sample(const ObjectRecord& obj,
                                                  const SceneRecords& records, Rng& rng) {
    if (obj.frame_indices.size() < 2) return Skip::SingleView;
    const auto picks = rng.sample_indices(obj.frame_indices.size(), 2);

    PositionMatch match;
    match.frame_a = obj.frame_indices[picks[0]];
    match.frame_b = obj.frame_indices[picks[1]];
    const ImageRecord* rec_a = records.image(match.frame_a);
    const ImageRecord* rec_b = records.image(match.frame_b);
    if (!rec_a || !rec_b) return Skip::SingleView;
    const ObjectInView* in_a = rec_a->find(obj.object_id);
    const ObjectInView* in_b = rec_b->find(obj.object_id);
    if (!in_a || !in_b) return Skip::SingleView;
    match.bbox_a = in_a->bbox2d;
    match.bbox_b = in_b->bbox2d;
    return match;
}

MotionDescriptor view_change(const RigidTransform& t_a, const RigidTransform& t_b,
                             const RelationConfig& cfg) {
    const RigidTransform rel = t_a.inverse().compose(t_b);

    MotionDescriptor m;
    m.move_right = round_to_step(rel.translation.x(), cfg.round_step);
    m.move_down = round_to_step(rel.translation.y(), cfg.round_step);
    m.move_forward = round_to_step(rel.translation.z(), cfg.round_step);

    // Where camera B's forward axis points, seen from camera A.
    const Vec3 f = rel.rotation.col(2);
    const double yaw = std::atan2(f.x(), f.z()) * kDegPerRad;
    const double pitch = std::atan2(f.y(), std::hypot(f.x(), f.z())) * kDegPerRad;
    m.rotate_right = round_to_step(yaw, 5.0);
    m.rotate_down = round_to_step(pitch, 5.0);
    return m;
}

Result<CameraPoseProjection, Skip> camera_pose_projection(const FrameMeta& frame_a,
                                                          const RigidTransform& t_b,
                                                          const RelationConfig& cfg) {
    (void)cfg;
    const Vec3 center_b_in_a = world_to_camera(frame_a.pose, t_b.translation);
    if (center_b_in_a.z() <= 0.1) return Skip::BehindCamera;
    const PixelPoint p = project_point(frame_a.camera, center_b_in_a);

    CameraPoseProjection out;
    out.u = p.u * 1000.0 / frame_a.camera.width;
    out.v = p.v * 1000.0 / frame_a.camera.height;
    out.depth = p.z;
    if (out.u < 0 || out.u > 1000 || out.v < 0 || out.v > 1000) return Skip::OutOfView;
    return out;
}

std::vector<AppearanceEntry> appearance_order(const std::vector<ObjectRecord>& objects) {
    std::vector<AppearanceEntry> entries;
    for (const auto& obj : objects) {
        if (obj.frame_indices.empty()) continue;
        entries.push_back({obj.object_id,
                           *std::min_element(obj.frame_indices.begin(),
                                             obj.frame_indices.end())});
    }
    std::sort(entries.begin(), entries.end(),
              [](const AppearanceEntry& a, const AppearanceEntry& b) {
                  if (a.first_frame != b.first_frame) return a.first_frame < b.first_frame;
                  return a.object_id < b.object_id;
              });
    return entries;
}

std::vector<std::pair<std::string, int>> object_count(
    const std::vector<ObjectAnnotation>& objects) {
    std::map<std::string, int> counts;
    for (const auto& obj : objects) counts[obj.label]++;
    std::vector<std::pair<std::string, int>> out;
    for (const auto& [label, n] : counts)
        if (n >= 2) out.emplace_back(label, n);
    return out;
}

std::vector<Vec3> voxel_downsample(const std::vector<Vec3>& points, double voxel) {
    std::set<std::array<long long, 3>> cells;
    for (const Vec3& p : points)
        cells.insert({static_cast<long long>(std::floor(p.x() / voxel)),
                      static_cast<long long>(std::floor(p.y() / voxel)),
                      static_cast<long long>(std::floor(p.z() / voxel))});
    std::vector<Vec3> centers;
    centers.reserve(cells.size());
    for (const auto& c : cells)
        centers.emplace_back((c[0] + 0.5) * voxel, (c[1] + 0.5) * voxel, (c[2] + 0.5) * voxel);
    return centers;
}

Result<double, Skip> room_area(const TriangleMesh& mesh, const RoomAreaParams& params) {
    if (mesh.vertices.empty()) return Skip::DegenerateGeometry;

    std::vector<Vec3> pts = voxel_downsample(mesh.vertices, params.voxel);
    if (pts.size() < 100) pts = mesh.vertices;

    std::vector<Vec2> xy;
    xy.reserve(pts.size());
    for (const Vec3& p : pts) xy.emplace_back(p.x(), p.y());

    const double area = alpha_shape_area(xy, params.alpha);
    if (area < 0) return Skip::DegenerateGeometry;
    if (area < params.a_th) return Skip::TooSmall;
    return area;
}

}  // namespace spargen
