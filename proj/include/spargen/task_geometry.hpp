#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spargen/geometry.hpp"
#include "spargen/rng.hpp"
#include "spargen/util.hpp"
#include "spargen/visibility.hpp"

namespace spargen {

enum class Side : int { None = 0, Left, Right, Above, Below, Near, Far, Front, Behind };

/// Per-axis relation of a subject relative to a reference (another object or
/// the observer). None encodes "indistinguishable".
struct SpatialRelation {
    Side left_right = Side::None;   // Left / Right
    Side above_below = Side::None;  // Above / Below
    Side near_far = Side::None;     // Near / Far (camera-distance; unused for OC)
    Side front_behind = Side::None; // Front / Behind

    bool operator==(const SpatialRelation&) const = default;

    bool all_none() const {
        return left_right == Side::None && above_below == Side::None &&
               near_far == Side::None && front_behind == Side::None;
    }
};

const char* side_word(Side s);

struct RelationConfig {
    double indist_threshold = 0.1;  // meters
    double round_step = 0.1;        // meters
    double lookat_max_tilt = 60.0;  // degrees

    bool is_valid() const {
        return indist_threshold > 0 && round_step > 0 && lookat_max_tilt > 0;
    }
};

/// Camera motion between two views, expressed in the first camera's axes.
/// Positive values: right / down / forward translation, downward / rightward
/// rotation. Negatives encode the opposite words.
struct MotionDescriptor {
    double move_right = 0;    // meters
    double move_down = 0;     // meters
    double move_forward = 0;  // meters
    double rotate_down = 0;   // degrees
    double rotate_right = 0;  // degrees
};

enum class Skip {
    Overlap,
    TooClose,
    Ambiguous,
    SingleView,
    DegenerateGaze,
    ExcessiveTilt,
    TooSmall,
    DegenerateGeometry,
    OutOfView,
    BehindCamera
};

const char* to_string(Skip s);

// --- depth / distance ---------------------------------------------------

/// Camera-frame depth of an object center, rounded to round_step.
double depth_of(const Vec3& center_cam, const RelationConfig& cfg = {});

/// |d_i - d_j|, unrounded. Pair-level skip rules live in the generator.
double relative_depth(double d_i, double d_j);

/// Euclidean object-object center distance rounded to round_step; skipped
/// when the oriented boxes interpenetrate or the centers nearly coincide.
Result<double, Skip> distance_oo(const Vec3& c_a_cam, const Vec3& c_b_cam,
                                 const OrientedBox& box_a, const OrientedBox& box_b,
                                 const RelationConfig& cfg = {});

/// Distance from the camera to an object center, rounded to round_step.
double distance_oc(const Vec3& c_cam, const RelationConfig& cfg = {});

enum class NearerPick { B, C };

/// Which of b/c is nearer to the anchor; Ambiguous when the two distances
/// differ by less than the indistinguishability threshold.
Result<NearerPick, Skip> nearer_of(const Vec3& anchor_cam, const Vec3& b_cam,
                                   const Vec3& c_cam, const RelationConfig& cfg = {});

// --- relations ----------------------------------------------------------

/// Relation of `a` to `b`, both in the same camera frame (x right, y down,
/// z forward). Front means closer to the camera; near/far compares distances
/// from the camera center.
SpatialRelation relation_between(const Vec3& a_cam, const Vec3& b_cam,
                                 const RelationConfig& cfg = {});

/// Relation of `a` to the observer at the frame origin. Front means in front
/// of the camera (z > 0); near/far is not defined for this variant.
SpatialRelation relation_to_observer(const Vec3& a_cam, const RelationConfig& cfg = {});

/// Camera pose placed at `c_a` facing `c_b`: forward f = normalize(c_b-c_a),
/// left v = normalize(up x f), up u = f x v, right r = -v; rotation columns
/// (r, u, f). Rejected when the gaze is parallel to `up` or the tilt angle
/// acos(u . up) exceeds cfg.lookat_max_tilt.
Result<RigidTransform, Skip> lookat_pose(const Vec3& c_a, const Vec3& c_b, const Vec3& up,
                                         const RelationConfig& cfg = {});

struct RelationChange {
    SpatialRelation before;
    SpatialRelation after;
};

/// Relations of target_c (vs target_d, or vs the observer when target_d is
/// empty) before and after the observer moves to c_a facing c_b. All centers
/// in world coordinates.
Result<RelationChange, Skip> imagined_relation(const Vec3& c_a, const Vec3& c_b,
                                               const Vec3& target_c,
                                               const std::optional<Vec3>& target_d,
                                               const RigidTransform& main_pose,
                                               const Vec3& up, const RelationConfig& cfg = {});

// --- size / volume ------------------------------------------------------

struct ObjectDims {
    double h_cm = 0;       // vertical extent of the world-frame corners
    double l_cm = 0;       // max pairwise xy corner distance
    double w_cm = 0;       // min pairwise xy distance over distinct corners
    double volume_cm3 = 0; // h * l * w
};

ObjectDims object_dims(const OrientedBox& box);

// --- cross-view ---------------------------------------------------------

struct PositionMatch {
    int frame_a = -1;
    int frame_b = -1;
    BBox2D bbox_a;
    BBox2D bbox_b;
};

/// Two distinct frames where the object is visible, chosen by `rng`, with
/// the object's bbox in each.
Result<PositionMatch, Skip> position_match_sample(const ObjectRecord& obj,
                                                  const SceneRecords& records, Rng& rng);

/// Relative camera motion A->B with translation in camera-A axes and the
/// rotation reduced to yaw/pitch of the transformed forward axis (roll
/// discarded). Translations rounded to 0.1 m, angles to 5 degrees.
MotionDescriptor view_change(const RigidTransform& t_a, const RigidTransform& t_b,
                             const RelationConfig& cfg = {});

struct CameraPoseProjection {
    double u = 0;      // normalized to [0, 1000]
    double v = 0;      // normalized to [0, 1000]
    double depth = 0;  // meters
};

/// Camera B's center projected into frame A, normalized to a 0-1000 grid.
Result<CameraPoseProjection, Skip> camera_pose_projection(const FrameMeta& frame_a,
                                                          const RigidTransform& t_b,
                                                          const RelationConfig& cfg = {});

// --- scene-level --------------------------------------------------------

struct AppearanceEntry {
    int object_id = -1;
    int first_frame = -1;
};

/// Objects ordered by first appearance frame, ties broken by object id.
/// Objects with no frames are excluded.
std::vector<AppearanceEntry> appearance_order(const std::vector<ObjectRecord>& objects);

/// Instance count per label, omitting labels with fewer than two instances.
std::vector<std::pair<std::string, int>> object_count(
    const std::vector<ObjectAnnotation>& objects);

struct RoomAreaParams {
    double voxel = 0.1;   // quantization cell, meters
    double alpha = 0.1;   // alpha-shape concavity parameter
    double a_th = 5.0;    // minimum valid area, m^2
};

/// Floor area estimate: voxel-downsample the mesh vertices, alpha-shape the
/// xy projection, sum the retained triangle areas.
Result<double, Skip> room_area(const TriangleMesh& mesh, const RoomAreaParams& params = {});

/// Voxel centers used by room_area (exposed for inspection/tests).
std::vector<Vec3> voxel_downsample(const std::vector<Vec3>& points, double voxel);

}  // namespace spargen
