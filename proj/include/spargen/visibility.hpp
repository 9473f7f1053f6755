#pragma once

#include <filesystem>
#include <unordered_set>
#include <vector>

#include "spargen/raster.hpp"

namespace spargen {

struct VisibilityConfig {
    double tau_v = 0.3;        // min visible-vertex fraction
    double a_min = 900.0;      // min projected bbox area, px^2
    double raster_scale = 0.5; // rasterization resolution factor
    double z_max = 20.0;       // depth validity cap, meters

    bool is_valid() const {
        return tau_v > 0 && tau_v <= 1 && a_min > 0 && raster_scale > 0 &&
               raster_scale <= 1 && z_max > 0;
    }
};

enum class ProjectReject { LowVisibility, TooSmall, BadDepth };

const char* to_string(ProjectReject r);

struct BBox2D {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    double area() const { return std::max(0.0, x_max - x_min) * std::max(0.0, y_max - y_min); }
    double center_u() const { return (x_min + x_max) / 2; }
    double center_v() const { return (y_min + y_max) / 2; }

    bool overlaps(const BBox2D& o) const {
        return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max && o.y_min < y_max;
    }
};

struct ObjectInView {
    int object_id = -1;
    BBox2D bbox2d;
    double visible_fraction = 0;    // f_v
    Vec2 center_2d = Vec2::Zero();  // projected box center, full-res pixels
    Vec3 center_cam = Vec3::Zero(); // box center in camera frame
    double z_min = 0, z_max = 0;    // camera-frame depth range of object vertices
};

struct ImageRecord {
    int frame_index = -1;
    CameraModel camera;
    RigidTransform pose;
    std::vector<ObjectInView> visible_objects;

    const ObjectInView* find(int object_id) const {
        for (const auto& o : visible_objects)
            if (o.object_id == object_id) return &o;
        return nullptr;
    }
};

struct ObjectRecord {
    int object_id = -1;
    std::string label;
    std::vector<int> frame_indices;  // sorted ascending, frames where visible
};

struct SceneRecords {
    std::string scene_id;
    std::vector<ImageRecord> image_records;   // one per kept frame, frame order
    std::vector<ObjectRecord> object_records; // one per scene object

    const ImageRecord* image(int frame_index) const {
        for (const auto& r : image_records)
            if (r.frame_index == frame_index) return &r;
        return nullptr;
    }
    const ObjectRecord* object(int object_id) const {
        for (const auto& r : object_records)
            if (r.object_id == object_id) return &r;
        return nullptr;
    }
};

/// Vertex -> incident faces, built once per mesh.
struct MeshAdjacency {
    std::vector<std::vector<int>> vertex_faces;

    explicit MeshAdjacency(const TriangleMesh& mesh);
};

/// Faces that won at least one pixel in a raster result.
std::unordered_set<int> visible_face_set(const RasterResult& raster);

/// Project one annotated object into a frame and apply the validity
/// constraints. A vertex is visible iff one of its incident faces appears in
/// pix_to_face; bbox and centers are computed at full image resolution.
Result<ObjectInView, ProjectReject> project_object(const ObjectAnnotation& obj,
                                                   const FrameMeta& frame,
                                                   const TriangleMesh& mesh,
                                                   const MeshAdjacency& adjacency,
                                                   const std::unordered_set<int>& visible_faces,
                                                   const VisibilityConfig& cfg);

/// Build the cross-view image/object records for the kept frames. `kept`
/// holds positions into scene.frames (the output of subsample_frames).
SceneRecords build_records(const SceneBundle& scene, const std::vector<size_t>& kept,
                           const VisibilityConfig& cfg, int workers = 1);

void save_records(const std::filesystem::path& path, const SceneRecords& records);
SceneRecords load_records(const std::filesystem::path& path);

}  // namespace spargen
