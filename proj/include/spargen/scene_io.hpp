#pragma once

#include <filesystem>
#include <string>

#include "spargen/geometry.hpp"

namespace spargen {

enum class PoseConvention { CameraToWorld, WorldToCamera };

struct SceneLoadOptions {
    // Source datasets disagree on the stored direction; ingestion converts
    // everything to camera-to-world.
    PoseConvention pose_convention = PoseConvention::CameraToWorld;
};

/// Read an ASCII PLY with per-vertex x/y/z and int `instance_id`, triangle
/// faces. Throws ParseError / ValidationError.
TriangleMesh load_mesh_ply(const std::filesystem::path& path);

void save_mesh_ply(const std::filesystem::path& path, const TriangleMesh& mesh);

/// Load a scene directory (scene.json, mesh.ply, objects.json) into a fully
/// validated SceneBundle. Object vertex_ids are derived from the mesh's
/// per-vertex instance ids.
SceneBundle load_scene_manifest(const std::filesystem::path& scene_dir,
                                const SceneLoadOptions& options = {});

void save_scene_manifest(const std::filesystem::path& scene_dir, const SceneBundle& scene);

/// Invariant checks shared by the loader and by programmatic construction.
/// Throws ValidationError naming the offending frame or object.
void validate_scene(const SceneBundle& scene);

}  // namespace spargen
