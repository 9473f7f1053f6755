#pragma once

#include <filesystem>

#include "spargen/pipeline.hpp"
#include "spargen/scene_io.hpp"

namespace spargen::testfix {

/// Camera-to-world pose for a y-down pinhole camera at `eye` looking at
/// `target`. Independent of the production look-at construction.
RigidTransform look_at_camera(const Vec3& eye, const Vec3& target,
                              const Vec3& up = Vec3(0, 0, 1));

/// Append an axis-aligned-ish cuboid (12 triangles) tagged with an instance
/// id (-1 for structure).
void add_box_mesh(TriangleMesh& mesh, const OrientedBox& box, int instance_id);

/// Cuboid with each face split into cells x cells quads and edge/corner
/// vertices shared between faces, so visible-vertex fractions have fine
/// granularity like real scan meshes.
void add_subdivided_box_mesh(TriangleMesh& mesh, const OrientedBox& box, int instance_id,
                             int cells = 2);

/// Append a dense triangulated floor rectangle [0,w] x [0,h] at z=0.
void add_floor_grid(TriangleMesh& mesh, double w, double h, double step);

/// Two bundled synthetic rooms used across the test suites. Deterministic.
SceneBundle make_room_scene_a();
SceneBundle make_room_scene_b();

/// Write a scene directory (scene.json / mesh.ply / objects.json) plus small
/// synthetic PPM frames.
void write_scene_dir(const std::filesystem::path& dir, const SceneBundle& scene);

/// A fresh temp directory under the system temp root.
std::filesystem::path make_temp_dir(const std::string& tag);

/// Pipeline configuration tuned to the bundled fixtures (64x48 frames need a
/// small projected-area threshold).
PipelineConfig fixture_pipeline_config(uint64_t seed = 7);

/// Visibility settings matching fixture_pipeline_config.
VisibilityConfig fixture_visibility();

/// Write both fixture scenes under `root` and return their directories.
std::vector<std::filesystem::path> write_fixture_scenes(const std::filesystem::path& root);

}  // namespace spargen::testfix
