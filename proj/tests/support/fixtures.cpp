#include "fixtures.hpp"

#include <atomic>
#include <unistd.h>

#include "spargen/image.hpp"

namespace spargen::testfix {

RigidTransform look_at_camera(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 f = (target - eye).normalized();
    const Vec3 r = f.cross(up).normalized();
    const Vec3 d = f.cross(r).normalized();  // camera +y (down)
    RigidTransform pose;
    pose.rotation.col(0) = r;
    pose.rotation.col(1) = d;
    pose.rotation.col(2) = f;
    pose.translation = eye;
    return pose;
}

void add_box_mesh(TriangleMesh& mesh, const OrientedBox& box, int instance_id) {
    const int base = static_cast<int>(mesh.vertices.size());
    for (const Vec3& c : box.corners()) {
        mesh.vertices.push_back(c);
        mesh.vertex_instance.push_back(instance_id);
    }
    // corners() enumerates sign combinations (x, y, z) in -,+ order:
    // 0:---  1:--+  2:-+-  3:-++  4:+--  5:+-+  6:++-  7:+++
    static const int quads[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                                    {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
    for (const auto& q : quads) {
        mesh.faces.push_back({base + q[0], base + q[1], base + q[2]});
        mesh.faces.push_back({base + q[0], base + q[2], base + q[3]});
    }
}

void add_floor_grid(TriangleMesh& mesh, double w, double h, double step) {
    const int base = static_cast<int>(mesh.vertices.size());
    const int nx = static_cast<int>(std::lround(w / step));
    const int ny = static_cast<int>(std::lround(h / step));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            mesh.vertices.emplace_back(i * step, j * step, 0.0);
            mesh.vertex_instance.push_back(-1);
        }
    auto at = [&](int i, int j) { return base + j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            mesh.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            mesh.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
}

void add_subdivided_box_mesh(TriangleMesh& mesh, const OrientedBox& box, int instance_id,
                             int cells) {
    // Local grid coordinates in [-cells, cells], deduplicated across faces.
    // Interior face vertices get a deterministic millimeter-scale bump along
    // the face normal so faces are not perfectly coplanar, like scan meshes.
    std::map<std::array<int, 3>, int> index;
    auto vertex = [&](int gx, int gy, int gz) {
        const auto key = std::array<int, 3>{gx, gy, gz};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        Vec3 local(box.half_extents.x() * gx / cells, box.half_extents.y() * gy / cells,
                   box.half_extents.z() * gz / cells);
        int face_axis = -1, on_edge = 0;
        for (int a = 0; a < 3; ++a)
            if (std::abs(key[a]) == cells) {
                face_axis = a;
                ++on_edge;
            }
        if (on_edge == 1) {
            const uint64_t h = (gx + 7) * 73856093u ^ (gy + 7) * 19349663u ^
                               (gz + 7) * 83492791u ^ (instance_id + 1) * 2654435761u;
            const double bump = ((h % 21) / 20.0 - 0.5) * 0.016;  // +-8 mm
            local[face_axis] += (key[face_axis] > 0 ? 1 : -1) * bump;
        }
        const int id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(box.rotation * local + box.center);
        mesh.vertex_instance.push_back(instance_id);
        index.emplace(key, id);
        return id;
    };

    // axis = fixed dimension, sign = which side; (u, v) sweep the face.
    for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {-1, 1}) {
            for (int u = -cells; u < cells; ++u) {
                for (int v = -cells; v < cells; ++v) {
                    auto grid = [&](int uu, int vv) {
                        int g[3];
                        g[axis] = sign * cells;
                        g[(axis + 1) % 3] = uu;
                        g[(axis + 2) % 3] = vv;
                        return vertex(g[0], g[1], g[2]);
                    };
                    const int a = grid(u, v), b = grid(u + 1, v);
                    const int c = grid(u + 1, v + 1), d = grid(u, v + 1);
                    mesh.faces.push_back({a, b, c});
                    mesh.faces.push_back({a, c, d});
                }
            }
        }
    }
}

namespace {

OrientedBox aab(double cx, double cy, double cz, double hx, double hy, double hz) {
    OrientedBox box;
    box.center = Vec3(cx, cy, cz);
    box.half_extents = Vec3(hx, hy, hz);
    return box;
}

void add_walls(TriangleMesh& mesh, double w, double h, double height) {
    const double t = 0.05;
    add_box_mesh(mesh, aab(w / 2, -t, height / 2, w / 2, t, height / 2), -1);
    add_box_mesh(mesh, aab(w / 2, h + t, height / 2, w / 2, t, height / 2), -1);
    add_box_mesh(mesh, aab(-t, h / 2, height / 2, t, h / 2, height / 2), -1);
    add_box_mesh(mesh, aab(w + t, h / 2, height / 2, t, h / 2, height / 2), -1);
}

void add_object(SceneBundle& scene, int id, const std::string& label, const OrientedBox& box) {
    ObjectAnnotation obj;
    obj.object_id = id;
    obj.label = label;
    obj.box = box;
    add_subdivided_box_mesh(scene.mesh, box, id);
    scene.objects.push_back(obj);
}

void add_ring_frames(SceneBundle& scene, const Vec3& center, double rx, double ry,
                     double eye_z, const Vec3& target, int count) {
    CameraModel cam;
    cam.fx = cam.fy = 50;
    cam.cx = 32;
    cam.cy = 24;
    cam.width = 64;
    cam.height = 48;
    for (int k = 0; k < count; ++k) {
        const double angle = 2.0 * EIGEN_PI * k / count;
        const Vec3 eye(center.x() + rx * std::cos(angle), center.y() + ry * std::sin(angle),
                       eye_z + 0.25 * std::sin(3.0 * angle));
        FrameMeta frame;
        frame.frame_index = k;
        char name[32];
        std::snprintf(name, sizeof(name), "frames/img_%03d.ppm", k);
        frame.image_path = name;
        frame.pose = look_at_camera(eye, target);
        frame.camera = cam;
        scene.frames.push_back(frame);
    }
}

void attach_vertex_ids(SceneBundle& scene) {
    for (auto& obj : scene.objects) obj.vertex_ids.clear();
    for (size_t v = 0; v < scene.mesh.vertex_instance.size(); ++v) {
        const int inst = scene.mesh.vertex_instance[v];
        if (inst < 0) continue;
        for (auto& obj : scene.objects)
            if (obj.object_id == inst) obj.vertex_ids.push_back(static_cast<int>(v));
    }
}

}  // namespace

SceneBundle make_room_scene_a() {
    SceneBundle scene;
    scene.scene_id = "fixture_a";
    add_floor_grid(scene.mesh, 4.0, 3.0, 0.1);
    add_walls(scene.mesh, 4.0, 3.0, 2.5);

    add_object(scene, 1, "table", aab(1.0, 1.0, 0.35, 0.40, 0.30, 0.35));
    add_object(scene, 2, "chair", aab(2.0, 0.8, 0.45, 0.22, 0.22, 0.45));
    add_object(scene, 3, "chair", aab(2.6, 2.2, 0.45, 0.22, 0.22, 0.45));
    add_object(scene, 4, "lamp", aab(3.3, 0.6, 0.75, 0.22, 0.22, 0.75));
    add_object(scene, 5, "sofa", aab(0.8, 2.4, 0.40, 0.80, 0.35, 0.40));
    add_object(scene, 6, "trash can", aab(3.5, 2.6, 0.22, 0.19, 0.19, 0.22));
    add_object(scene, 7, "storage box", aab(2.9, 0.4, 0.25, 0.25, 0.25, 0.25));
    // Annotated but absent from the mesh: visible nowhere, still counted.
    {
        ObjectAnnotation ghost;
        ghost.object_id = 99;
        ghost.label = "plant";
        ghost.box = aab(0.3, 0.3, 0.25, 0.12, 0.12, 0.25);
        scene.objects.push_back(ghost);
    }

    add_ring_frames(scene, Vec3(2.0, 1.5, 0), 1.5, 1.05, 1.6, Vec3(2.0, 1.5, 1.0), 12);
    attach_vertex_ids(scene);
    return scene;
}

SceneBundle make_room_scene_b() {
    SceneBundle scene;
    scene.scene_id = "fixture_b";
    add_floor_grid(scene.mesh, 5.0, 4.0, 0.1);
    add_walls(scene.mesh, 5.0, 4.0, 2.6);

    add_object(scene, 1, "bed", aab(1.1, 3.0, 0.30, 1.00, 0.80, 0.30));
    add_object(scene, 2, "heater", aab(4.6, 2.0, 0.40, 0.12, 0.50, 0.40));
    add_object(scene, 3, "chair", aab(3.4, 1.0, 0.45, 0.22, 0.22, 0.45));
    add_object(scene, 4, "desk", aab(2.2, 0.6, 0.38, 0.60, 0.35, 0.38));
    add_object(scene, 5, "monitor", aab(2.2, 0.45, 0.95, 0.28, 0.06, 0.20));
    add_object(scene, 6, "wardrobe", aab(4.4, 3.5, 1.05, 0.45, 0.30, 1.05));
    add_object(scene, 7, "book", aab(2.0, 0.62, 0.79, 0.10, 0.07, 0.02));
    add_object(scene, 8, "book", aab(2.45, 0.60, 0.79, 0.10, 0.07, 0.02));
    add_object(scene, 9, "door mat", aab(0.6, 0.4, 0.01, 0.35, 0.25, 0.01));

    add_ring_frames(scene, Vec3(2.5, 2.0, 0), 1.8, 1.4, 1.7, Vec3(2.5, 2.0, 1.0), 12);
    attach_vertex_ids(scene);
    return scene;
}

void write_scene_dir(const std::filesystem::path& dir, const SceneBundle& scene) {
    save_scene_manifest(dir, scene);
    std::filesystem::create_directories(dir / "frames");
    for (const auto& frame : scene.frames) {
        ImageRgb img(frame.camera.width, frame.camera.height);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                uint8_t* p = img.pixel(x, y);
                p[0] = static_cast<uint8_t>(40 + (x * 180) / img.width);
                p[1] = static_cast<uint8_t>(40 + (y * 180) / img.height);
                p[2] = static_cast<uint8_t>(60 + (frame.frame_index * 13) % 120);
            }
        save_ppm(dir / frame.image_path, img);
    }
}

std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("spargen_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) +
                      "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

VisibilityConfig fixture_visibility() {
    VisibilityConfig vis;
    vis.tau_v = 0.25;
    vis.a_min = 30.0;  // px^2, scaled for the 64x48 fixture frames
    vis.raster_scale = 1.0;
    vis.z_max = 20.0;
    return vis;
}

PipelineConfig fixture_pipeline_config(uint64_t seed) {
    PipelineConfig cfg = PipelineConfig::with_profile("scannet");
    cfg.visibility = fixture_visibility();
    cfg.seed = seed;
    cfg.render_images = true;
    return cfg;
}

std::vector<std::filesystem::path> write_fixture_scenes(const std::filesystem::path& root) {
    const auto dir_a = root / "fixture_a";
    const auto dir_b = root / "fixture_b";
    write_scene_dir(dir_a, make_room_scene_a());
    write_scene_dir(dir_b, make_room_scene_b());
    return {dir_a, dir_b};
}

}  // namespace spargen::testfix
