#include "spargen/visibility.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

namespace spargen {

using nlohmann::json;

const char* to_string(ProjectReject r) {
    switch (r) {
        case ProjectReject::LowVisibility: return "LowVisibility";
        case ProjectReject::TooSmall: return "TooSmall";
        case ProjectReject::BadDepth: return "BadDepth";
    }
    return "?";
}

MeshAdjacency::MeshAdjacency(const TriangleMesh& mesh) {
    vertex_faces.resize(mesh.vertices.size());
    for (size_t f = 0; f < mesh.faces.size(); ++f)
        for (int v : mesh.faces[f]) vertex_faces[v].push_back(static_cast<int>(f));
}

std::unordered_set<int> visible_face_set(const RasterResult& raster) {
    std::unordered_set<int> faces;
    for (int f : raster.pix_to_face)
        if (f != kNoFace) faces.insert(f);
    return faces;
}

Result<ObjectInView, ProjectReject> project_object(const ObjectAnnotation& obj,
                                                   const FrameMeta& frame,
                                                   const TriangleMesh& mesh,
                                                   const MeshAdjacency& adjacency,
                                                   const std::unordered_set<int>& visible_faces,
                                                   const VisibilityConfig& cfg) {
    if (obj.vertex_ids.empty()) return ProjectReject::LowVisibility;

    // Depth range over all object vertices; a vertex at or behind the camera
    // plane invalidates the whole projection.
    double z_min = std::numeric_limits<double>::infinity();
    double z_max = -std::numeric_limits<double>::infinity();
    std::vector<Vec3> cam_pts(obj.vertex_ids.size());
    for (size_t i = 0; i < obj.vertex_ids.size(); ++i) {
        cam_pts[i] = world_to_camera(frame.pose, mesh.vertices[obj.vertex_ids[i]]);
        z_min = std::min(z_min, cam_pts[i].z());
        z_max = std::max(z_max, cam_pts[i].z());
    }
    if (z_min <= 0 || z_max >= cfg.z_max) return ProjectReject::BadDepth;

    size_t n_visible = 0;
    BBox2D bbox{std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < obj.vertex_ids.size(); ++i) {
        bool visible = false;
        for (int f : adjacency.vertex_faces[obj.vertex_ids[i]])
            if (visible_faces.count(f)) {
                visible = true;
                break;
            }
        if (!visible) continue;
        ++n_visible;
        const PixelPoint p = project_point(frame.camera, cam_pts[i]);
        bbox.x_min = std::min(bbox.x_min, p.u);
        bbox.y_min = std::min(bbox.y_min, p.v);
        bbox.x_max = std::max(bbox.x_max, p.u);
        bbox.y_max = std::max(bbox.y_max, p.v);
    }

    const double f_v = static_cast<double>(n_visible) / obj.vertex_ids.size();
    if (f_v <= cfg.tau_v) return ProjectReject::LowVisibility;

    bbox.x_min = std::clamp(bbox.x_min, 0.0, static_cast<double>(frame.camera.width));
    bbox.x_max = std::clamp(bbox.x_max, 0.0, static_cast<double>(frame.camera.width));
    bbox.y_min = std::clamp(bbox.y_min, 0.0, static_cast<double>(frame.camera.height));
    bbox.y_max = std::clamp(bbox.y_max, 0.0, static_cast<double>(frame.camera.height));
    if (bbox.area() < cfg.a_min) return ProjectReject::TooSmall;

    ObjectInView view;
    view.object_id = obj.object_id;
    view.bbox2d = bbox;
    view.visible_fraction = f_v;
    view.center_cam = world_to_camera(frame.pose, obj.box.center);
    if (view.center_cam.z() <= kMinProjectDepth) return ProjectReject::BadDepth;
    const PixelPoint c = project_point(frame.camera, view.center_cam);
    view.center_2d = Vec2(c.u, c.v);
    view.z_min = z_min;
    view.z_max = z_max;
    return view;
}

SceneRecords build_records(const SceneBundle& scene, const std::vector<size_t>& kept,
                           const VisibilityConfig& cfg, int workers) {
    SceneRecords out;
    out.scene_id = scene.scene_id;
    out.image_records.resize(kept.size());

    const MeshAdjacency adjacency(scene.mesh);

    // Frames are independent; results land in a fixed slot so the merge
    // order never depends on scheduling.
    auto process = [&](size_t slot) {
        const FrameMeta& frame = scene.frames[kept[slot]];
        ImageRecord rec;
        rec.frame_index = frame.frame_index;
        rec.camera = frame.camera;
        rec.pose = frame.pose;
        const RasterResult raster = rasterize(frame, scene.mesh, cfg.raster_scale);
        const std::unordered_set<int> faces = visible_face_set(raster);
        for (const auto& obj : scene.objects) {
            auto res = project_object(obj, frame, scene.mesh, adjacency, faces, cfg);
            if (res.ok()) rec.visible_objects.push_back(res.value());
        }
        out.image_records[slot] = std::move(rec);
    };

    if (workers <= 1 || kept.size() <= 1) {
        for (size_t i = 0; i < kept.size(); ++i) process(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const int n = std::min<int>(workers, static_cast<int>(kept.size()));
        for (int w = 0; w < n; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < kept.size(); i = next.fetch_add(1))
                    process(i);
            });
        for (auto& t : pool) t.join();
    }

    for (const auto& obj : scene.objects) {
        ObjectRecord rec;
        rec.object_id = obj.object_id;
        rec.label = obj.label;
        for (const auto& img : out.image_records)
            if (img.find(obj.object_id)) rec.frame_indices.push_back(img.frame_index);
        out.object_records.push_back(std::move(rec));
    }
    return out;
}

namespace {

json camera_to_json(const CameraModel& c) {
    return json{{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy},
                {"width", c.width}, {"height", c.height}};
}

CameraModel camera_from_json(const json& j) {
    CameraModel c;
    c.fx = j.at("fx").get<double>();
    c.fy = j.at("fy").get<double>();
    c.cx = j.at("cx").get<double>();
    c.cy = j.at("cy").get<double>();
    c.width = j.at("width").get<int>();
    c.height = j.at("height").get<int>();
    return c;
}

json pose_to_json(const RigidTransform& p) {
    json a = json::array();
    const Mat4 m = p.matrix();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a.push_back(m(r, c));
    return a;
}

RigidTransform pose_from_json(const json& a) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = a.at(r * 4 + c).get<double>();
    return RigidTransform::from_matrix(m);
}

}  // namespace

void save_records(const std::filesystem::path& path, const SceneRecords& records) {
    json root;
    root["scene_id"] = records.scene_id;
    json images = json::array();
    for (const auto& rec : records.image_records) {
        json rj;
        rj["frame_index"] = rec.frame_index;
        rj["camera"] = camera_to_json(rec.camera);
        rj["pose"] = pose_to_json(rec.pose);
        rj["resolution"] = {rec.camera.width, rec.camera.height};
        json objs = json::array();
        for (const auto& o : rec.visible_objects) {
            objs.push_back(json{
                {"object_id", o.object_id},
                {"bbox2d", {o.bbox2d.x_min, o.bbox2d.y_min, o.bbox2d.x_max, o.bbox2d.y_max}},
                {"visible_fraction", o.visible_fraction},
                {"center_2d", {o.center_2d.x(), o.center_2d.y()}},
                {"center_cam", {o.center_cam.x(), o.center_cam.y(), o.center_cam.z()}},
                {"z_range", {o.z_min, o.z_max}}});
        }
        rj["visible_objects"] = std::move(objs);
        images.push_back(std::move(rj));
    }
    root["image_records"] = std::move(images);

    json objects = json::array();
    for (const auto& rec : records.object_records)
        objects.push_back(json{{"object_id", rec.object_id},
                               {"label", rec.label},
                               {"frame_indices", rec.frame_indices}});
    root["object_records"] = std::move(objects);

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << root.dump(2) << "\n";
}

SceneRecords load_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json root = json::parse(in, nullptr, false);
    if (root.is_discarded()) throw ParseError("malformed JSON in " + path.string());

    SceneRecords records;
    records.scene_id = root.value("scene_id", "");
    for (const auto& rj : root.at("image_records")) {
        ImageRecord rec;
        rec.frame_index = rj.at("frame_index").get<int>();
        rec.camera = camera_from_json(rj.at("camera"));
        rec.pose = pose_from_json(rj.at("pose"));
        for (const auto& oj : rj.at("visible_objects")) {
            ObjectInView o;
            o.object_id = oj.at("object_id").get<int>();
            const auto& b = oj.at("bbox2d");
            o.bbox2d = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                        b.at(3).get<double>()};
            o.visible_fraction = oj.at("visible_fraction").get<double>();
            o.center_2d = Vec2(oj.at("center_2d").at(0).get<double>(),
                               oj.at("center_2d").at(1).get<double>());
            o.center_cam = Vec3(oj.at("center_cam").at(0).get<double>(),
                                oj.at("center_cam").at(1).get<double>(),
                                oj.at("center_cam").at(2).get<double>());
            o.z_min = oj.at("z_range").at(0).get<double>();
            o.z_max = oj.at("z_range").at(1).get<double>();
            rec.visible_objects.push_back(std::move(o));
        }
        records.image_records.push_back(std::move(rec));
    }
    for (const auto& oj : root.at("object_records")) {
        ObjectRecord rec;
        rec.object_id = oj.at("object_id").get<int>();
        rec.label = oj.at("label").get<std::string>();
        rec.frame_indices = oj.at("frame_indices").get<std::vector<int>>();
        records.object_records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace spargen
