#include "spargen/scene_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace spargen {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + path.string());
    return j;
}

Mat3 mat3_from_row_major(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 9)
        throw ValidationError(what + ": expected 9 row-major values");
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = arr[r * 3 + c].get<double>();
    return m;
}

Mat4 mat4_from_row_major(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 16)
        throw ValidationError(what + ": expected 16 row-major values");
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = arr[r * 4 + c].get<double>();
    return m;
}

Vec3 vec3_from_json(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() != 3)
        throw ValidationError(what + ": expected 3 values");
    return Vec3(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
}

json row_major(const Mat3& m) {
    json a = json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
    return a;
}

json row_major(const Mat4& m) {
    json a = json::array();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a.push_back(m(r, c));
    return a;
}

}  // namespace

TriangleMesh load_mesh_ply(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line) || line.rfind("ply", 0) != 0)
        throw ParseError(path.string() + ": missing ply magic");

    size_t n_vertices = 0, n_faces = 0;
    std::vector<std::string> vertex_props;
    std::string current_element;
    bool ascii = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            ascii = fmt == "ascii";
        } else if (tok == "element") {
            std::string name;
            size_t count;
            ls >> name >> count;
            current_element = name;
            if (name == "vertex") n_vertices = count;
            if (name == "face") n_faces = count;
        } else if (tok == "property" && current_element == "vertex") {
            std::string type, name;
            ls >> type;
            if (type == "list") {
                std::string t2;
                ls >> t2;  // index type
                ls >> t2;
                name = t2;
            } else {
                ls >> name;
            }
            vertex_props.push_back(name);
        } else if (tok == "end_header") {
            break;
        }
    }
    if (!ascii) throw ParseError(path.string() + ": only ASCII PLY is supported");

    int ix = -1, iy = -1, iz = -1, iinst = -1;
    for (size_t i = 0; i < vertex_props.size(); ++i) {
        if (vertex_props[i] == "x") ix = static_cast<int>(i);
        if (vertex_props[i] == "y") iy = static_cast<int>(i);
        if (vertex_props[i] == "z") iz = static_cast<int>(i);
        if (vertex_props[i] == "instance_id") iinst = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0)
        throw ParseError(path.string() + ": vertex element missing x/y/z");

    TriangleMesh mesh;
    mesh.vertices.reserve(n_vertices);
    mesh.vertex_instance.reserve(n_vertices);
    std::vector<double> vals(vertex_props.size());
    for (size_t i = 0; i < n_vertices; ++i) {
        if (!std::getline(in, line))
            throw ParseError(path.string() + ": truncated vertex list");
        std::istringstream ls(line);
        for (auto& v : vals)
            if (!(ls >> v)) throw ParseError(path.string() + ": bad vertex line");
        mesh.vertices.emplace_back(vals[ix], vals[iy], vals[iz]);
        mesh.vertex_instance.push_back(iinst >= 0 ? static_cast<int>(vals[iinst]) : -1);
    }

    mesh.faces.reserve(n_faces);
    for (size_t i = 0; i < n_faces; ++i) {
        if (!std::getline(in, line))
            throw ParseError(path.string() + ": truncated face list");
        std::istringstream ls(line);
        int n = 0;
        if (!(ls >> n)) throw ParseError(path.string() + ": bad face line");
        if (n != 3) throw ValidationError(path.string() + ": face " + std::to_string(i) +
                                          " is not a triangle");
        std::array<int, 3> f{};
        for (int k = 0; k < 3; ++k)
            if (!(ls >> f[k])) throw ParseError(path.string() + ": bad face line");
        mesh.faces.push_back(f);
    }
    return mesh;
}

void save_mesh_ply(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "property int instance_id\n";
    out << "element face " << mesh.faces.size() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        out << v.x() << " " << v.y() << " " << v.z() << " "
            << (i < mesh.vertex_instance.size() ? mesh.vertex_instance[i] : -1) << "\n";
    }
    for (const auto& f : mesh.faces)
        out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

void validate_scene(const SceneBundle& scene) {
    const size_t nv = scene.mesh.vertices.size();
    if (scene.mesh.vertex_instance.size() != nv)
        throw ValidationError(scene.scene_id + ": vertex_instance size mismatch");
    for (size_t i = 0; i < scene.mesh.faces.size(); ++i) {
        const auto& f = scene.mesh.faces[i];
        for (int k = 0; k < 3; ++k)
            if (f[k] < 0 || static_cast<size_t>(f[k]) >= nv)
                throw ValidationError(scene.scene_id + ": face " + std::to_string(i) +
                                      " references vertex " + std::to_string(f[k]));
        if (f[0] == f[1] && f[1] == f[2])
            throw ValidationError(scene.scene_id + ": face " + std::to_string(i) +
                                  " is degenerate");
    }

    std::set<int> frame_indices;
    int prev = std::numeric_limits<int>::min();
    for (const auto& fr : scene.frames) {
        const std::string who = scene.scene_id + ": frame " + std::to_string(fr.frame_index);
        if (!frame_indices.insert(fr.frame_index).second)
            throw ValidationError(who + " has a duplicate index");
        if (fr.frame_index < prev) throw ValidationError(who + " breaks frame ordering");
        prev = fr.frame_index;
        if (!fr.pose.is_valid()) throw ValidationError(who + " has an invalid pose");
        if (!fr.camera.is_valid()) throw ValidationError(who + " has invalid intrinsics");
    }

    std::set<int> object_ids;
    for (const auto& obj : scene.objects) {
        const std::string who = scene.scene_id + ": object " + std::to_string(obj.object_id);
        if (!object_ids.insert(obj.object_id).second)
            throw ValidationError(who + " has a duplicate id");
        if (obj.label.empty()) throw ValidationError(who + " has an empty label");
        if (!(obj.box.half_extents.array() > 0).all())
            throw ValidationError(who + " has non-positive half extents");
        Mat3 rtr = obj.box.rotation.transpose() * obj.box.rotation;
        if ((rtr - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-5)
            throw ValidationError(who + " has a non-orthonormal box rotation");
    }

    if (std::abs(scene.up_axis.norm() - 1.0) > 1e-6)
        throw ValidationError(scene.scene_id + ": up_axis is not a unit vector");
}

SceneBundle load_scene_manifest(const std::filesystem::path& scene_dir,
                                const SceneLoadOptions& options) {
    SceneBundle scene;
    json root = read_json_file(scene_dir / "scene.json");
    if (!root.contains("scene_id") || !root["scene_id"].is_string())
        throw ValidationError(scene_dir.string() + ": scene.json missing scene_id");
    scene.scene_id = root["scene_id"].get<std::string>();

    if (root.contains("up_axis"))
        scene.up_axis = vec3_from_json(root["up_axis"], "up_axis").normalized();

    if (!root.contains("frames") || !root["frames"].is_array())
        throw ValidationError(scene.scene_id + ": scene.json missing frames array");

    for (const auto& fj : root["frames"]) {
        FrameMeta fm;
        if (!fj.contains("index"))
            throw ValidationError(scene.scene_id + ": frame entry missing index");
        fm.frame_index = fj["index"].get<int>();
        const std::string who = scene.scene_id + ": frame " + std::to_string(fm.frame_index);
        if (!fj.contains("image")) throw ValidationError(who + " missing image");
        fm.image_path = fj["image"].get<std::string>();
        if (!fj.contains("pose")) throw ValidationError(who + " missing pose");
        Mat4 m = mat4_from_row_major(fj["pose"], who + " pose");
        RigidTransform pose = RigidTransform::from_matrix(m);
        if (options.pose_convention == PoseConvention::WorldToCamera) pose = pose.inverse();
        fm.pose = pose;
        if (!fj.contains("intrinsics")) throw ValidationError(who + " missing intrinsics");
        Mat3 k = mat3_from_row_major(fj["intrinsics"], who + " intrinsics");
        if (!fj.contains("width") || !fj.contains("height"))
            throw ValidationError(who + " missing width/height");
        fm.camera = CameraModel::from_intrinsics(k, fj["width"].get<int>(),
                                                 fj["height"].get<int>());
        scene.frames.push_back(std::move(fm));
    }
    std::sort(scene.frames.begin(), scene.frames.end(),
              [](const FrameMeta& a, const FrameMeta& b) {
                  return a.frame_index < b.frame_index;
              });

    scene.mesh = load_mesh_ply(scene_dir / "mesh.ply");

    json objects = read_json_file(scene_dir / "objects.json");
    if (!objects.is_array())
        throw ValidationError(scene.scene_id + ": objects.json must be an array");
    for (const auto& oj : objects) {
        ObjectAnnotation obj;
        if (!oj.contains("id"))
            throw ValidationError(scene.scene_id + ": object entry missing id");
        obj.object_id = oj["id"].get<int>();
        const std::string who = scene.scene_id + ": object " + std::to_string(obj.object_id);
        if (!oj.contains("label")) throw ValidationError(who + " missing label");
        obj.label = oj["label"].get<std::string>();
        if (!oj.contains("center") || !oj.contains("half_extents"))
            throw ValidationError(who + " missing box geometry");
        obj.box.center = vec3_from_json(oj["center"], who + " center");
        obj.box.half_extents = vec3_from_json(oj["half_extents"], who + " half_extents");
        obj.box.rotation = oj.contains("rotation")
                               ? mat3_from_row_major(oj["rotation"], who + " rotation")
                               : Mat3::Identity();
        scene.objects.push_back(std::move(obj));
    }

    // Attach mesh coverage.
    for (auto& obj : scene.objects) obj.vertex_ids.clear();
    for (size_t v = 0; v < scene.mesh.vertex_instance.size(); ++v) {
        int inst = scene.mesh.vertex_instance[v];
        if (inst < 0) continue;
        for (auto& obj : scene.objects)
            if (obj.object_id == inst) {
                obj.vertex_ids.push_back(static_cast<int>(v));
                break;
            }
    }

    validate_scene(scene);
    return scene;
}

void save_scene_manifest(const std::filesystem::path& scene_dir, const SceneBundle& scene) {
    std::filesystem::create_directories(scene_dir);

    json root;
    root["scene_id"] = scene.scene_id;
    root["up_axis"] = {scene.up_axis.x(), scene.up_axis.y(), scene.up_axis.z()};
    json frames = json::array();
    for (const auto& f : scene.frames) {
        json fj;
        fj["index"] = f.frame_index;
        fj["image"] = f.image_path;
        fj["pose"] = row_major(f.pose.matrix());
        fj["intrinsics"] = row_major(f.camera.intrinsics());
        fj["width"] = f.camera.width;
        fj["height"] = f.camera.height;
        frames.push_back(std::move(fj));
    }
    root["frames"] = std::move(frames);
    std::ofstream(scene_dir / "scene.json") << root.dump(2) << "\n";

    save_mesh_ply(scene_dir / "mesh.ply", scene.mesh);

    json objects = json::array();
    for (const auto& o : scene.objects) {
        json oj;
        oj["id"] = o.object_id;
        oj["label"] = o.label;
        oj["center"] = {o.box.center.x(), o.box.center.y(), o.box.center.z()};
        oj["half_extents"] = {o.box.half_extents.x(), o.box.half_extents.y(),
                              o.box.half_extents.z()};
        oj["rotation"] = row_major(o.box.rotation);
        objects.push_back(std::move(oj));
    }
    std::ofstream(scene_dir / "objects.json") << objects.dump(2) << "\n";
}

}  // namespace spargen
