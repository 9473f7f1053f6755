#include "spargen/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

namespace spargen {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ValidationError("config: unknown key \"" + key + "\" in " + where);
    }
}

}  // namespace

PipelineConfig PipelineConfig::with_profile(const std::string& name) {
    PipelineConfig cfg;
    cfg.profile = name;
    if (name == "scannet") {
        cfg.subsample = scannet_subsample();
    } else if (name == "scannetpp") {
        cfg.subsample = scannetpp_subsample();
    } else if (name == "structured3d") {
        // Sparse captures; keyframe filtering is bypassed.
        cfg.subsample_enabled = false;
    } else {
        throw ValidationError("config: unknown profile \"" + name + "\"");
    }
    return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + path.string());

    reject_unknown_keys(j,
                        {"profile", "pose_convention", "up_axis", "subsample", "visibility",
                         "relation", "room", "tasks", "seed", "workers", "templates",
                         "render_images"},
                        "top level");

    PipelineConfig cfg = with_profile(j.value("profile", "scannet"));

    if (j.contains("pose_convention")) {
        const std::string conv = j["pose_convention"].get<std::string>();
        if (conv == "camera_to_world")
            cfg.pose_convention = PoseConvention::CameraToWorld;
        else if (conv == "world_to_camera")
            cfg.pose_convention = PoseConvention::WorldToCamera;
        else
            throw ValidationError("config: unknown pose_convention \"" + conv + "\"");
    }
    if (j.contains("up_axis")) {
        const auto a = j["up_axis"];
        if (!a.is_array() || a.size() != 3)
            throw ValidationError("config: up_axis must be 3 values");
        cfg.up_axis = Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
        if (cfg.up_axis.norm() < 1e-9)
            throw ValidationError("config: up_axis must be nonzero");
        cfg.up_axis.normalize();
    }
    if (j.contains("subsample")) {
        const auto& s = j["subsample"];
        reject_unknown_keys(s, {"enabled", "d_th", "theta_th"}, "subsample");
        cfg.subsample_enabled = s.value("enabled", cfg.subsample_enabled);
        cfg.subsample.d_th = s.value("d_th", cfg.subsample.d_th);
        cfg.subsample.theta_th = s.value("theta_th", cfg.subsample.theta_th);
        if (!cfg.subsample.is_valid())
            throw ValidationError("config: invalid subsample thresholds");
    }
    if (j.contains("visibility")) {
        const auto& v = j["visibility"];
        reject_unknown_keys(v, {"tau_v", "a_min", "raster_scale", "z_max"}, "visibility");
        cfg.visibility.tau_v = v.value("tau_v", cfg.visibility.tau_v);
        cfg.visibility.a_min = v.value("a_min", cfg.visibility.a_min);
        cfg.visibility.raster_scale = v.value("raster_scale", cfg.visibility.raster_scale);
        cfg.visibility.z_max = v.value("z_max", cfg.visibility.z_max);
        if (!cfg.visibility.is_valid())
            throw ValidationError("config: invalid visibility settings");
    }
    if (j.contains("relation")) {
        const auto& r = j["relation"];
        reject_unknown_keys(r, {"indist_threshold", "round_step", "lookat_max_tilt"},
                            "relation");
        cfg.relation.indist_threshold = r.value("indist_threshold", cfg.relation.indist_threshold);
        cfg.relation.round_step = r.value("round_step", cfg.relation.round_step);
        cfg.relation.lookat_max_tilt = r.value("lookat_max_tilt", cfg.relation.lookat_max_tilt);
        if (!cfg.relation.is_valid()) throw ValidationError("config: invalid relation settings");
    }
    if (j.contains("room")) {
        const auto& r = j["room"];
        reject_unknown_keys(r, {"voxel", "alpha", "a_th"}, "room");
        cfg.room.voxel = r.value("voxel", cfg.room.voxel);
        cfg.room.alpha = r.value("alpha", cfg.room.alpha);
        cfg.room.a_th = r.value("a_th", cfg.room.a_th);
    }
    if (j.contains("tasks")) {
        if (!j["tasks"].is_array()) throw ValidationError("config: tasks must be an array");
        for (const auto& t : j["tasks"]) {
            reject_unknown_keys(t, {"name", "max_per_scene"}, "tasks[]");
            TaskConfig tc;
            tc.name = t.at("name").get<std::string>();
            tc.max_per_scene = t.value("max_per_scene", 8);
            if (!find_task(tc.name))
                throw ValidationError("config: unknown task \"" + tc.name + "\"");
            cfg.tasks.push_back(tc);
        }
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    if (cfg.workers < 1) throw ValidationError("config: workers must be >= 1");
    cfg.template_file = j.value("templates", cfg.template_file);
    cfg.render_images = j.value("render_images", cfg.render_images);
    return cfg;
}

std::vector<TaskConfig> PipelineConfig::tasks_or_default() const {
    if (!tasks.empty()) return tasks;
    std::vector<TaskConfig> all;
    for (const auto& info : task_registry()) all.push_back({info.name, 8});
    return all;
}

uint64_t PipelineConfig::content_hash(const TemplateBank& bank) const {
    json j;
    j["profile"] = profile;
    j["pose_convention"] = pose_convention == PoseConvention::CameraToWorld ? "c2w" : "w2c";
    j["up_axis"] = {up_axis.x(), up_axis.y(), up_axis.z()};
    j["subsample"] = {{"enabled", subsample_enabled},
                      {"d_th", subsample.d_th},
                      {"theta_th", subsample.theta_th}};
    j["visibility"] = {{"tau_v", visibility.tau_v},
                       {"a_min", visibility.a_min},
                       {"raster_scale", visibility.raster_scale},
                       {"z_max", visibility.z_max}};
    j["relation"] = {{"indist", relation.indist_threshold},
                     {"round", relation.round_step},
                     {"tilt", relation.lookat_max_tilt}};
    j["room"] = {{"voxel", room.voxel}, {"alpha", room.alpha}, {"a_th", room.a_th}};
    json task_arr = json::array();
    for (const auto& t : tasks_or_default())
        task_arr.push_back(json{{"name", t.name}, {"max", t.max_per_scene}});
    j["tasks"] = std::move(task_arr);
    j["seed"] = seed;
    return hash_combine(fnv1a64(j.dump()), bank.content_hash());
}

std::vector<QAItem> load_qa_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<QAItem> items;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        items.push_back(qa_item_from_json(line));
    }
    return items;
}

void save_qa_jsonl(const std::filesystem::path& path, const std::vector<QAItem>& items) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    for (const auto& item : items) out << to_jsonl(item) << "\n";
}

RunManifest run_generate(const PipelineConfig& config,
                         const std::vector<std::filesystem::path>& scene_dirs,
                         const std::filesystem::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();

    const TemplateBank bank = TemplateBank::load(
        config.template_file.empty() ? TemplateBank::default_path()
                                     : std::filesystem::path(config.template_file));
    const uint64_t hash = config.content_hash(bank);
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(hash));

    std::filesystem::create_directories(out_dir / "scenes");

    RunManifest manifest;
    manifest.config_hash = hash_hex;
    manifest.scenes.resize(scene_dirs.size());

    GenerateConfig gen_cfg;
    gen_cfg.tasks = config.tasks_or_default();
    gen_cfg.relation = config.relation;
    gen_cfg.room = config.room;
    gen_cfg.seed = config.seed;

    auto process_scene = [&](size_t slot) {
        const auto& dir = scene_dirs[slot];
        SceneStatus& status = manifest.scenes[slot];
        status.scene_id = dir.filename().string();
        try {
            SceneLoadOptions load_opts;
            load_opts.pose_convention = config.pose_convention;
            SceneBundle scene = load_scene_manifest(dir, load_opts);
            scene.up_axis = config.up_axis;
            status.scene_id = scene.scene_id;

            const auto scene_out = out_dir / "scenes" / scene.scene_id;
            const auto done_path = scene_out / "done.json";
            if (std::filesystem::exists(done_path)) {
                std::ifstream din(done_path);
                json done = json::parse(din, nullptr, false);
                if (!done.is_discarded() && done.value("config_hash", "") == hash_hex &&
                    std::filesystem::exists(scene_out / "qa.jsonl")) {
                    status.status = "cached";
                    status.n_items = done.value("n_items", 0);
                    return;
                }
            }
            std::filesystem::create_directories(scene_out);

            std::vector<size_t> kept;
            if (config.subsample_enabled) {
                kept = subsample_frames(scene.frames, config.subsample);
            } else {
                kept.resize(scene.frames.size());
                for (size_t i = 0; i < kept.size(); ++i) kept[i] = i;
            }
            {
                json kj;
                kj["scene_id"] = scene.scene_id;
                json arr = json::array();
                for (size_t i : kept) arr.push_back(scene.frames[i].frame_index);
                kj["kept"] = std::move(arr);
                std::ofstream(scene_out / "kept.json") << kj.dump(2) << "\n";
            }

            const SceneRecords records = build_records(scene, kept, config.visibility);
            save_records(scene_out / "records.json", records);

            const SceneGenerationResult gen = generate_dataset(scene, records, bank, gen_cfg);
            save_qa_jsonl(scene_out / "qa.jsonl", gen.items);

            if (config.render_images)
                for (const auto& item : gen.items)
                    render_item_images(item, scene, dir, scene_out);

            json done;
            done["config_hash"] = hash_hex;
            done["n_items"] = gen.items.size();
            json skips = json::object();
            for (const auto& [task, reasons] : gen.skip_counts) {
                json r = json::object();
                for (const auto& [reason, count] : reasons) r[reason] = count;
                if (!r.empty()) skips[task] = std::move(r);
            }
            done["skips"] = std::move(skips);
            std::ofstream(done_path) << done.dump(2) << "\n";

            status.status = "ok";
            status.n_items = static_cast<int>(gen.items.size());
        } catch (const std::exception& e) {
            status.status = "failed";
            status.reason = e.what();
        }
    };

    if (config.workers <= 1 || scene_dirs.size() <= 1) {
        for (size_t i = 0; i < scene_dirs.size(); ++i) process_scene(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const int n = std::min<int>(config.workers, static_cast<int>(scene_dirs.size()));
        for (int w = 0; w < n; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < scene_dirs.size();
                     i = next.fetch_add(1))
                    process_scene(i);
            });
        for (auto& t : pool) t.join();
    }

    // Merge per-scene outputs in input order so worker scheduling can never
    // reorder the dataset.
    std::ofstream merged(out_dir / "qa.jsonl");
    for (const auto& status : manifest.scenes) {
        if (status.status == "failed") continue;
        const auto path = out_dir / "scenes" / status.scene_id / "qa.jsonl";
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            merged << line << "\n";
            const QAItem item = qa_item_from_json(line);
            manifest.per_task_counts[item.task]++;
        }
    }
    merged.close();

    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json mj;
    mj["config_hash"] = manifest.config_hash;
    json scenes = json::array();
    for (const auto& s : manifest.scenes)
        scenes.push_back(json{{"scene_id", s.scene_id},
                              {"status", s.status},
                              {"reason", s.reason},
                              {"n_items", s.n_items}});
    mj["scenes"] = std::move(scenes);
    mj["per_task_counts"] = manifest.per_task_counts;
    mj["wall_time_s"] = manifest.wall_time_s;
    std::ofstream(out_dir / "manifest.json") << mj.dump(2) << "\n";

    return manifest;
}

}  // namespace spargen
