#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spargen/compose.hpp"
#include "spargen/keyframe.hpp"
#include "spargen/scene_io.hpp"
#include "spargen/visibility.hpp"

namespace spargen {

/// Full generation configuration. Loaded from JSON with strict key checking;
/// dataset profiles (scannet / scannetpp / structured3d) provide the
/// per-dataset defaults, explicit keys override them.
struct PipelineConfig {
    std::string profile = "scannet";
    PoseConvention pose_convention = PoseConvention::CameraToWorld;
    Vec3 up_axis = Vec3(0, 0, 1);
    bool subsample_enabled = true;
    SubsampleConfig subsample;
    VisibilityConfig visibility;
    RelationConfig relation;
    RoomAreaParams room;
    std::vector<TaskConfig> tasks;  // empty = every registry task, default max
    uint64_t seed = 0;
    int workers = 1;
    std::string template_file;  // empty = bundled bank
    bool render_images = true;

    static PipelineConfig from_json_file(const std::filesystem::path& path);
    static PipelineConfig with_profile(const std::string& name);

    /// The configured task list, or every registry task at the default cap.
    std::vector<TaskConfig> tasks_or_default() const;

    /// Fingerprint of everything that affects generated bytes (threading and
    /// logging knobs excluded).
    uint64_t content_hash(const TemplateBank& bank) const;
};

struct SceneStatus {
    std::string scene_id;
    std::string status;  // "ok", "cached", "failed"
    std::string reason;
    int n_items = 0;
};

struct RunManifest {
    std::string config_hash;
    std::vector<SceneStatus> scenes;
    std::map<std::string, int> per_task_counts;
    double wall_time_s = 0;

    int n_failed() const {
        int n = 0;
        for (const auto& s : scenes)
            if (s.status == "failed") ++n;
        return n;
    }
};

/// Run subsample -> records -> generate for each scene directory, writing
/// per-scene outputs plus a merged qa.jsonl and manifest.json under
/// `out_dir`. Scene failures are isolated; scenes already generated under
/// the same config hash are skipped.
RunManifest run_generate(const PipelineConfig& config,
                         const std::vector<std::filesystem::path>& scene_dirs,
                         const std::filesystem::path& out_dir);

std::vector<QAItem> load_qa_jsonl(const std::filesystem::path& path);
void save_qa_jsonl(const std::filesystem::path& path, const std::vector<QAItem>& items);

}  // namespace spargen
