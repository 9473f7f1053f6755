#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spargen/image.hpp"
#include "spargen/options.hpp"
#include "spargen/task_geometry.hpp"
#include "spargen/tasks.hpp"
#include "spargen/templates.hpp"

namespace spargen {

struct GtNumeric {
    double value = 0;
    std::string unit;  // "meters", "cm^3", "m^2", "count"
};

/// One generated question-answer pair.
struct QAItem {
    std::string id;
    std::string scene_id;
    std::string task;
    QaType qa_type = QaType::Fill;
    ViewMode view_mode = ViewMode::Single;
    std::vector<std::string> image_refs;  // "<scene_id>/<image_path>", main view first
    std::string question;
    std::vector<std::string> options;  // empty for fill / sentence
    std::string answer;                // letter for select, value/prose otherwise
    std::optional<GtNumeric> gt_numeric;
    std::vector<VisualMark> marks;
};

std::string to_jsonl(const QAItem& item);
QAItem qa_item_from_json(const std::string& line);

/// Instantiate a template: placeholders resolved from `bindings`, marks
/// attached verbatim. Select-specific fields are filled by the caller.
QAItem instantiate(const Template& tmpl, const BindingMap& bindings,
                   const std::vector<VisualMark>& marks);

struct TaskConfig {
    std::string name;       // registry task name
    int max_per_scene = 8;
};

struct GenerateConfig {
    std::vector<TaskConfig> tasks;  // empty = all registry tasks at default max
    RelationConfig relation;
    RoomAreaParams room;
    uint64_t seed = 0;
};

struct SceneGenerationResult {
    std::vector<QAItem> items;
    std::map<std::string, int> per_task_counts;
    // task -> skip reason -> occurrences, for auditability
    std::map<std::string, std::map<std::string, int>> skip_counts;
};

/// Generate every enabled task's QA items for one scene. Deterministic in
/// (scene, config, seed); independent of threading.
SceneGenerationResult generate_dataset(const SceneBundle& scene, const SceneRecords& records,
                                       const TemplateBank& bank, const GenerateConfig& config);

/// Render each item's marks onto its frames' images. Returns relative paths
/// of the files written ("images/<item>_<k>.ppm"). Frames without a source
/// image on disk are rendered on a neutral canvas at the frame resolution.
std::vector<std::string> render_item_images(const QAItem& item, const SceneBundle& scene,
                                            const std::filesystem::path& scene_dir,
                                            const std::filesystem::path& out_dir);

}  // namespace spargen
