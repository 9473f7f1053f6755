#include "spargen/tasks.hpp"

namespace spargen {

const char* to_string(QaType t) {
    switch (t) {
        case QaType::Fill: return "fill";
        case QaType::Select: return "select";
        case QaType::Sentence: return "sentence";
    }
    return "?";
}

const char* to_string(ViewMode m) { return m == ViewMode::Single ? "single" : "multi"; }

const char* to_string(TaskLevel l) {
    switch (l) {
        case TaskLevel::Low: return "low";
        case TaskLevel::Medium: return "medium";
        case TaskLevel::High: return "high";
    }
    return "?";
}

const char* to_string(Metric m) {
    switch (m) {
        case Metric::Mra: return "mra";
        case Metric::Accuracy: return "accuracy";
        case Metric::ViewChange: return "view_change";
        case Metric::ExactMatch: return "exact_match";
    }
    return "?";
}

std::optional<QaType> qa_type_from_string(const std::string& s) {
    if (s == "fill") return QaType::Fill;
    if (s == "select") return QaType::Select;
    if (s == "sentence") return QaType::Sentence;
    return std::nullopt;
}

namespace {

std::vector<TaskInfo> build_registry() {
    using enum QaType;
    std::vector<TaskInfo> tasks;

    auto add = [&](std::string name, std::string family, ViewMode mode, Metric metric,
                   std::optional<TaskLevel> level, std::vector<QaType> types,
                   QaType bench_type, int options) {
        TaskInfo t;
        t.name = std::move(name);
        t.template_family = std::move(family);
        t.view_mode = mode;
        t.metric = metric;
        t.level = level;
        t.qa_types = std::move(types);
        t.benchmark_qa_type = bench_type;
        t.option_count = options;
        tasks.push_back(std::move(t));
    };

    // Low: numeric depth / distance estimation.
    add("Depth-OC", "depth_oc", ViewMode::Single, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Depth-OC-MV", "depth_oc", ViewMode::Multi, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Depth-OO", "depth_oo", ViewMode::Single, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Depth-OO-MV", "depth_oo", ViewMode::Multi, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Dist-OC", "dist_oc", ViewMode::Single, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Dist-OC-MV", "dist_oc", ViewMode::Multi, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Dist-OO", "dist_oo", ViewMode::Single, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);
    add("Dist-OO-MV", "dist_oo", ViewMode::Multi, Metric::Mra, TaskLevel::Low,
        {Fill, Select, Sentence}, Fill, 4);

    // Medium: cross-view correspondence and camera motion.
    add("PosMatch", "posmatch", ViewMode::Multi, Metric::Accuracy, TaskLevel::Medium,
        {Fill, Select}, Select, 4);
    add("CamMotion", "cammotion", ViewMode::Multi, Metric::Accuracy, TaskLevel::Medium,
        {Fill, Select, Sentence}, Select, 4);
    add("ViewChgI", "viewchgi", ViewMode::Multi, Metric::ViewChange, TaskLevel::Medium,
        {Fill, Sentence}, Fill, 4);

    // High: relational and imagination tasks.
    add("DistI-OO", "disti_oo", ViewMode::Single, Metric::Accuracy, TaskLevel::High,
        {Fill, Select, Sentence}, Select, 2);
    add("DistI-OO-MV", "disti_oo", ViewMode::Multi, Metric::Accuracy, TaskLevel::High,
        {Fill, Select, Sentence}, Select, 2);
    add("ObjRel-OC-MV", "objrel_oc", ViewMode::Multi, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);
    add("ObjRel-OO", "objrel_oo", ViewMode::Single, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);
    add("ObjRel-OO-MV", "objrel_oo", ViewMode::Multi, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);
    add("SpImag-OC", "spimag_oc", ViewMode::Single, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);
    add("SpImag-OC-MV", "spimag_oc", ViewMode::Multi, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);
    add("SpImag-OO", "spimag_oo", ViewMode::Single, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);
    add("SpImag-OO-MV", "spimag_oo", ViewMode::Multi, Metric::Accuracy, TaskLevel::High,
        {Select, Sentence}, Select, 4);

    // Dataset-only families (no benchmark level).
    add("ObjVol", "objvol", ViewMode::Single, Metric::Mra, std::nullopt,
        {Fill, Select, Sentence}, Fill, 4);
    add("ObjCount", "objcount", ViewMode::Multi, Metric::Mra, std::nullopt,
        {Fill, Select, Sentence}, Fill, 4);
    add("AppearOrder", "appearorder", ViewMode::Multi, Metric::ExactMatch, std::nullopt,
        {Fill, Sentence}, Fill, 4);
    add("RoomSize", "roomsize", ViewMode::Multi, Metric::Mra, std::nullopt,
        {Fill, Select, Sentence}, Fill, 4);

    return tasks;
}

}  // namespace

const std::vector<TaskInfo>& task_registry() {
    static const std::vector<TaskInfo> registry = build_registry();
    return registry;
}

const TaskInfo* find_task(const std::string& name) {
    for (const auto& t : task_registry())
        if (t.name == name) return &t;
    return nullptr;
}

std::vector<std::string> benchmark_task_names() {
    std::vector<std::string> names;
    for (const auto& t : task_registry())
        if (t.level) names.push_back(t.name);
    return names;
}

}  // namespace spargen
