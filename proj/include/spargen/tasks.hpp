#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spargen {

enum class QaType { Fill, Select, Sentence };
enum class ViewMode { Single, Multi };
enum class TaskLevel { Low, Medium, High };
enum class Metric { Mra, Accuracy, ViewChange, ExactMatch };

const char* to_string(QaType t);
const char* to_string(ViewMode m);
const char* to_string(TaskLevel l);
const char* to_string(Metric m);
std::optional<QaType> qa_type_from_string(const std::string& s);

/// Static description of one task family: identity, benchmark role and the
/// QA forms it emits.
struct TaskInfo {
    std::string name;            // e.g. "Depth-OC-MV"
    std::string template_family; // key into the template bank
    ViewMode view_mode = ViewMode::Single;
    Metric metric = Metric::Mra;
    std::optional<TaskLevel> level;  // set only for benchmark tasks
    std::vector<QaType> qa_types;    // forms produced by the generator
    QaType benchmark_qa_type = QaType::Fill;  // form sampled into benchmarks
    int option_count = 4;            // options per select item (2 or 4)
};

/// All task families this generator produces, benchmark tasks first in the
/// canonical reporting order.
const std::vector<TaskInfo>& task_registry();

const TaskInfo* find_task(const std::string& name);

/// The benchmark task set (those carrying a level).
std::vector<std::string> benchmark_task_names();

}  // namespace spargen
