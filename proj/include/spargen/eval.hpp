#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spargen/compose.hpp"
#include "spargen/rng.hpp"
#include "spargen/tasks.hpp"

namespace spargen {

/// First standalone A-D letter in a free-form response; nullopt when absent.
std::optional<char> parse_choice(const std::string& text);

/// First decimal number in a free-form response.
std::optional<double> parse_number(const std::string& text);

/// Threshold-averaged relative accuracy: the fraction of thresholds
/// theta in {0.05, 0.10, ..., 0.50} with |pred - gt| / gt < theta.
double score_mra(double pred, double gt);

/// Parsed five-field camera-motion answer; values signed per the
/// right/down/forward-positive convention.
struct MotionFields {
    double values[5] = {0, 0, 0, 0, 0};  // move r, move d, move f, rot d, rot r
};

std::optional<MotionFields> parse_motion(const std::string& text);

/// Camera-motion partial credit: mean translation-magnitude MRA and mean
/// per-field direction match, combined 50/50.
double score_view_change(const MotionFields& pred, const MotionFields& gt);

struct TaskScore {
    double score = 0;  // [0, 100]
    int n_evaluated = 0;
    int n_unparseable = 0;
};

/// Score one task's items against responses (id -> response text). Missing
/// responses count as unparseable and score zero.
TaskScore score_task(const TaskInfo& info, const std::vector<QAItem>& items,
                     const std::map<std::string, std::string>& responses);

struct Baselines {
    std::optional<double> random;  // 100/k averaged; numeric tasks have none
    double frequency = 0;          // constant modal answer, scored per task metric
};

Baselines chance_baselines(const TaskInfo& info, const std::vector<QAItem>& items);

struct EvalReport {
    struct PerTask {
        double score = 0;
        int n_evaluated = 0;
        int n_unparseable = 0;
        std::string metric;
        std::optional<TaskLevel> level;
        std::optional<Baselines> baselines;
    };
    std::map<std::string, PerTask> per_task;
    std::map<std::string, double> per_level;  // "low", "medium", "high"
    double overall = 0;
};

EvalReport evaluate(const std::vector<QAItem>& items,
                    const std::map<std::string, std::string>& responses,
                    bool with_baselines = true);

std::string report_to_json(const EvalReport& report);

/// Deterministic per-task benchmark subset. Items are put in a canonical
/// shuffled order (keyed by task only) and `seed` selects the n-item block
/// starting at seed*n, so distinct seeds yield disjoint subsets while the
/// pool lasts. Tasks sampled in benchmark form only (fill for numeric
/// tasks, select for classification).
std::vector<QAItem> sample_benchmark(const std::vector<QAItem>& dataset, int n_per_task,
                                     uint64_t seed);

}  // namespace spargen
