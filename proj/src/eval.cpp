#include "spargen/eval.hpp"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>
#include <set>

namespace spargen {

using nlohmann::json;

std::optional<char> parse_choice(const std::string& text) {
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
        if (c < 'A' || c > 'D') continue;
        const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        const bool right_ok =
            i + 1 == text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (left_ok && right_ok) return c;
    }
    return std::nullopt;
}

std::optional<double> parse_number(const std::string& text) {
    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool starts_number =
            std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+' || c == '.') && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])));
        if (!starts_number) continue;
        try {
            size_t used = 0;
            const double v = std::stod(text.substr(i), &used);
            if (used > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

double score_mra(double pred, double gt) {
    static const double thresholds[] = {0.05, 0.10, 0.15, 0.20, 0.25,
                                        0.30, 0.35, 0.40, 0.45, 0.50};
    const double rho = std::abs(pred - gt) / gt;
    int passed = 0;
    for (double theta : thresholds)
        if (rho < theta) ++passed;
    return passed / 10.0;
}

std::optional<MotionFields> parse_motion(const std::string& text) {
    // word pairs in answer order: (positive, negative) per field
    static const std::pair<const char*, const char*> kWords[5] = {
        {"right", "left"}, {"down", "up"}, {"forward", "back"}, {"down", "up"},
        {"right", "left"}};

    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    MotionFields out;
    size_t pos = 0;
    for (int field = 0; field < 5; ++field) {
        const std::string verb = field < 3 ? "move" : "rotate";
        const size_t at = lower.find(verb, pos);
        if (at == std::string::npos) return std::nullopt;
        size_t cursor = at + verb.size();
        while (cursor < lower.size() && lower[cursor] == ' ') ++cursor;

        int sign = 0;
        for (const char* word : {kWords[field].first, kWords[field].second}) {
            const size_t len = std::strlen(word);
            if (lower.compare(cursor, len, word) == 0) {
                sign = word == std::string_view(kWords[field].first) ? 1 : -1;
                cursor += len;
                break;
            }
        }
        if (sign == 0) return std::nullopt;

        const auto value = parse_number(lower.substr(cursor));
        if (!value) return std::nullopt;
        out.values[field] = sign * *value;
        pos = cursor;
    }
    return out;
}

double score_view_change(const MotionFields& pred, const MotionFields& gt) {
    // Translation magnitudes under MRA; zero ground truth passes only a
    // near-zero prediction.
    double mra_sum = 0;
    for (int f = 0; f < 3; ++f) {
        const double g = std::abs(gt.values[f]);
        const double p = std::abs(pred.values[f]);
        if (g < 1e-9)
            mra_sum += p < 0.05 ? 1.0 : 0.0;
        else
            mra_sum += score_mra(p, g);
    }

    auto sgn = [](double v) { return v > 1e-9 ? 1 : (v < -1e-9 ? -1 : 0); };
    double dir_sum = 0;
    for (int f = 0; f < 5; ++f)
        if (sgn(pred.values[f]) == sgn(gt.values[f])) dir_sum += 1.0;

    return 0.5 * (mra_sum / 3.0) + 0.5 * (dir_sum / 5.0);
}

namespace {

std::string normalized(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

double score_one(const TaskInfo& info, const QAItem& item, const std::string& response,
                 bool& parsed) {
    parsed = false;
    if (item.qa_type == QaType::Select) {
        const auto letter = parse_choice(response);
        if (!letter) return 0;
        parsed = true;
        return (*letter == item.answer[0]) ? 1.0 : 0.0;
    }
    switch (info.metric) {
        case Metric::Mra: {
            const auto value = parse_number(response);
            if (!value || !item.gt_numeric || item.gt_numeric->value <= 0) return 0;
            parsed = true;
            return score_mra(*value, item.gt_numeric->value);
        }
        case Metric::ViewChange: {
            const auto pred = parse_motion(response);
            const auto gt = parse_motion(item.answer);
            if (!pred || !gt) return 0;
            parsed = true;
            return score_view_change(*pred, *gt);
        }
        case Metric::Accuracy:
        case Metric::ExactMatch: {
            if (response.empty()) return 0;
            parsed = true;
            return normalized(response) == normalized(item.answer) ? 1.0 : 0.0;
        }
    }
    return 0;
}

}  // namespace

TaskScore score_task(const TaskInfo& info, const std::vector<QAItem>& items,
                     const std::map<std::string, std::string>& responses) {
    TaskScore result;
    double sum = 0;
    for (const auto& item : items) {
        ++result.n_evaluated;
        const auto it = responses.find(item.id);
        bool parsed = false;
        if (it != responses.end()) sum += score_one(info, item, it->second, parsed);
        if (!parsed) ++result.n_unparseable;
    }
    result.score = result.n_evaluated ? 100.0 * sum / result.n_evaluated : 0.0;
    return result;
}

Baselines chance_baselines(const TaskInfo& info, const std::vector<QAItem>& items) {
    Baselines out;
    if (items.empty()) return out;

    bool any_select = false;
    double random_sum = 0;
    std::map<std::string, int> freq;
    for (const auto& item : items) {
        if (item.qa_type == QaType::Select) {
            any_select = true;
            random_sum += 1.0 / item.options.size();
        }
        freq[item.answer]++;
    }
    if (any_select) random_sum = random_sum / items.size();
    if (any_select) out.random = 100.0 * random_sum;

    const auto modal = std::max_element(
        freq.begin(), freq.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });

    // The frequency baseline answers the modal answer for every item.
    std::map<std::string, std::string> constant;
    for (const auto& item : items) constant[item.id] = modal->first;
    out.frequency = score_task(info, items, constant).score;
    return out;
}

EvalReport evaluate(const std::vector<QAItem>& items,
                    const std::map<std::string, std::string>& responses,
                    bool with_baselines) {
    std::map<std::string, std::vector<QAItem>> by_task;
    for (const auto& item : items) by_task[item.task].push_back(item);

    EvalReport report;
    std::map<TaskLevel, std::vector<double>> level_scores;
    double total = 0;
    int n_tasks = 0;
    for (const auto& [task, task_items] : by_task) {
        const TaskInfo* info = find_task(task);
        if (!info) throw ValidationError("unknown task in dataset: " + task);
        const TaskScore s = score_task(*info, task_items, responses);
        EvalReport::PerTask per;
        per.score = s.score;
        per.n_evaluated = s.n_evaluated;
        per.n_unparseable = s.n_unparseable;
        per.metric = to_string(info->metric);
        per.level = info->level;
        if (with_baselines) per.baselines = chance_baselines(*info, task_items);
        report.per_task[task] = per;
        total += s.score;
        ++n_tasks;
        if (info->level) level_scores[*info->level].push_back(s.score);
    }
    for (const auto& [level, scores] : level_scores) {
        double sum = 0;
        for (double v : scores) sum += v;
        report.per_level[to_string(level)] = sum / scores.size();
    }
    report.overall = n_tasks ? total / n_tasks : 0.0;
    return report;
}

std::string report_to_json(const EvalReport& report) {
    json j;
    json tasks = json::object();
    for (const auto& [name, per] : report.per_task) {
        json t;
        t["score"] = per.score;
        t["n_evaluated"] = per.n_evaluated;
        t["n_unparseable"] = per.n_unparseable;
        t["metric"] = per.metric;
        t["level"] = per.level ? json(to_string(*per.level)) : json(nullptr);
        if (per.baselines) {
            t["baselines"] = json{
                {"random",
                 per.baselines->random ? json(*per.baselines->random) : json(nullptr)},
                {"frequency", per.baselines->frequency}};
        }
        tasks[name] = std::move(t);
    }
    j["per_task"] = std::move(tasks);
    j["per_level"] = report.per_level;
    j["overall"] = report.overall;
    return j.dump(2);
}

std::vector<QAItem> sample_benchmark(const std::vector<QAItem>& dataset, int n_per_task,
                                     uint64_t seed) {
    std::map<std::string, std::vector<const QAItem*>> pools;
    for (const auto& item : dataset) {
        const TaskInfo* info = find_task(item.task);
        if (!info || !info->level) continue;  // benchmark tasks only
        if (item.qa_type != info->benchmark_qa_type) continue;
        pools[item.task].push_back(&item);
    }

    std::vector<QAItem> out;
    for (auto& [task, pool] : pools) {
        // Canonical order depends on the task only; the seed picks a block.
        std::sort(pool.begin(), pool.end(),
                  [](const QAItem* a, const QAItem* b) { return a->id < b->id; });
        Rng rng(fnv1a64(task, 0x5bd1e995u));
        rng.shuffle(pool);

        const size_t n = pool.size();
        const size_t take = std::min<size_t>(n_per_task, n);
        const size_t start = (seed * static_cast<size_t>(n_per_task)) % n;
        for (size_t k = 0; k < take; ++k) out.push_back(*pool[(start + k) % n]);
    }
    std::sort(out.begin(), out.end(),
              [](const QAItem& a, const QAItem& b) { return a.id < b.id; });
    return out;
}

}  // namespace spargen
