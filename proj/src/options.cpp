#include "spargen/options.hpp"

#include <algorithm>
#include <set>

#include "spargen/util.hpp"

namespace spargen {

OptionSet make_numeric_options(double gt, double step, Rng& rng) {
    const int decimals = decimals_for_step(step);
    const std::string gt_str = format_fixed(round_to_step(gt, step), decimals);

    std::set<std::string> seen{gt_str};
    std::vector<std::string> values{gt_str};
    double spread = 0.6;
    int tries = 0;
    while (values.size() < 4) {
        const double factor = 1.0 + (rng.coin() ? 1.0 : -1.0) * rng.uniform(0.1, spread);
        const double candidate = round_to_step(gt * factor, step);
        ++tries;
        if (tries % 100 == 0) spread += 0.5;  // widen when the grid is cramped
        if (candidate <= 0) continue;
        const std::string s = format_fixed(candidate, decimals);
        if (seen.insert(s).second) values.push_back(s);
        if (tries > 1000) {
            // Last resort: step off the grid directly.
            for (int k = 1; values.size() < 4; ++k) {
                const std::string up = format_fixed(round_to_step(gt + k * step, step), decimals);
                if (seen.insert(up).second) values.push_back(up);
                const double down = round_to_step(gt - k * step, step);
                if (values.size() < 4 && down > 0) {
                    const std::string ds = format_fixed(down, decimals);
                    if (seen.insert(ds).second) values.push_back(ds);
                }
            }
        }
    }

    rng.shuffle(values);
    OptionSet out;
    out.options = std::move(values);
    out.answer_index = static_cast<int>(
        std::find(out.options.begin(), out.options.end(), gt_str) - out.options.begin());
    return out;
}

std::string relation_triple(const SpatialRelation& rel) {
    std::string s;
    s += side_word(rel.left_right);
    s += ", ";
    s += side_word(rel.above_below);
    s += ", ";
    s += side_word(rel.front_behind);
    return s;
}

namespace {

// 27 triples indexed by base-3 digits: left_right, above_below, front_behind.
SpatialRelation relation_from_code(int code) {
    static const Side lr[] = {Side::None, Side::Left, Side::Right};
    static const Side ab[] = {Side::None, Side::Above, Side::Below};
    static const Side fb[] = {Side::None, Side::Front, Side::Behind};
    SpatialRelation rel;
    rel.left_right = lr[code % 3];
    rel.above_below = ab[(code / 3) % 3];
    rel.front_behind = fb[(code / 9) % 3];
    return rel;
}

int relation_code(const SpatialRelation& rel) {
    auto digit = [](Side s, Side one, Side two) { return s == one ? 1 : (s == two ? 2 : 0); };
    return digit(rel.left_right, Side::Left, Side::Right) +
           3 * digit(rel.above_below, Side::Above, Side::Below) +
           9 * digit(rel.front_behind, Side::Front, Side::Behind);
}

}  // namespace

OptionSet make_relation_options(const SpatialRelation& gt, Rng& rng) {
    const int gt_code = relation_code(gt);
    std::vector<int> others;
    others.reserve(26);
    for (int code = 0; code < 27; ++code)
        if (code != gt_code) others.push_back(code);
    rng.shuffle(others);

    std::vector<std::string> options{relation_triple(gt)};
    for (int i = 0; i < 3; ++i) options.push_back(relation_triple(relation_from_code(others[i])));

    rng.shuffle(options);
    OptionSet out;
    const std::string gt_str = relation_triple(gt);
    out.options = std::move(options);
    out.answer_index = static_cast<int>(
        std::find(out.options.begin(), out.options.end(), gt_str) - out.options.begin());
    return out;
}

OptionSet make_string_options(const std::string& gt, std::vector<std::string> distractors,
                              int count, Rng& rng) {
    std::set<std::string> seen{gt};
    std::vector<std::string> options{gt};
    rng.shuffle(distractors);
    for (const auto& d : distractors) {
        if (static_cast<int>(options.size()) >= count) break;
        if (seen.insert(d).second) options.push_back(d);
    }
    int suffix = 2;
    while (static_cast<int>(options.size()) < count) {
        // Degenerate pools: disambiguate with a counter so options stay distinct.
        const std::string forged = gt + " (" + std::to_string(suffix++) + ")";
        if (seen.insert(forged).second) options.push_back(forged);
    }

    rng.shuffle(options);
    OptionSet out;
    out.options = std::move(options);
    out.answer_index = static_cast<int>(
        std::find(out.options.begin(), out.options.end(), gt) - out.options.begin());
    return out;
}

}  // namespace spargen
