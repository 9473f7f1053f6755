#pragma once

#include <string>
#include <vector>

#include "spargen/rng.hpp"
#include "spargen/task_geometry.hpp"

namespace spargen {

struct OptionSet {
    std::vector<std::string> options;  // rendered option strings
    int answer_index = 0;              // position of the ground truth
    char answer_letter() const { return static_cast<char>('A' + answer_index); }
};

/// Four distinct values on the `step` grid including the ground truth, with
/// distractors drawn around gt * (1 +- U(0.1, 0.6)) and the order shuffled.
OptionSet make_numeric_options(double gt, double step, Rng& rng);

/// Render a relation as the benchmark's comma triple (left-right,
/// above-below, front-behind; empty slot for none).
std::string relation_triple(const SpatialRelation& rel);

/// The ground-truth triple plus three distinct distractor triples sampled
/// from the remaining 26 combinations.
OptionSet make_relation_options(const SpatialRelation& gt, Rng& rng);

/// Generic branch: the rendered ground truth plus (count-1) distractors from
/// the candidate pool (deduplicated, order shuffled). Falls back to index
/// perturbations of the pool when it is too small.
OptionSet make_string_options(const std::string& gt, std::vector<std::string> distractors,
                              int count, Rng& rng);

}  // namespace spargen
