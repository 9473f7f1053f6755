#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "spargen/eval.hpp"

using namespace spargen;

namespace {

QAItem select_item(const std::string& id, const std::string& task, char answer,
                   std::vector<std::string> options) {
    QAItem item;
    item.id = id;
    item.task = task;
    item.qa_type = QaType::Select;
    item.options = std::move(options);
    item.answer = std::string(1, answer);
    return item;
}

QAItem fill_item(const std::string& id, const std::string& task, double gt) {
    QAItem item;
    item.id = id;
    item.task = task;
    item.qa_type = QaType::Fill;
    item.answer = format_fixed(gt, 1);
    item.gt_numeric = GtNumeric{gt, "meters"};
    return item;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("parse_choice finds standalone letters only") {
    CHECK(parse_choice("B") == 'B');
    CHECK(parse_choice("The answer is C.") == 'C');
    CHECK(parse_choice("answer: d") == 'D');
    CHECK(parse_choice("(A)") == 'A');
    CHECK(!parse_choice("maybe").has_value());
    CHECK(!parse_choice("cabbage").has_value());
    CHECK(!parse_choice("").has_value());
    // 'A' inside a word does not count, later standalone letter wins.
    CHECK(parse_choice("grade B work") == 'B');
}

TEST_CASE("parse_number finds the first decimal") {
    CHECK(parse_number("1.7") == doctest::Approx(1.7));
    CHECK(parse_number("about 1.7 meters") == doctest::Approx(1.7));
    CHECK(parse_number("-0.4 then 2") == doctest::Approx(-0.4));
    CHECK(parse_number("answer: .5") == doctest::Approx(0.5));
    CHECK(!parse_number("").has_value());
    CHECK(!parse_number("none").has_value());
}

TEST_CASE("score_mra threshold ladder") {
    CHECK(score_mra(2.0, 2.0) == doctest::Approx(1.0));
    CHECK(score_mra(2.0 * 1.049, 2.0) == doctest::Approx(1.0));
    CHECK(score_mra(2.0 * 1.22, 2.0) == doctest::Approx(0.6));
    CHECK(score_mra(2.0 * 0.78, 2.0) == doctest::Approx(0.6));
    CHECK(score_mra(2.0 * 1.6, 2.0) == doctest::Approx(0.0));
    CHECK(score_mra(2.0 * 1.5, 2.0) == doctest::Approx(0.0));

    // Non-increasing in the relative error.
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const double rho = i * 0.006;
        const double s = score_mra(1.0 + rho, 1.0);
        CHECK(s <= prev + 1e-12);
        prev = s;
    }
}

TEST_CASE("parse_motion handles the five-field answer format") {
    const auto m = parse_motion(
        "move right: 1.2, move up: 0.4, move forward: 1.4, rotate up: 5, rotate left: 90");
    REQUIRE(m.has_value());
    CHECK(m->values[0] == doctest::Approx(1.2));
    CHECK(m->values[1] == doctest::Approx(-0.4));
    CHECK(m->values[2] == doctest::Approx(1.4));
    CHECK(m->values[3] == doctest::Approx(-5));
    CHECK(m->values[4] == doctest::Approx(-90));

    CHECK(!parse_motion("move right: 1.2").has_value());
    CHECK(!parse_motion("gibberish").has_value());
    // tolerant of case and spacing
    CHECK(parse_motion("Move Left:2.6, move down: 0.1, move forward: 0.2, rotate up: 10, "
                       "rotate left: 0")
              .has_value());
}

TEST_CASE("score_view_change combines magnitude MRA and direction match") {
    MotionFields gt;
    gt.values[0] = 1.0;
    gt.values[1] = -0.4;
    gt.values[2] = 0.0;
    gt.values[3] = 10.0;
    gt.values[4] = -90.0;

    CHECK(score_view_change(gt, gt) == doctest::Approx(1.0));

    // Every sign flipped: magnitudes all pass, only the zero field's
    // direction matches -> 0.5 * 1 + 0.5 * (1/5).
    MotionFields wrong_dir = gt;
    for (double& v : wrong_dir.values) v = -v;
    CHECK(score_view_change(wrong_dir, gt) == doctest::Approx(0.6));

    MotionFields zero;
    const double base = score_view_change(zero, gt);
    CHECK(base == doctest::Approx(0.5 * (1.0 / 3.0) + 0.5 * (1.0 / 5.0)));
}

TEST_CASE("score_task accuracy and MRA paths") {
    const TaskInfo* select_info = find_task("ObjRel-OO");
    std::vector<QAItem> items{select_item("a", "ObjRel-OO", 'B', {"x", "y", "z", "w"}),
                              select_item("b", "ObjRel-OO", 'C', {"x", "y", "z", "w"}),
                              select_item("c", "ObjRel-OO", 'A', {"x", "y", "z", "w"})};
    std::map<std::string, std::string> responses{{"a", "B"}, {"b", "Answer: C."}, {"c", "D"}};
    const TaskScore acc = score_task(*select_info, items, responses);
    CHECK(acc.score == doctest::Approx(100.0 * 2 / 3));
    CHECK(acc.n_evaluated == 3);
    CHECK(acc.n_unparseable == 0);

    // Unparseable and missing responses score zero and are counted.
    responses["c"] = "no idea";
    responses.erase("b");
    const TaskScore partial = score_task(*select_info, items, responses);
    CHECK(partial.score == doctest::Approx(100.0 / 3));
    CHECK(partial.n_unparseable == 2);

    const TaskInfo* fill_info = find_task("Depth-OC");
    std::vector<QAItem> numeric{fill_item("n1", "Depth-OC", 2.0),
                                fill_item("n2", "Depth-OC", 1.0)};
    std::map<std::string, std::string> nresp{{"n1", "2.0"}, {"n2", "about 1.22 meters"}};
    const TaskScore mra = score_task(*fill_info, numeric, nresp);
    CHECK(mra.score == doctest::Approx(100.0 * (1.0 + 0.6) / 2));
}

TEST_CASE("hand-scored mixed sheet matches score_task") {
    // 20 responses scored by hand: 12 correct letters, 5 wrong, 3 unparseable.
    const TaskInfo* info = find_task("SpImag-OC");
    std::vector<QAItem> items;
    std::map<std::string, std::string> responses;
    for (int i = 0; i < 20; ++i) {
        const std::string id = "i" + std::to_string(i);
        items.push_back(select_item(id, "SpImag-OC", 'A', {"p", "q", "r", "s"}));
        if (i < 12)
            responses[id] = "A";
        else if (i < 17)
            responses[id] = "B";
        else
            responses[id] = "unsure";
    }
    const TaskScore score = score_task(*info, items, responses);
    CHECK(score.score == doctest::Approx(100.0 * 12 / 20));
    CHECK(score.n_unparseable == 3);
}

TEST_CASE("chance baselines") {
    const TaskInfo* info = find_task("ObjRel-OO");
    std::vector<QAItem> items;
    for (int i = 0; i < 8; ++i)
        items.push_back(select_item("x" + std::to_string(i), "ObjRel-OO",
                                    static_cast<char>('A' + i % 4), {"1", "2", "3", "4"}));
    const Baselines b = chance_baselines(*info, items);
    REQUIRE(b.random.has_value());
    CHECK(*b.random == doctest::Approx(25.0));
    CHECK(b.frequency == doctest::Approx(25.0));  // perfectly balanced

    // Degenerate task where every answer is A.
    std::vector<QAItem> skewed;
    for (int i = 0; i < 6; ++i)
        skewed.push_back(
            select_item("y" + std::to_string(i), "ObjRel-OO", 'A', {"1", "2", "3", "4"}));
    const Baselines bs = chance_baselines(*info, skewed);
    CHECK(bs.frequency == doctest::Approx(100.0));
    CHECK(bs.frequency >= *bs.random);

    // Binary options give a 50-point random baseline.
    std::vector<QAItem> binary;
    for (int i = 0; i < 4; ++i)
        binary.push_back(select_item("z" + std::to_string(i), "DistI-OO",
                                     static_cast<char>('A' + i % 2), {"u", "v"}));
    const Baselines bb = chance_baselines(*find_task("DistI-OO"), binary);
    CHECK(*bb.random == doctest::Approx(50.0));
}

TEST_CASE("evaluate groups tasks into the benchmark levels") {
    std::vector<QAItem> items;
    std::map<std::string, std::string> responses;
    for (const auto& name : benchmark_task_names()) {
        const TaskInfo* info = find_task(name);
        QAItem item;
        if (info->benchmark_qa_type == QaType::Select) {
            item = select_item(name + ":0", name, 'A', {"1", "2", "3", "4"});
            responses[item.id] = "A";
        } else if (info->metric == Metric::ViewChange) {
            item.id = name + ":0";
            item.task = name;
            item.qa_type = QaType::Fill;
            item.answer = "move right: 1.0, move up: 0.2, move forward: 0.5, rotate up: 5, "
                          "rotate left: 10";
            responses[item.id] = item.answer;
        } else {
            item = fill_item(name + ":0", name, 2.0);
            responses[item.id] = "2.0";
        }
        items.push_back(item);
    }

    const EvalReport report = evaluate(items, responses);
    CHECK(report.per_task.size() == 20);
    CHECK(report.overall == doctest::Approx(100.0));
    REQUIRE(report.per_level.count("low"));
    REQUIRE(report.per_level.count("medium"));
    REQUIRE(report.per_level.count("high"));

    std::map<std::string, std::set<std::string>> members;
    for (const auto& [task, per] : report.per_task) {
        REQUIRE(per.level.has_value());
        members[to_string(*per.level)].insert(task);
    }
    CHECK(members["low"] ==
          std::set<std::string>{"Depth-OC", "Depth-OC-MV", "Depth-OO", "Depth-OO-MV",
                                "Dist-OC", "Dist-OC-MV", "Dist-OO", "Dist-OO-MV"});
    CHECK(members["medium"] == std::set<std::string>{"PosMatch", "CamMotion", "ViewChgI"});
    CHECK(members["high"] ==
          std::set<std::string>{"DistI-OO", "DistI-OO-MV", "ObjRel-OC-MV", "ObjRel-OO",
                                "ObjRel-OO-MV", "SpImag-OC", "SpImag-OC-MV", "SpImag-OO",
                                "SpImag-OO-MV"});

    // Per-level mean is the arithmetic mean of member scores.
    double low_sum = 0;
    for (const auto& t : members["low"]) low_sum += report.per_task.at(t).score;
    CHECK(report.per_level.at("low") == doctest::Approx(low_sum / members["low"].size()));
}

TEST_CASE("evaluate reports only the levels present in the data") {
    std::vector<QAItem> items{fill_item("a", "Depth-OC", 2.0),
                              fill_item("b", "Dist-OO", 1.5),
                              fill_item("v", "ObjVol", 120.0)};  // no benchmark level
    const EvalReport report = evaluate(items, {{"a", "2.0"}, {"b", "3.0"}, {"v", "120"}});
    CHECK(report.per_level.count("low") == 1);
    CHECK(report.per_level.count("medium") == 0);
    CHECK(report.per_level.count("high") == 0);
    CHECK(report.per_task.size() == 3);
    CHECK(!report.per_task.at("ObjVol").level.has_value());
    // Overall averages every scored task, levelled or not.
    const double expect = (report.per_task.at("Depth-OC").score +
                           report.per_task.at("Dist-OO").score +
                           report.per_task.at("ObjVol").score) /
                          3.0;
    CHECK(report.overall == doctest::Approx(expect));
}

TEST_CASE("sample_benchmark determinism and per-seed disjointness") {
    std::vector<QAItem> dataset;
    for (int i = 0; i < 1000; ++i) {
        QAItem item = fill_item("Depth-OC:" + std::to_string(1000 + i), "Depth-OC",
                                1.0 + (i % 30) * 0.1);
        dataset.push_back(item);
    }
    const auto s0a = sample_benchmark(dataset, 400, 0);
    const auto s0b = sample_benchmark(dataset, 400, 0);
    REQUIRE(s0a.size() == 400);
    std::set<std::string> ids0;
    for (const auto& item : s0a) ids0.insert(item.id);
    CHECK(ids0.size() == 400);
    for (size_t i = 0; i < s0a.size(); ++i) CHECK(s0a[i].id == s0b[i].id);

    const auto s1 = sample_benchmark(dataset, 400, 1);
    std::set<std::string> overlap;
    for (const auto& item : s1)
        if (ids0.count(item.id)) overlap.insert(item.id);
    CHECK(overlap.empty());

    // Tiny mode.
    const auto tiny = sample_benchmark(dataset, 50, 0);
    CHECK(tiny.size() == 50);

    // Small pools take everything.
    std::vector<QAItem> few(dataset.begin(), dataset.begin() + 10);
    CHECK(sample_benchmark(few, 400, 0).size() == 10);

    // Non-benchmark qa types and tasks are excluded.
    QAItem sentence = fill_item("Depth-OC:x", "Depth-OC", 2.0);
    sentence.qa_type = QaType::Sentence;
    QAItem extra = fill_item("ObjVol:1", "ObjVol", 100);
    const auto filtered = sample_benchmark({sentence, extra}, 10, 0);
    CHECK(filtered.empty());
}

TEST_CASE("report JSON shape") {
    std::vector<QAItem> items{select_item("a", "ObjRel-OO", 'A', {"1", "2", "3", "4"})};
    const EvalReport report = evaluate(items, {{"a", "A"}});
    const std::string json_text = report_to_json(report);
    CHECK(json_text.find("\"per_task\"") != std::string::npos);
    CHECK(json_text.find("\"per_level\"") != std::string::npos);
    CHECK(json_text.find("\"overall\"") != std::string::npos);
    CHECK(json_text.find("\"baselines\"") != std::string::npos);
}

}  // TEST_SUITE
