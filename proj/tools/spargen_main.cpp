// spargen: scene -> spatial-QA dataset generator and evaluation harness.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "spargen/bev.hpp"
#include "spargen/eval.hpp"
#include "spargen/grounding.hpp"
#include "spargen/pipeline.hpp"

using namespace spargen;
using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + path.string());
    return j;
}

std::map<std::string, std::string> load_responses(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("text"))
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected {\"id\", \"text\"}");
        out[j["id"].get<std::string>()] = j["text"].get<std::string>();
    }
    return out;
}

Box3D box_from_json(const json& j, const std::string& where) {
    if (!j.contains("center") || !j.contains("size"))
        throw ValidationError(where + ": box needs center and size");
    Box3D box;
    box.center = Vec3(j["center"][0].get<double>(), j["center"][1].get<double>(),
                      j["center"][2].get<double>());
    box.size = Vec3(j["size"][0].get<double>(), j["size"][1].get<double>(),
                    j["size"][2].get<double>());
    return box;
}

RigidTransform pose_from_flat(const json& a) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = a.at(r * 4 + c).get<double>();
    return RigidTransform::from_matrix(m);
}

uint64_t env_or(const char* name, uint64_t fallback) {
    const char* v = std::getenv(name);
    return v ? std::strtoull(v, nullptr, 10) : fallback;
}

void print_level_summary(const EvalReport& report) {
    std::cout << "overall: " << format_fixed(report.overall, 2) << "\n";
    for (const char* level : {"low", "medium", "high"}) {
        auto it = report.per_level.find(level);
        if (it == report.per_level.end()) continue;
        std::cout << level << ": " << format_fixed(it->second, 2) << " [";
        bool first = true;
        for (const auto& [task, per] : report.per_task) {
            if (!per.level || std::string(to_string(*per.level)) != level) continue;
            if (!first) std::cout << ", ";
            std::cout << task << " " << format_fixed(per.score, 2);
            first = false;
        }
        std::cout << "]\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial QA generation and evaluation for 3D-annotated scenes"};
    app.require_subcommand(1);

    // --- subsample ---
    auto* sub = app.add_subcommand("subsample", "Pose-based keyframe filtering");
    std::string sub_scene, sub_out = "kept.json";
    double sub_dth = 0.5, sub_theta = 15.0;
    std::string sub_pose = "camera_to_world";
    sub->add_option("--scene", sub_scene, "scene directory")->required();
    sub->add_option("--d-th", sub_dth, "translation threshold, meters");
    sub->add_option("--theta-th", sub_theta, "rotation threshold, degrees");
    sub->add_option("--pose-convention", sub_pose, "camera_to_world | world_to_camera");
    sub->add_option("--out", sub_out, "output JSON");

    // --- index ---
    auto* idx = app.add_subcommand("index", "Build image/object records for a scene");
    std::string idx_scene, idx_kept, idx_out = "records.json";
    VisibilityConfig idx_vis;
    std::string idx_pose = "camera_to_world";
    idx->add_option("--scene", idx_scene, "scene directory")->required();
    idx->add_option("--kept", idx_kept, "kept.json from subsample (default: all frames)");
    idx->add_option("--tau-v", idx_vis.tau_v, "min visible-vertex fraction");
    idx->add_option("--a-min", idx_vis.a_min, "min projected area, px^2");
    idx->add_option("--raster-scale", idx_vis.raster_scale, "raster resolution factor");
    idx->add_option("--z-max", idx_vis.z_max, "depth validity cap, meters");
    idx->add_option("--pose-convention", idx_pose, "camera_to_world | world_to_camera");
    idx->add_option("--out", idx_out, "output JSON");

    // --- generate ---
    auto* gen = app.add_subcommand("generate", "Run the full QA generation pipeline");
    std::string gen_config, gen_out = "out";
    std::vector<std::string> gen_scenes;
    std::string gen_scene_root;
    int gen_workers = -1;
    long long gen_seed = -1;
    gen->add_option("--config", gen_config, "pipeline config JSON");
    gen->add_option("--scenes", gen_scenes, "scene directories");
    gen->add_option("--scene-root", gen_scene_root, "directory of scene directories");
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--seed", gen_seed, "override config seed");
    gen->add_option("--workers", gen_workers, "override worker count");

    // --- bench-sample ---
    auto* bench = app.add_subcommand("bench-sample", "Sample a benchmark from a dataset");
    std::string bench_dataset, bench_out = "bench.jsonl";
    int bench_n = 400;
    long long bench_seed = 0;
    bench->add_option("--dataset", bench_dataset, "qa.jsonl")->required();
    bench->add_option("--n", bench_n, "items per task (50 = tiny mode)");
    bench->add_option("--seed", bench_seed, "sampling seed (block index)");
    bench->add_option("--out", bench_out, "output JSONL");

    // --- evaluate ---
    auto* ev = app.add_subcommand("evaluate", "Score responses against a benchmark");
    std::string ev_bench, ev_resp, ev_report = "report.json";
    bool ev_no_baselines = false;
    ev->add_option("--benchmark", ev_bench, "benchmark JSONL")->required();
    ev->add_option("--responses", ev_resp, "responses JSONL of {id, text}")->required();
    ev->add_option("--report", ev_report, "report JSON path");
    ev->add_flag("--no-baselines", ev_no_baselines, "skip chance baselines");

    // --- ground-eval ---
    auto* ge = app.add_subcommand("ground-eval", "Score 3D grounding predictions");
    std::string ge_pred, ge_gt, ge_report = "ground_report.json";
    ge->add_option("--predictions", ge_pred, "predictions JSONL of {id, text}")->required();
    ge->add_option("--ground-truth", ge_gt, "ground truth JSONL")->required();
    ge->add_option("--report", ge_report, "report JSON path");

    // --- bev-eval ---
    auto* be = app.add_subcommand("bev-eval", "BEV coordinate probe scoring");
    std::string be_samples, be_report = "bev_report.json";
    std::vector<double> be_up{0, 0, 1};
    be->add_option("--samples", be_samples, "samples JSONL")->required();
    be->add_option("--report", be_report, "report JSON path");
    be->add_option("--up", be_up, "world up axis (3 values)")->expected(3);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sub) {
            SceneLoadOptions opts;
            opts.pose_convention = sub_pose == "world_to_camera"
                                       ? PoseConvention::WorldToCamera
                                       : PoseConvention::CameraToWorld;
            const SceneBundle scene = load_scene_manifest(sub_scene, opts);
            const SubsampleConfig cfg{sub_dth, sub_theta};
            if (!cfg.is_valid()) throw ValidationError("invalid subsample thresholds");
            const auto kept = subsample_frames(scene.frames, cfg);
            json out;
            out["scene_id"] = scene.scene_id;
            json arr = json::array();
            for (size_t i : kept) arr.push_back(scene.frames[i].frame_index);
            out["kept"] = std::move(arr);
            std::ofstream(sub_out) << out.dump(2) << "\n";
            std::cout << "kept " << kept.size() << " / " << scene.frames.size()
                      << " frames -> " << sub_out << "\n";
        } else if (*idx) {
            SceneLoadOptions opts;
            opts.pose_convention = idx_pose == "world_to_camera"
                                       ? PoseConvention::WorldToCamera
                                       : PoseConvention::CameraToWorld;
            const SceneBundle scene = load_scene_manifest(idx_scene, opts);
            if (!idx_vis.is_valid()) throw ValidationError("invalid visibility settings");
            std::vector<size_t> kept;
            if (!idx_kept.empty()) {
                const json kj = read_json(idx_kept);
                for (const auto& fi : kj.at("kept")) {
                    for (size_t i = 0; i < scene.frames.size(); ++i)
                        if (scene.frames[i].frame_index == fi.get<int>()) kept.push_back(i);
                }
            } else {
                kept.resize(scene.frames.size());
                for (size_t i = 0; i < kept.size(); ++i) kept[i] = i;
            }
            const SceneRecords records = build_records(scene, kept, idx_vis);
            save_records(idx_out, records);
            size_t n_vis = 0;
            for (const auto& r : records.image_records) n_vis += r.visible_objects.size();
            std::cout << records.image_records.size() << " image records, "
                      << records.object_records.size() << " object records, " << n_vis
                      << " placements -> " << idx_out << "\n";
        } else if (*gen) {
            PipelineConfig cfg = gen_config.empty()
                                     ? PipelineConfig{}
                                     : PipelineConfig::from_json_file(gen_config);
            if (gen_seed >= 0) cfg.seed = static_cast<uint64_t>(gen_seed);
            if (gen_workers > 0) cfg.workers = gen_workers;
            cfg.seed = env_or("SPARGEN_SEED", cfg.seed);
            cfg.workers = static_cast<int>(env_or("SPARGEN_WORKERS", cfg.workers));

            std::vector<std::filesystem::path> dirs;
            for (const auto& s : gen_scenes) dirs.emplace_back(s);
            if (!gen_scene_root.empty()) {
                std::vector<std::filesystem::path> found;
                for (const auto& entry :
                     std::filesystem::directory_iterator(gen_scene_root))
                    if (entry.is_directory() &&
                        std::filesystem::exists(entry.path() / "scene.json"))
                        found.push_back(entry.path());
                std::sort(found.begin(), found.end());
                dirs.insert(dirs.end(), found.begin(), found.end());
            }
            if (dirs.empty()) throw ValidationError("no scenes given (--scenes/--scene-root)");

            const RunManifest manifest = run_generate(cfg, dirs, gen_out);
            int total = 0;
            for (const auto& s : manifest.scenes) {
                std::cout << s.scene_id << ": " << s.status;
                if (!s.reason.empty()) std::cout << " (" << s.reason << ")";
                std::cout << ", " << s.n_items << " items\n";
                total += s.n_items;
            }
            std::cout << "total " << total << " items in "
                      << format_fixed(manifest.wall_time_s, 1) << "s -> " << gen_out
                      << "/qa.jsonl\n";
            if (manifest.n_failed() == static_cast<int>(manifest.scenes.size())) return 1;
        } else if (*bench) {
            const auto dataset = load_qa_jsonl(bench_dataset);
            const auto subset =
                sample_benchmark(dataset, bench_n, static_cast<uint64_t>(bench_seed));
            save_qa_jsonl(bench_out, subset);
            std::map<std::string, int> counts;
            for (const auto& item : subset) counts[item.task]++;
            std::cout << subset.size() << " items over " << counts.size() << " tasks -> "
                      << bench_out << "\n";
        } else if (*ev) {
            const auto items = load_qa_jsonl(ev_bench);
            const auto responses = load_responses(ev_resp);
            const EvalReport report = evaluate(items, responses, !ev_no_baselines);
            std::ofstream(ev_report) << report_to_json(report) << "\n";
            print_level_summary(report);
            std::cout << "report -> " << ev_report << "\n";
        } else if (*ge) {
            const auto pred_text = load_responses(ge_pred);
            std::ifstream in(ge_gt);
            if (!in) throw ParseError("cannot open " + ge_gt);
            std::vector<GroundingSample> samples;
            int unparseable = 0;
            std::string line;
            size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                json j = json::parse(line, nullptr, false);
                if (j.is_discarded())
                    throw ParseError(ge_gt + ":" + std::to_string(line_no) +
                                     ": malformed JSON");
                GroundingSample sample;
                sample.ground_truth = box_from_json(j.at("box"), "ground truth");
                if (j.contains("proposals"))
                    for (const auto& p : j["proposals"])
                        sample.proposals.push_back(box_from_json(p, "proposal"));
                const std::string id = j.at("id").get<std::string>();
                const auto it = pred_text.find(id);
                bool lifted = false;
                if (it != pred_text.end()) {
                    if (auto pred = decode_prediction(it->second)) {
                        if (j.contains("frame")) {
                            FrameMeta frame;
                            frame.frame_index = pred->frame_index;
                            frame.pose = pose_from_flat(j["frame"].at("pose"));
                            Mat3 k;
                            for (int r = 0; r < 3; ++r)
                                for (int c = 0; c < 3; ++c)
                                    k(r, c) = j["frame"]["intrinsics"][r * 3 + c].get<double>();
                            frame.camera = CameraModel::from_intrinsics(
                                k, j["frame"].at("width").get<int>(),
                                j["frame"].at("height").get<int>());
                            sample.predicted = lift_to_world(*pred, frame);
                            lifted = true;
                        }
                    }
                }
                if (!lifted) {
                    ++unparseable;  // scores zero IoU against any ground truth
                    sample.predicted.center = sample.ground_truth.center +
                                              Vec3(1e6, 1e6, 1e6);
                    sample.predicted.size = Vec3(1e-3, 1e-3, 1e-3);
                }
                samples.push_back(std::move(sample));
            }
            const GroundingAccuracy acc = grounding_accuracy(samples);
            json out;
            out["n"] = acc.n;
            out["n_unparseable"] = unparseable;
            json accj = json::object();
            for (const auto& [t, v] : acc.raw) {
                json tj;
                tj["raw"] = v;
                tj["refined"] = acc.refined.at(t);
                accj[format_fixed(t, 2)] = std::move(tj);
            }
            out["acc"] = std::move(accj);
            std::ofstream(ge_report) << out.dump(2) << "\n";
            for (const auto& [t, v] : acc.raw)
                std::cout << "acc@" << format_fixed(t, 2) << ": refined "
                          << format_fixed(acc.refined.at(t), 1) << " (" << format_fixed(v, 1)
                          << " raw)\n";
            std::cout << "report -> " << ge_report << "\n";
        } else if (*be) {
            std::ifstream in(be_samples);
            if (!in) throw ParseError("cannot open " + be_samples);
            std::vector<BevSample> samples;
            std::string line;
            size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                json j = json::parse(line, nullptr, false);
                if (j.is_discarded())
                    throw ParseError(be_samples + ":" + std::to_string(line_no) +
                                     ": malformed JSON");
                BevSample sample;
                sample.first_pose = pose_from_flat(j.at("pose"));
                for (const auto& oj : j.at("objects")) {
                    BevObject obj;
                    obj.gt_world = Vec3(oj.at("gt_world")[0].get<double>(),
                                        oj.at("gt_world")[1].get<double>(),
                                        oj.at("gt_world")[2].get<double>());
                    obj.predicted = Vec2(oj.at("pred")[0].get<double>(),
                                         oj.at("pred")[1].get<double>());
                    sample.objects.push_back(obj);
                }
                if (sample.objects.size() < 3 || sample.objects.size() > 7)
                    throw ValidationError(be_samples + ":" + std::to_string(line_no) +
                                          ": bev sample needs 3-7 objects, got " +
                                          std::to_string(sample.objects.size()));
                samples.push_back(std::move(sample));
            }
            const Vec3 up = Vec3(be_up[0], be_up[1], be_up[2]).normalized();
            const BevReport report = bev_ape(samples, up);
            json out;
            out["n_objects"] = report.n_objects;
            out["ape_mean"] = report.mean;
            out["ape_p50"] = report.p50;
            out["ape_p90"] = report.p90;
            json bins = json::array();
            for (const auto& b : report.bins) {
                json bj;
                bj["range"] = {b.range.first,
                               std::isinf(b.range.second) ? json(nullptr) : json(b.range.second)};
                bj["count"] = b.count;
                bj["mean"] = b.mean;
                bj["p90"] = b.p90;
                bins.push_back(std::move(bj));
            }
            out["bins"] = std::move(bins);
            std::ofstream(be_report) << out.dump(2) << "\n";
            std::cout << "APE mean " << format_fixed(report.mean, 3) << ", p50 "
                      << format_fixed(report.p50, 3) << ", p90 "
                      << format_fixed(report.p90, 3) << " over " << report.n_objects
                      << " objects\nreport -> " << be_report << "\n";
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
