#include "spargen/compose.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

namespace spargen {

using nlohmann::json;

// --- serialization --------------------------------------------------------

std::string to_jsonl(const QAItem& item) {
    json j;
    j["id"] = item.id;
    j["scene_id"] = item.scene_id;
    j["task"] = item.task;
    j["qa_type"] = to_string(item.qa_type);
    j["view_mode"] = to_string(item.view_mode);
    j["image_refs"] = item.image_refs;
    j["question"] = item.question;
    j["options"] = item.options;
    j["answer"] = item.answer;
    if (item.gt_numeric)
        j["gt_numeric"] = json{{"value", item.gt_numeric->value}, {"unit", item.gt_numeric->unit}};
    else
        j["gt_numeric"] = nullptr;
    json marks = json::array();
    for (const auto& m : item.marks)
        marks.push_back(json{{"frame_ref", m.frame_ref},
                             {"kind", to_string(m.kind)},
                             {"pixels", m.pixels},
                             {"color", to_string(m.color)}});
    j["marks"] = std::move(marks);
    return j.dump();
}

QAItem qa_item_from_json(const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed QA item line");
    QAItem item;
    item.id = j.at("id").get<std::string>();
    item.scene_id = j.at("scene_id").get<std::string>();
    item.task = j.at("task").get<std::string>();
    item.qa_type = qa_type_from_string(j.at("qa_type").get<std::string>()).value();
    item.view_mode =
        j.at("view_mode").get<std::string>() == "single" ? ViewMode::Single : ViewMode::Multi;
    item.image_refs = j.at("image_refs").get<std::vector<std::string>>();
    item.question = j.at("question").get<std::string>();
    item.options = j.at("options").get<std::vector<std::string>>();
    item.answer = j.at("answer").get<std::string>();
    if (!j.at("gt_numeric").is_null()) {
        GtNumeric gt;
        gt.value = j["gt_numeric"].at("value").get<double>();
        gt.unit = j["gt_numeric"].at("unit").get<std::string>();
        item.gt_numeric = gt;
    }
    for (const auto& mj : j.at("marks")) {
        VisualMark m;
        m.frame_ref = mj.at("frame_ref").get<int>();
        m.kind = mj.at("kind").get<std::string>() == "point" ? MarkKind::Point : MarkKind::Bbox;
        m.pixels = mj.at("pixels").get<std::vector<double>>();
        const std::string c = mj.at("color").get<std::string>();
        m.color = c == "red" ? MarkColor::Red : (c == "green" ? MarkColor::Green : MarkColor::Blue);
        item.marks.push_back(std::move(m));
    }
    return item;
}

QAItem instantiate(const Template& tmpl, const BindingMap& bindings,
                   const std::vector<VisualMark>& marks) {
    QAItem item;
    item.qa_type = tmpl.qa_type;
    item.question = fill_placeholders(tmpl.text, bindings);
    if (tmpl.qa_type == QaType::Sentence)
        item.answer = fill_placeholders(tmpl.answer_text, bindings);
    item.marks = marks;
    return item;
}

// --- rendering helpers ----------------------------------------------------

namespace {

constexpr const char* kMainViewNote =
    " We use the first image to reflect the main perspective, which aligns with the "
    "observer's viewpoint.";

std::string meters(double v) { return format_fixed(v, 1); }

std::string join_options(const std::vector<std::string>& options) {
    std::string s;
    for (size_t i = 0; i < options.size(); ++i) {
        if (i) s += "; ";
        s += static_cast<char>('A' + i);
        s += ". ";
        s += options[i];
    }
    return s;
}

std::string letters_phrase(size_t n) {
    std::string s;
    for (size_t i = 0; i < n; ++i) {
        if (i) s += (i + 1 == n && n > 2) ? " or " : ", ";
        s += static_cast<char>('A' + i);
    }
    return s;
}

std::string relation_pos_phrase(const SpatialRelation& rel) {
    const std::string lr = side_word(rel.left_right);
    const std::string ab = side_word(rel.above_below);
    if (!lr.empty() && !ab.empty()) return "to the " + lr + " " + ab;
    if (!lr.empty()) return "to the " + lr;
    if (!ab.empty()) return "to the " + ab;
    return "at a similar lateral position";
}

std::string relation_fb_phrase(const SpatialRelation& rel) {
    if (rel.front_behind == Side::Front) return "to the front";
    if (rel.front_behind == Side::Behind) return "to the behind";
    return "at a similar depth";
}

std::string bbox_string(const BBox2D& b) {
    return "(" + std::to_string(std::lround(b.x_min)) + ", " +
           std::to_string(std::lround(b.y_min)) + ", " + std::to_string(std::lround(b.x_max)) +
           ", " + std::to_string(std::lround(b.y_max)) + ")";
}

std::string motion_field(double value, const char* pos, const char* neg, bool degrees) {
    const char* word = value > 0 ? pos : neg;
    const double mag = std::abs(value);
    return std::string(word) + ": " + (degrees ? format_fixed(mag, 0) : format_fixed(mag, 1));
}

std::string render_motion(const MotionDescriptor& m) {
    return motion_field(m.move_right, "move right", "move left", false) + ", " +
           motion_field(m.move_down, "move down", "move up", false) + ", " +
           motion_field(m.move_forward, "move forward", "move back", false) + ", " +
           motion_field(m.rotate_down, "rotate down", "rotate up", true) + ", " +
           motion_field(m.rotate_right, "rotate right", "rotate left", true);
}

std::string motion_prose(const MotionDescriptor& m) {
    auto move_part = [](double v, const char* pos, const char* neg) {
        return "move " + format_fixed(std::abs(v), 1) + " meters " + (v > 0 ? pos : neg);
    };
    auto rot_part = [](double v, const char* pos, const char* neg) {
        return "rotate " + format_fixed(std::abs(v), 0) + " degrees " + (v > 0 ? pos : neg);
    };
    return move_part(m.move_right, "right", "left") + ", " +
           move_part(m.move_down, "down", "up") + ", " +
           move_part(m.move_forward, "forward", "back") + ", " +
           rot_part(m.rotate_down, "down", "up") + ", and " +
           rot_part(m.rotate_right, "right", "left");
}

std::string pose_answer_string(const CameraPoseProjection& p) {
    return "(" + format_fixed(std::round(p.u), 0) + ", " + format_fixed(std::round(p.v), 0) +
           "), " + format_fixed(round_to_step(p.depth, 0.1), 1);
}

std::string pose_option_string(double u, double v, double depth) {
    return "Image Coor: (" + format_fixed(std::round(u), 0) + ", " +
           format_fixed(std::round(v), 0) + "), Depth: " +
           format_fixed(round_to_step(depth, 0.1), 1) + " meters";
}

bool mark_in_bounds(const VisualMark& mark, const CameraModel& cam) {
    for (size_t i = 0; i + 1 < mark.pixels.size(); i += 2) {
        if (mark.pixels[i] < 0 || mark.pixels[i] > cam.width) return false;
        if (mark.pixels[i + 1] < 0 || mark.pixels[i + 1] > cam.height) return false;
    }
    return true;
}

VisualMark point_mark(int frame, const Vec2& uv, MarkColor color) {
    VisualMark m;
    m.frame_ref = frame;
    m.kind = MarkKind::Point;
    m.pixels = {uv.x(), uv.y()};
    m.color = color;
    return m;
}

VisualMark bbox_mark(int frame, const BBox2D& b, MarkColor color) {
    VisualMark m;
    m.frame_ref = frame;
    m.kind = MarkKind::Bbox;
    m.pixels = {b.x_min, b.y_min, b.x_max, b.y_max};
    m.color = color;
    return m;
}

// --- generation context ---------------------------------------------------

struct GenContext {
    const SceneBundle& scene;
    const SceneRecords& records;
    const TemplateBank& bank;
    const RelationConfig& rel_cfg;
    const RoomAreaParams& room;
    const TaskInfo& task;
    int max_items;
    Rng rng;
    std::vector<QAItem> items;
    std::map<std::string, int>& skips;

    const ObjectAnnotation* ann(int object_id) const { return scene.object_by_id(object_id); }

    const FrameMeta* meta(int frame_index) const { return scene.frame_by_index(frame_index); }

    void skip(const std::string& reason) { skips[reason]++; }
    void skip(Skip s) { skips[to_string(s)]++; }
    void skip(ProjectReject r) { skips[to_string(r)]++; }

    // Frames that carry at least one visible object.
    std::vector<const ImageRecord*> populated_frames() const {
        std::vector<const ImageRecord*> out;
        for (const auto& rec : records.image_records)
            if (!rec.visible_objects.empty()) out.push_back(&rec);
        return out;
    }

    bool label_unique(const std::string& label) const {
        int n = 0;
        for (const auto& o : scene.objects)
            if (o.label == label) ++n;
        return n == 1;
    }
};

// Ordered frame list for a multi-view item: the required frames first (main
// view in front), padded with frames co-visible with `object_ids`, then any
// kept frames. Empty when fewer than 3 distinct frames exist.
std::vector<int> mv_image_list(const GenContext& ctx, std::vector<int> must,
                               const std::vector<int>& object_ids) {
    std::vector<int> list;
    for (int f : must)
        if (std::find(list.begin(), list.end(), f) == list.end()) list.push_back(f);

    auto add_from = [&](auto predicate) {
        for (const auto& rec : ctx.records.image_records) {
            if (list.size() >= 3) return;
            if (std::find(list.begin(), list.end(), rec.frame_index) != list.end()) continue;
            if (predicate(rec)) list.push_back(rec.frame_index);
        }
    };
    add_from([&](const ImageRecord& rec) {
        for (int id : object_ids)
            if (rec.find(id)) return true;
        return false;
    });
    add_from([](const ImageRecord&) { return true; });

    if (list.size() < 3 || list.size() > 5) return {};
    return list;
}

// Shared finalization: resolve the template, attach options, validate and
// store the item.
bool emit(GenContext& ctx, QaType qa_type, BindingMap bindings,
          std::vector<VisualMark> marks, const std::vector<int>& frame_list,
          const OptionSet* opts, const std::string& fill_answer,
          std::optional<GtNumeric> gt) {
    if (frame_list.empty()) {
        ctx.skip("NoImages");
        return false;
    }
    if (ctx.task.view_mode == ViewMode::Multi && frame_list.size() < 3) {
        ctx.skip("NoImages");
        return false;
    }
    for (const auto& m : marks) {
        const FrameMeta* fm = ctx.meta(m.frame_ref);
        if (!fm || !mark_in_bounds(m, fm->camera)) {
            ctx.skip("MarkOutOfBounds");
            return false;
        }
    }

    bindings["main_view_note"] =
        ctx.task.view_mode == ViewMode::Multi ? kMainViewNote : "";
    if (opts) {
        bindings["options"] = join_options(opts->options);
        bindings["letters"] = letters_phrase(opts->options.size());
    }

    const auto& templates = ctx.bank.get(ctx.task.template_family, qa_type);
    const Template& tmpl = templates[ctx.rng.uniform_int(templates.size())];

    QAItem item = instantiate(tmpl, bindings, marks);
    item.scene_id = ctx.scene.scene_id;
    item.task = ctx.task.name;
    item.view_mode = ctx.task.view_mode;
    item.gt_numeric = gt;
    char serial[16];
    std::snprintf(serial, sizeof(serial), "%04zu", ctx.items.size());
    item.id = ctx.scene.scene_id + ":" + ctx.task.name + ":" + serial;
    for (int f : frame_list) {
        const FrameMeta* fm = ctx.meta(f);
        item.image_refs.push_back(ctx.scene.scene_id + "/" + fm->image_path);
    }
    if (qa_type == QaType::Select) {
        item.options = opts->options;
        item.answer = std::string(1, opts->answer_letter());
    } else if (qa_type == QaType::Fill) {
        item.answer = fill_answer;
    }

    // Final invariants before the item leaves the composer.
    if (item.qa_type == QaType::Select &&
        (item.options.size() < 2 || item.options.size() > 4)) {
        ctx.skip("BadOptions");
        return false;
    }
    if (item.view_mode == ViewMode::Single && item.image_refs.size() != 1) {
        ctx.skip("NoImages");
        return false;
    }
    if (item.qa_type == QaType::Fill && item.gt_numeric) {
        const double reparsed = std::atof(item.answer.c_str());
        if (reparsed != item.gt_numeric->value) {
            ctx.skip("NumericRoundtrip");
            return false;
        }
    }
    ctx.items.push_back(std::move(item));
    return true;
}

QaType next_qa_type(const GenContext& ctx) {
    return ctx.task.qa_types[ctx.items.size() % ctx.task.qa_types.size()];
}

int attempt_budget(const GenContext& ctx) { return ctx.max_items * 60 + 40; }

// --- depth / distance generators -------------------------------------------

void gen_depth_oc(GenContext& ctx) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];
        const ObjectInView& ref = main->visible_objects[ctx.rng.uniform_int(
            main->visible_objects.size())];

        // Target: co-visible object (single) or any object record (multi).
        int tgt_id = -1, tgt_frame = main->frame_index;
        if (mv) {
            const auto& recs = ctx.records.object_records;
            const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
            if (cand.object_id == ref.object_id || cand.frame_indices.empty()) continue;
            tgt_id = cand.object_id;
            tgt_frame = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
        } else {
            const ObjectInView& cand = main->visible_objects[ctx.rng.uniform_int(
                main->visible_objects.size())];
            if (cand.object_id == ref.object_id) continue;
            tgt_id = cand.object_id;
        }
        const std::string key = std::to_string(main->frame_index) + ":" +
                                std::to_string(ref.object_id) + ":" + std::to_string(tgt_id);
        if (!seen.insert(key).second) continue;

        const Vec3 tgt_cam = world_to_camera(main->pose, ctx.ann(tgt_id)->box.center);
        if (tgt_cam.z() <= 0.05 || ref.center_cam.z() <= 0.05) {
            ctx.skip(Skip::BehindCamera);
            continue;
        }
        const double d_ref = depth_of(ref.center_cam, ctx.rel_cfg);
        const double d_tgt = depth_of(tgt_cam, ctx.rel_cfg);
        if (d_ref < 0.1 || d_tgt < 0.1) {
            ctx.skip(Skip::TooClose);
            continue;
        }

        const ObjectInView* tgt_view = ctx.records.image(tgt_frame)->find(tgt_id);
        if (!tgt_view) continue;

        BindingMap b;
        b["label_A"] = ctx.ann(ref.object_id)->label;
        b["label_B"] = ctx.ann(tgt_id)->label;
        b["depth_A"] = meters(d_ref);
        b["depth_B"] = meters(d_tgt);

        std::vector<VisualMark> marks{
            point_mark(main->frame_index, ref.center_2d, MarkColor::Red),
            point_mark(tgt_frame, tgt_view->center_2d, MarkColor::Blue)};

        const std::vector<int> list =
            mv ? mv_image_list(ctx, {main->frame_index, tgt_frame}, {ref.object_id, tgt_id})
               : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_numeric_options(d_tgt, ctx.rel_cfg.round_step, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "",
                 GtNumeric{d_tgt, "meters"});
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr, meters(d_tgt),
                 GtNumeric{d_tgt, "meters"});
        }
    }
}

void gen_depth_oo(GenContext& ctx) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];
        const ObjectInView& a = main->visible_objects[ctx.rng.uniform_int(
            main->visible_objects.size())];

        int b_id = -1, b_frame = main->frame_index;
        if (mv) {
            const auto& recs = ctx.records.object_records;
            const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
            if (cand.object_id == a.object_id || cand.frame_indices.empty()) continue;
            b_id = cand.object_id;
            b_frame = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
        } else {
            const ObjectInView& cand = main->visible_objects[ctx.rng.uniform_int(
                main->visible_objects.size())];
            if (cand.object_id == a.object_id) continue;
            b_id = cand.object_id;
        }
        std::string key = std::to_string(main->frame_index) + ":";
        key += std::to_string(std::min(a.object_id, b_id)) + ":" +
               std::to_string(std::max(a.object_id, b_id));
        if (!seen.insert(key).second) continue;

        const Vec3 b_cam = world_to_camera(main->pose, ctx.ann(b_id)->box.center);
        if (b_cam.z() <= 0.05) {
            ctx.skip(Skip::BehindCamera);
            continue;
        }
        const double delta = relative_depth(a.center_cam.z(), b_cam.z());
        if (delta < ctx.rel_cfg.indist_threshold) {
            ctx.skip(Skip::TooClose);
            continue;
        }
        // Same-view pairs with overlapping 2D boxes are ambiguous to point at.
        const ObjectInView* b_in_main = main->find(b_id);
        if (b_in_main && a.bbox2d.overlaps(b_in_main->bbox2d)) {
            ctx.skip(Skip::Overlap);
            continue;
        }
        const ObjectInView* b_view = ctx.records.image(b_frame)->find(b_id);
        if (!b_view) continue;

        const double gt = round_to_step(delta, ctx.rel_cfg.round_step);

        BindingMap bind;
        bind["label_A"] = ctx.ann(a.object_id)->label;
        bind["label_B"] = ctx.ann(b_id)->label;
        bind["delta_depth"] = meters(gt);

        std::vector<VisualMark> marks{point_mark(main->frame_index, a.center_2d, MarkColor::Red),
                                      point_mark(b_frame, b_view->center_2d, MarkColor::Blue)};
        const std::vector<int> list =
            mv ? mv_image_list(ctx, {main->frame_index, b_frame}, {a.object_id, b_id})
               : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_numeric_options(gt, ctx.rel_cfg.round_step, ctx.rng);
            emit(ctx, type, std::move(bind), std::move(marks), list, &opts, "",
                 GtNumeric{gt, "meters"});
        } else {
            emit(ctx, type, std::move(bind), std::move(marks), list, nullptr, meters(gt),
                 GtNumeric{gt, "meters"});
        }
    }
}

void gen_dist_oc(GenContext& ctx) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];
        int obj_id = -1, obj_frame = main->frame_index;
        if (mv) {
            const auto& recs = ctx.records.object_records;
            const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
            if (cand.frame_indices.empty()) continue;
            obj_id = cand.object_id;
            obj_frame = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
        } else {
            obj_id = main->visible_objects[ctx.rng.uniform_int(main->visible_objects.size())]
                         .object_id;
        }
        const std::string key =
            std::to_string(main->frame_index) + ":" + std::to_string(obj_id);
        if (!seen.insert(key).second) continue;

        const Vec3 c_cam = world_to_camera(main->pose, ctx.ann(obj_id)->box.center);
        const double gt = distance_oc(c_cam, ctx.rel_cfg);
        if (gt < 0.1) {
            ctx.skip(Skip::TooClose);
            continue;
        }
        const ObjectInView* view = ctx.records.image(obj_frame)->find(obj_id);
        if (!view) continue;

        BindingMap b;
        b["label_A"] = ctx.ann(obj_id)->label;
        b["dist"] = meters(gt);
        std::vector<VisualMark> marks{point_mark(obj_frame, view->center_2d, MarkColor::Red)};
        const std::vector<int> list =
            mv ? mv_image_list(ctx, {main->frame_index, obj_frame}, {obj_id})
               : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_numeric_options(gt, ctx.rel_cfg.round_step, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "",
                 GtNumeric{gt, "meters"});
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr, meters(gt),
                 GtNumeric{gt, "meters"});
        }
    }
}

void gen_dist_oo(GenContext& ctx) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];
        const ObjectInView& a = main->visible_objects[ctx.rng.uniform_int(
            main->visible_objects.size())];
        int b_id = -1, b_frame = main->frame_index;
        if (mv) {
            const auto& recs = ctx.records.object_records;
            const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
            if (cand.object_id == a.object_id || cand.frame_indices.empty()) continue;
            b_id = cand.object_id;
            b_frame = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
        } else {
            const ObjectInView& cand = main->visible_objects[ctx.rng.uniform_int(
                main->visible_objects.size())];
            if (cand.object_id == a.object_id) continue;
            b_id = cand.object_id;
        }
        std::string key = std::to_string(std::min(a.object_id, b_id)) + ":" +
                          std::to_string(std::max(a.object_id, b_id)) + "@" +
                          std::to_string(main->frame_index);
        if (!seen.insert(key).second) continue;

        const ObjectAnnotation* ann_a = ctx.ann(a.object_id);
        const ObjectAnnotation* ann_b = ctx.ann(b_id);
        const Vec3 b_cam = world_to_camera(main->pose, ann_b->box.center);
        const auto dist =
            distance_oo(a.center_cam, b_cam, ann_a->box, ann_b->box, ctx.rel_cfg);
        if (!dist.ok()) {
            ctx.skip(dist.reason());
            continue;
        }
        const ObjectInView* b_view = ctx.records.image(b_frame)->find(b_id);
        if (!b_view) continue;

        BindingMap bind;
        bind["label_A"] = ann_a->label;
        bind["label_B"] = ann_b->label;
        bind["dist"] = meters(dist.value());
        std::vector<VisualMark> marks{point_mark(main->frame_index, a.center_2d, MarkColor::Red),
                                      point_mark(b_frame, b_view->center_2d, MarkColor::Blue)};
        const std::vector<int> list =
            mv ? mv_image_list(ctx, {main->frame_index, b_frame}, {a.object_id, b_id})
               : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts =
                make_numeric_options(dist.value(), ctx.rel_cfg.round_step, ctx.rng);
            emit(ctx, type, std::move(bind), std::move(marks), list, &opts, "",
                 GtNumeric{dist.value(), "meters"});
        } else {
            emit(ctx, type, std::move(bind), std::move(marks), list, nullptr,
                 meters(dist.value()), GtNumeric{dist.value(), "meters"});
        }
    }
}

void gen_disti_oo(GenContext& ctx) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];
        if (main->visible_objects.empty()) continue;
        const ObjectInView& anchor = main->visible_objects[ctx.rng.uniform_int(
            main->visible_objects.size())];

        auto pick_other = [&](int excl_a, int excl_b, int& frame_out) -> int {
            if (mv) {
                const auto& recs = ctx.records.object_records;
                const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
                if (cand.object_id == excl_a || cand.object_id == excl_b ||
                    cand.frame_indices.empty())
                    return -1;
                frame_out = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
                return cand.object_id;
            }
            const ObjectInView& cand = main->visible_objects[ctx.rng.uniform_int(
                main->visible_objects.size())];
            if (cand.object_id == excl_a || cand.object_id == excl_b) return -1;
            frame_out = main->frame_index;
            return cand.object_id;
        };

        int frame_b = 0, frame_c = 0;
        const int id_b = pick_other(anchor.object_id, -1, frame_b);
        if (id_b < 0) continue;
        const int id_c = pick_other(anchor.object_id, id_b, frame_c);
        if (id_c < 0) continue;
        const std::string key =
            std::to_string(anchor.object_id) + ":" + std::to_string(id_b) + ":" +
            std::to_string(id_c) + "@" + std::to_string(main->frame_index);
        if (!seen.insert(key).second) continue;

        const ObjectAnnotation* ann_a = ctx.ann(anchor.object_id);
        const ObjectAnnotation* ann_b = ctx.ann(id_b);
        const ObjectAnnotation* ann_c = ctx.ann(id_c);
        if (ann_b->label == ann_c->label) {
            ctx.skip(Skip::Ambiguous);
            continue;
        }
        if (obb_overlap(ann_a->box, ann_b->box) || obb_overlap(ann_a->box, ann_c->box) ||
            obb_overlap(ann_b->box, ann_c->box)) {
            ctx.skip(Skip::Overlap);
            continue;
        }
        const auto pick =
            nearer_of(ann_a->box.center, ann_b->box.center, ann_c->box.center, ctx.rel_cfg);
        if (!pick.ok()) {
            ctx.skip(pick.reason());
            continue;
        }
        const bool ask_closer = ctx.rng.coin();
        const bool b_is_closer = pick.value() == NearerPick::B;
        const std::string winner = (ask_closer == b_is_closer) ? ann_b->label : ann_c->label;

        const double d_b = (ann_a->box.center - ann_b->box.center).norm();
        const double d_c = (ann_a->box.center - ann_c->box.center).norm();

        const ObjectInView* view_b = ctx.records.image(frame_b)->find(id_b);
        const ObjectInView* view_c = ctx.records.image(frame_c)->find(id_c);
        if (!view_b || !view_c) continue;

        BindingMap b;
        b["label_A"] = ann_a->label;
        b["label_B"] = ann_b->label;
        b["label_C"] = ann_c->label;
        b["cmp"] = ask_closer ? "closer" : "farther";
        b["dist_B"] = meters(round_to_step(d_b, ctx.rel_cfg.round_step));
        b["dist_C"] = meters(round_to_step(d_c, ctx.rel_cfg.round_step));
        b["answer_label"] = winner;

        std::vector<VisualMark> marks{
            point_mark(main->frame_index, anchor.center_2d, MarkColor::Red),
            point_mark(frame_b, view_b->center_2d, MarkColor::Green),
            point_mark(frame_c, view_c->center_2d, MarkColor::Blue)};
        const std::vector<int> list =
            mv ? mv_image_list(ctx, {main->frame_index, frame_b, frame_c},
                               {anchor.object_id, id_b, id_c})
               : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts =
                make_string_options(winner, {ann_b->label, ann_c->label}, 2, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "", std::nullopt);
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr, winner,
                 std::nullopt);
        }
    }
}

// --- relation generators ----------------------------------------------------

void gen_objrel(GenContext& ctx, bool object_object) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];

        int a_id = -1, a_frame = main->frame_index;
        if (mv) {
            const auto& recs = ctx.records.object_records;
            const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
            if (cand.frame_indices.empty()) continue;
            a_id = cand.object_id;
            a_frame = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
        } else {
            a_id = main->visible_objects[ctx.rng.uniform_int(main->visible_objects.size())]
                       .object_id;
        }

        int b_id = -1, b_frame = main->frame_index;
        if (object_object) {
            if (mv) {
                const auto& recs = ctx.records.object_records;
                const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
                if (cand.object_id == a_id || cand.frame_indices.empty()) continue;
                b_id = cand.object_id;
                b_frame = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
            } else {
                const ObjectInView& cand = main->visible_objects[ctx.rng.uniform_int(
                    main->visible_objects.size())];
                if (cand.object_id == a_id) continue;
                b_id = cand.object_id;
            }
        }
        const std::string key = std::to_string(a_id) + ":" + std::to_string(b_id) + "@" +
                                std::to_string(main->frame_index);
        if (!seen.insert(key).second) continue;

        const Vec3 a_cam = world_to_camera(main->pose, ctx.ann(a_id)->box.center);
        SpatialRelation rel;
        if (object_object) {
            const Vec3 b_cam = world_to_camera(main->pose, ctx.ann(b_id)->box.center);
            rel = relation_between(a_cam, b_cam, ctx.rel_cfg);
        } else {
            rel = relation_to_observer(a_cam, ctx.rel_cfg);
        }
        if (rel.left_right == Side::None && rel.above_below == Side::None &&
            rel.front_behind == Side::None) {
            ctx.skip(Skip::Ambiguous);
            continue;
        }

        const ObjectInView* a_view = ctx.records.image(a_frame)->find(a_id);
        if (!a_view) continue;
        std::vector<VisualMark> marks{bbox_mark(a_frame, a_view->bbox2d, MarkColor::Red)};
        std::vector<int> object_ids{a_id};
        BindingMap b;
        b["label_A"] = ctx.ann(a_id)->label;
        if (object_object) {
            const ObjectInView* b_view = ctx.records.image(b_frame)->find(b_id);
            if (!b_view) continue;
            marks.push_back(bbox_mark(b_frame, b_view->bbox2d, MarkColor::Blue));
            object_ids.push_back(b_id);
            b["label_B"] = ctx.ann(b_id)->label;
        }
        b["rel_pos"] = relation_pos_phrase(rel);
        b["rel_fb"] = relation_fb_phrase(rel);

        std::vector<int> must{main->frame_index, a_frame};
        if (object_object) must.push_back(b_frame);
        const std::vector<int> list =
            mv ? mv_image_list(ctx, must, object_ids) : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_relation_options(rel, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "", std::nullopt);
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr, "", std::nullopt);
        }
    }
}

void gen_spimag(GenContext& ctx, bool object_object) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    const bool mv = ctx.task.view_mode == ViewMode::Multi;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];

        // Sample the anchor trio (+ relatum for OO) among visible objects.
        auto pick = [&](std::vector<int>& excl, int& frame_out) -> int {
            if (mv) {
                const auto& recs = ctx.records.object_records;
                const ObjectRecord& cand = recs[ctx.rng.uniform_int(recs.size())];
                if (cand.frame_indices.empty()) return -1;
                for (int e : excl)
                    if (cand.object_id == e) return -1;
                frame_out = cand.frame_indices[ctx.rng.uniform_int(cand.frame_indices.size())];
                return cand.object_id;
            }
            const ObjectInView& cand = main->visible_objects[ctx.rng.uniform_int(
                main->visible_objects.size())];
            for (int e : excl)
                if (cand.object_id == e) return -1;
            frame_out = main->frame_index;
            return cand.object_id;
        };

        std::vector<int> used;
        int fa = 0, fb = 0, fc = 0, fd = 0;
        const int id_a = pick(used, fa);
        if (id_a < 0) continue;
        used.push_back(id_a);
        const int id_b = pick(used, fb);
        if (id_b < 0) continue;
        used.push_back(id_b);
        const int id_c = pick(used, fc);
        if (id_c < 0) continue;
        used.push_back(id_c);
        int id_d = -1;
        if (object_object) {
            id_d = pick(used, fd);
            if (id_d < 0) continue;
            used.push_back(id_d);
        }
        std::string key;
        for (int id : used) key += std::to_string(id) + ":";
        key += "@" + std::to_string(main->frame_index);
        if (!seen.insert(key).second) continue;

        // The face-to object is referenced by label only in the OO variant.
        if (object_object && !ctx.label_unique(ctx.ann(id_b)->label)) {
            ctx.skip(Skip::Ambiguous);
            continue;
        }

        const Vec3 c_a = ctx.ann(id_a)->box.center;
        const Vec3 c_b = ctx.ann(id_b)->box.center;
        const Vec3 c_c = ctx.ann(id_c)->box.center;
        std::optional<Vec3> c_d;
        if (object_object) c_d = ctx.ann(id_d)->box.center;

        const auto change = imagined_relation(c_a, c_b, c_c, c_d, main->pose,
                                              ctx.scene.up_axis, ctx.rel_cfg);
        if (!change.ok()) {
            ctx.skip(change.reason());
            continue;
        }
        const SpatialRelation& after = change.value().after;
        if (after.left_right == Side::None && after.above_below == Side::None &&
            after.front_behind == Side::None) {
            ctx.skip(Skip::Ambiguous);
            continue;
        }

        const ObjectInView* view_a = ctx.records.image(fa)->find(id_a);
        const ObjectInView* view_c = ctx.records.image(fc)->find(id_c);
        if (!view_a || !view_c) continue;

        BindingMap b;
        b["label_A"] = ctx.ann(id_a)->label;
        b["label_B"] = ctx.ann(id_b)->label;
        b["label_C"] = ctx.ann(id_c)->label;
        b["rel_before_pos"] = relation_pos_phrase(change.value().before);
        b["rel_before_fb"] = relation_fb_phrase(change.value().before);
        b["rel_after_pos"] = relation_pos_phrase(after);
        b["rel_after_fb"] = relation_fb_phrase(after);

        std::vector<VisualMark> marks{bbox_mark(fa, view_a->bbox2d, MarkColor::Green),
                                      bbox_mark(fc, view_c->bbox2d, MarkColor::Red)};
        std::vector<int> must{main->frame_index, fa, fc};
        std::vector<int> ids{id_a, id_c};
        if (object_object) {
            const ObjectInView* view_d = ctx.records.image(fd)->find(id_d);
            if (!view_d) continue;
            b["label_D"] = ctx.ann(id_d)->label;
            marks.push_back(bbox_mark(fd, view_d->bbox2d, MarkColor::Blue));
            must.push_back(fd);
            ids.push_back(id_d);
        } else {
            const ObjectInView* view_b = ctx.records.image(fb)->find(id_b);
            if (!view_b) continue;
            marks.push_back(bbox_mark(fb, view_b->bbox2d, MarkColor::Blue));
            must.push_back(fb);
            ids.push_back(id_b);
        }

        const std::vector<int> list =
            mv ? mv_image_list(ctx, must, ids) : std::vector<int>{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_relation_options(after, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "", std::nullopt);
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr, "", std::nullopt);
        }
    }
}

// --- cross-view generators ---------------------------------------------------

void gen_posmatch(GenContext& ctx) {
    std::vector<const ObjectRecord*> multi;
    for (const auto& rec : ctx.records.object_records)
        if (rec.frame_indices.size() >= 2) multi.push_back(&rec);
    if (multi.empty()) return;

    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ObjectRecord* rec = multi[ctx.rng.uniform_int(multi.size())];
        auto match = position_match_sample(*rec, ctx.records, ctx.rng);
        if (!match.ok()) {
            ctx.skip(match.reason());
            continue;
        }
        const PositionMatch& pm = match.value();
        const std::string key = std::to_string(rec->object_id) + ":" +
                                std::to_string(pm.frame_a) + ":" + std::to_string(pm.frame_b);
        if (!seen.insert(key).second) continue;

        const std::string gt = bbox_string(pm.bbox_b);

        BindingMap b;
        b["label_A"] = rec->label;
        b["bbox_A"] = bbox_string(pm.bbox_a);

        std::vector<VisualMark> marks{bbox_mark(pm.frame_a, pm.bbox_a, MarkColor::Red)};
        const std::vector<int> list =
            mv_image_list(ctx, {pm.frame_a, pm.frame_b}, {rec->object_id});

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            // Distractors: other boxes in the target frame, then jittered copies.
            std::vector<std::string> pool;
            const ImageRecord* target = ctx.records.image(pm.frame_b);
            for (const auto& other : target->visible_objects)
                if (other.object_id != rec->object_id)
                    pool.push_back(bbox_string(other.bbox2d));
            const double w = pm.bbox_b.x_max - pm.bbox_b.x_min;
            const double h = pm.bbox_b.y_max - pm.bbox_b.y_min;
            for (int k = 0; k < 6; ++k) {
                BBox2D fake = pm.bbox_b;
                const double dx = (ctx.rng.uniform(0.3, 1.2)) * (ctx.rng.coin() ? w : -w);
                const double dy = (ctx.rng.uniform(0.3, 1.2)) * (ctx.rng.coin() ? h : -h);
                fake.x_min += dx;
                fake.x_max += dx;
                fake.y_min += dy;
                fake.y_max += dy;
                pool.push_back(bbox_string(fake));
            }
            const OptionSet opts = make_string_options(gt, pool, 4, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "", std::nullopt);
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr, gt, std::nullopt);
        }
    }
}

// Frame pairs sharing at least one visible object.
std::vector<std::pair<int, int>> covisible_pairs(const GenContext& ctx) {
    std::vector<std::pair<int, int>> pairs;
    const auto& imgs = ctx.records.image_records;
    for (size_t i = 0; i < imgs.size(); ++i)
        for (size_t j = 0; j < imgs.size(); ++j) {
            if (i == j) continue;
            bool shared = false;
            for (const auto& o : imgs[i].visible_objects)
                if (imgs[j].find(o.object_id)) {
                    shared = true;
                    break;
                }
            if (shared) pairs.emplace_back(imgs[i].frame_index, imgs[j].frame_index);
        }
    return pairs;
}

void gen_cammotion(GenContext& ctx) {
    const auto pairs = covisible_pairs(ctx);
    if (pairs.empty()) return;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const auto [fa, fb] = pairs[ctx.rng.uniform_int(pairs.size())];
        const std::string key = std::to_string(fa) + ":" + std::to_string(fb);
        if (!seen.insert(key).second) continue;

        const FrameMeta* meta_a = ctx.meta(fa);
        const FrameMeta* meta_b = ctx.meta(fb);
        const auto proj = camera_pose_projection(*meta_a, meta_b->pose, ctx.rel_cfg);
        if (!proj.ok()) {
            ctx.skip(proj.reason());
            continue;
        }
        const CameraPoseProjection& p = proj.value();

        BindingMap b;
        b["u"] = format_fixed(std::round(p.u), 0);
        b["v"] = format_fixed(std::round(p.v), 0);
        b["pose_depth"] = meters(round_to_step(p.depth, 0.1));

        const std::vector<int> list = mv_image_list(ctx, {fa, fb}, {});

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            std::vector<std::string> pool;
            for (int k = 0; k < 6; ++k) {
                const double du = ctx.rng.uniform(120, 450) * (ctx.rng.coin() ? 1 : -1);
                const double dv = ctx.rng.uniform(120, 450) * (ctx.rng.coin() ? 1 : -1);
                const double dd = ctx.rng.uniform(0.3, 0.9) * (ctx.rng.coin() ? 1 : -1);
                pool.push_back(pose_option_string(std::clamp(p.u + du, 0.0, 1000.0),
                                                  std::clamp(p.v + dv, 0.0, 1000.0),
                                                  std::max(0.2, p.depth * (1 + dd))));
            }
            const OptionSet opts =
                make_string_options(pose_option_string(p.u, p.v, p.depth), pool, 4, ctx.rng);
            emit(ctx, type, std::move(b), {}, list, &opts, "", std::nullopt);
        } else {
            emit(ctx, type, std::move(b), {}, list, nullptr, pose_answer_string(p),
                 std::nullopt);
        }
    }
}

void gen_viewchgi(GenContext& ctx) {
    const auto pairs = covisible_pairs(ctx);
    if (pairs.empty()) return;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const auto [fa, fb] = pairs[ctx.rng.uniform_int(pairs.size())];
        const std::string key = std::to_string(fa) + ":" + std::to_string(fb);
        if (!seen.insert(key).second) continue;

        const MotionDescriptor m =
            view_change(ctx.meta(fa)->pose, ctx.meta(fb)->pose, ctx.rel_cfg);

        BindingMap b;
        b["motion_prose"] = motion_prose(m);
        const std::vector<int> list = mv_image_list(ctx, {fa, fb}, {});
        emit(ctx, next_qa_type(ctx), std::move(b), {}, list, nullptr, render_motion(m),
             std::nullopt);
    }
}

// --- scene-level generators ---------------------------------------------------

void gen_objvol(GenContext& ctx) {
    const auto frames = ctx.populated_frames();
    if (frames.empty()) return;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const ImageRecord* main = frames[ctx.rng.uniform_int(frames.size())];
        const ObjectInView& o = main->visible_objects[ctx.rng.uniform_int(
            main->visible_objects.size())];
        const std::string key =
            std::to_string(main->frame_index) + ":" + std::to_string(o.object_id);
        if (!seen.insert(key).second) continue;

        const ObjectDims dims = object_dims(ctx.ann(o.object_id)->box);
        const double gt = round_to_step(dims.volume_cm3, 1.0);
        if (gt < 1) {
            ctx.skip(Skip::TooSmall);
            continue;
        }

        BindingMap b;
        b["label_A"] = ctx.ann(o.object_id)->label;
        b["volume"] = format_fixed(gt, 0);
        std::vector<VisualMark> marks{bbox_mark(main->frame_index, o.bbox2d, MarkColor::Red)};
        const std::vector<int> list{main->frame_index};

        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_numeric_options(gt, 1.0, ctx.rng);
            emit(ctx, type, std::move(b), std::move(marks), list, &opts, "",
                 GtNumeric{gt, "cm^3"});
        } else {
            emit(ctx, type, std::move(b), std::move(marks), list, nullptr,
                 format_fixed(gt, 0), GtNumeric{gt, "cm^3"});
        }
    }
}

void gen_objcount(GenContext& ctx) {
    const auto counts = object_count(ctx.scene.objects);
    if (counts.empty()) return;
    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const auto& [label, n] = counts[ctx.rng.uniform_int(counts.size())];
        const QaType type = next_qa_type(ctx);
        const std::string key = label + ":" + to_string(type);
        if (!seen.insert(key).second) continue;

        // Frames showing the most instances of this label come first.
        std::vector<std::pair<int, int>> ranked;  // (-count, frame)
        for (const auto& img : ctx.records.image_records) {
            int c = 0;
            for (const auto& o : img.visible_objects)
                if (ctx.ann(o.object_id)->label == label) ++c;
            ranked.emplace_back(-c, img.frame_index);
        }
        std::sort(ranked.begin(), ranked.end());
        std::vector<int> must;
        for (const auto& [neg, frame] : ranked) {
            if (must.size() >= 3) break;
            must.push_back(frame);
        }
        const std::vector<int> list = mv_image_list(ctx, must, {});

        BindingMap b;
        b["label_A"] = label;
        b["count"] = std::to_string(n);

        if (type == QaType::Select) {
            const OptionSet opts = make_numeric_options(n, 1.0, ctx.rng);
            emit(ctx, type, std::move(b), {}, list, &opts, "",
                 GtNumeric{static_cast<double>(n), "count"});
        } else {
            emit(ctx, type, std::move(b), {}, list, nullptr, std::to_string(n),
                 GtNumeric{static_cast<double>(n), "count"});
        }
    }
}

void gen_appearorder(GenContext& ctx) {
    // Candidates: label-unique objects that appear somewhere.
    std::vector<const ObjectRecord*> pool;
    for (const auto& rec : ctx.records.object_records)
        if (!rec.frame_indices.empty() && ctx.label_unique(rec.label)) pool.push_back(&rec);
    if (pool.size() < 3) return;

    std::set<std::string> seen;
    for (int tries = attempt_budget(ctx);
         tries > 0 && static_cast<int>(ctx.items.size()) < ctx.max_items; --tries) {
        const size_t k = 3 + ctx.rng.uniform_int(std::min<size_t>(2, pool.size() - 2));
        auto idx = ctx.rng.sample_indices(pool.size(), k);
        std::sort(idx.begin(), idx.end());
        std::string key;
        for (size_t i : idx) key += std::to_string(i) + ":";
        if (!seen.insert(key).second) continue;

        std::vector<ObjectRecord> chosen;
        for (size_t i : idx) chosen.push_back(*pool[i]);
        const auto order = appearance_order(chosen);

        // Equal first frames would make the ordering arbitrary.
        bool tie = false;
        for (size_t i = 1; i < order.size(); ++i)
            if (order[i].first_frame == order[i - 1].first_frame) tie = true;
        if (tie) {
            ctx.skip(Skip::Ambiguous);
            continue;
        }

        auto label_of = [&](int id) { return ctx.ann(id)->label; };
        std::vector<std::string> ordered_labels;
        std::vector<int> must;
        for (const auto& e : order) {
            ordered_labels.push_back(label_of(e.object_id));
            if (must.size() < 5) must.push_back(e.first_frame);
        }
        std::vector<std::string> shuffled = ordered_labels;
        ctx.rng.shuffle(shuffled);

        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) {
                if (i) s += ", ";
                s += v[i];
            }
            return s;
        };

        BindingMap b;
        b["labels_pool"] = join(shuffled);
        b["order_list"] = join(ordered_labels);

        const std::vector<int> list = mv_image_list(ctx, must, {});
        emit(ctx, next_qa_type(ctx), std::move(b), {}, list, nullptr, join(ordered_labels),
             std::nullopt);
    }
}

void gen_roomsize(GenContext& ctx) {
    const auto area = room_area(ctx.scene.mesh, ctx.room);
    if (!area.ok()) {
        ctx.skip(area.reason());
        return;
    }
    const double gt = round_to_step(area.value(), 0.1);

    // Evenly spread frames across the sequence.
    std::vector<int> must;
    const auto& imgs = ctx.records.image_records;
    if (imgs.size() >= 3) {
        must = {imgs.front().frame_index, imgs[imgs.size() / 2].frame_index,
                imgs.back().frame_index};
    }

    for (int i = 0; i < ctx.max_items && i < 3; ++i) {
        BindingMap b;
        b["area"] = meters(gt);
        const std::vector<int> list = mv_image_list(ctx, must, {});
        const QaType type = next_qa_type(ctx);
        if (type == QaType::Select) {
            const OptionSet opts = make_numeric_options(gt, 0.1, ctx.rng);
            emit(ctx, type, std::move(b), {}, list, &opts, "", GtNumeric{gt, "m^2"});
        } else {
            emit(ctx, type, std::move(b), {}, list, nullptr, meters(gt),
                 GtNumeric{gt, "m^2"});
        }
    }
}

}  // namespace

// --- dispatch ---------------------------------------------------------------

SceneGenerationResult generate_dataset(const SceneBundle& scene, const SceneRecords& records,
                                       const TemplateBank& bank,
                                       const GenerateConfig& config) {
    SceneGenerationResult result;

    std::vector<TaskConfig> tasks = config.tasks;
    if (tasks.empty())
        for (const auto& info : task_registry()) tasks.push_back({info.name, 8});

    for (const auto& tc : tasks) {
        const TaskInfo* info = find_task(tc.name);
        if (!info) throw ValidationError("unknown task: " + tc.name);
        if (tc.max_per_scene <= 0) continue;

        const uint64_t seed = hash_combine(
            hash_combine(fnv1a64(scene.scene_id), fnv1a64(info->name)), config.seed);
        GenContext ctx{scene,
                       records,
                       bank,
                       config.relation,
                       config.room,
                       *info,
                       tc.max_per_scene,
                       Rng(seed),
                       {},
                       result.skip_counts[info->name]};

        if (info->template_family == "depth_oc") gen_depth_oc(ctx);
        else if (info->template_family == "depth_oo") gen_depth_oo(ctx);
        else if (info->template_family == "dist_oc") gen_dist_oc(ctx);
        else if (info->template_family == "dist_oo") gen_dist_oo(ctx);
        else if (info->template_family == "disti_oo") gen_disti_oo(ctx);
        else if (info->template_family == "objrel_oo") gen_objrel(ctx, true);
        else if (info->template_family == "objrel_oc") gen_objrel(ctx, false);
        else if (info->template_family == "spimag_oo") gen_spimag(ctx, true);
        else if (info->template_family == "spimag_oc") gen_spimag(ctx, false);
        else if (info->template_family == "posmatch") gen_posmatch(ctx);
        else if (info->template_family == "cammotion") gen_cammotion(ctx);
        else if (info->template_family == "viewchgi") gen_viewchgi(ctx);
        else if (info->template_family == "objvol") gen_objvol(ctx);
        else if (info->template_family == "objcount") gen_objcount(ctx);
        else if (info->template_family == "appearorder") gen_appearorder(ctx);
        else if (info->template_family == "roomsize") gen_roomsize(ctx);
        else throw ValidationError("no generator for family " + info->template_family);

        result.per_task_counts[info->name] = static_cast<int>(ctx.items.size());
        for (auto& item : ctx.items) result.items.push_back(std::move(item));
    }
    return result;
}

std::vector<std::string> render_item_images(const QAItem& item, const SceneBundle& scene,
                                            const std::filesystem::path& scene_dir,
                                            const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "images");
    std::vector<std::string> written;

    // item ids contain ':' which is awkward in filenames
    std::string stem = item.id;
    std::replace(stem.begin(), stem.end(), ':', '_');
    std::replace(stem.begin(), stem.end(), '/', '_');

    for (size_t k = 0; k < item.image_refs.size(); ++k) {
        // refs are "<scene_id>/<image_path>"
        const std::string& ref = item.image_refs[k];
        const std::string rel = ref.substr(ref.find('/') + 1);

        const FrameMeta* frame = nullptr;
        for (const auto& f : scene.frames)
            if (f.image_path == rel) frame = &f;
        if (!frame) continue;

        ImageRgb img;
        const std::filesystem::path src = scene_dir / rel;
        if (std::filesystem::exists(src))
            img = load_ppm(src);
        else
            img = ImageRgb(frame->camera.width, frame->camera.height);

        std::vector<VisualMark> frame_marks;
        for (const auto& m : item.marks)
            if (m.frame_ref == frame->frame_index) frame_marks.push_back(m);

        const ImageRgb annotated = render_marks(img, frame_marks);
        const std::string name = "images/" + stem + "_" + std::to_string(k) + ".ppm";
        save_ppm(out_dir / name, annotated);
        written.push_back(name);
    }
    return written;
}

}  // namespace spargen
