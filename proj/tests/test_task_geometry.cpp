#include <doctest.h>

#include "fixtures.hpp"
#include "spargen/task_geometry.hpp"

using namespace spargen;

namespace {

OrientedBox unit_cube_at(const Vec3& center) {
    OrientedBox box;
    box.center = center;
    box.half_extents = Vec3(0.5, 0.5, 0.5);
    return box;
}

Vec3 random_point(Rng& rng, double span = 4.0) {
    return Vec3(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(-span, span));
}

SpatialRelation flipped(const SpatialRelation& rel) {
    auto swap_sides = [](Side s, Side a, Side b) { return s == a ? b : (s == b ? a : s); };
    SpatialRelation out;
    out.left_right = swap_sides(rel.left_right, Side::Left, Side::Right);
    out.above_below = swap_sides(rel.above_below, Side::Above, Side::Below);
    out.near_far = swap_sides(rel.near_far, Side::Near, Side::Far);
    out.front_behind = swap_sides(rel.front_behind, Side::Front, Side::Behind);
    return out;
}

}  // namespace

TEST_SUITE("task_geometry") {

TEST_CASE("depth_of extracts and rounds the z component") {
    CHECK(depth_of(Vec3(0.3, -0.2, 1.7)) == doctest::Approx(1.7));
    CHECK(depth_of(Vec3(0, 0, 1.234)) == doctest::Approx(1.2));
    CHECK(depth_of(Vec3(0, 0, 1.5)) == doctest::Approx(1.5));
    CHECK_THROWS_AS(depth_of(Vec3(0, 0, -1)), BehindCamera);
}

TEST_CASE("relative_depth is an absolute difference") {
    CHECK(relative_depth(1.5, 1.7) == doctest::Approx(0.2));
    CHECK(relative_depth(2.0, 2.0) == doctest::Approx(0.0));
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.1, 10), b = rng.uniform(0.1, 10);
        CHECK(relative_depth(a, b) == doctest::Approx(std::abs(a - b)));
        CHECK(relative_depth(a, b) == relative_depth(b, a));
    }
}

TEST_CASE("distance_oo rounds, skips overlap and near-coincidence") {
    const RelationConfig cfg;
    const auto ok = distance_oo(Vec3(0, 0, 1), Vec3(0, 0, 3), unit_cube_at(Vec3(0, 0, 1)),
                                unit_cube_at(Vec3(0, 0, 3)), cfg);
    REQUIRE(ok.ok());
    CHECK(ok.value() == doctest::Approx(2.0));

    const auto overlap = distance_oo(Vec3(0, 0, 1), Vec3(0.5, 0, 1),
                                     unit_cube_at(Vec3(0, 0, 1)),
                                     unit_cube_at(Vec3(0.5, 0, 1)), cfg);
    REQUIRE(!overlap.ok());
    CHECK(overlap.reason() == Skip::Overlap);

    OrientedBox tiny_a = unit_cube_at(Vec3(0, 0, 1));
    tiny_a.half_extents = Vec3(0.01, 0.01, 0.01);
    OrientedBox tiny_b = tiny_a;
    tiny_b.center = Vec3(0.05, 0, 1);
    const auto close = distance_oo(tiny_a.center, tiny_b.center, tiny_a, tiny_b, cfg);
    REQUIRE(!close.ok());
    CHECK(close.reason() == Skip::TooClose);

    // Symmetry.
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const Vec3 a = random_point(rng) + Vec3(0, 0, 6);
        const Vec3 b = random_point(rng) + Vec3(8, 0, 6);
        const auto ab = distance_oo(a, b, unit_cube_at(a), unit_cube_at(b), cfg);
        const auto ba = distance_oo(b, a, unit_cube_at(b), unit_cube_at(a), cfg);
        REQUIRE(ab.ok());
        REQUIRE(ba.ok());
        CHECK(ab.value() == ba.value());
    }
}

TEST_CASE("distance_oc basics") {
    CHECK(distance_oc(Vec3(0, 0, 2)) == doctest::Approx(2.0));
    CHECK(distance_oc(Vec3(3, 4, 0)) == doctest::Approx(5.0));
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Vec3 p = random_point(rng);
        CHECK(distance_oc(p) == doctest::Approx(round_to_step(p.norm(), 0.1)));
    }
}

TEST_CASE("nearer_of picks the closer candidate and flags ambiguity") {
    // Bed 2.0 m and chair 0.6 m from the heater: the chair is nearer.
    const Vec3 heater(0, 0, 2);
    const Vec3 bed = heater + Vec3(2.0, 0, 0);
    const Vec3 chair = heater + Vec3(0, 0.6, 0);
    const auto pick = nearer_of(heater, bed, chair);
    REQUIRE(pick.ok());
    CHECK(pick.value() == NearerPick::C);

    const auto tie = nearer_of(heater, bed, heater + Vec3(0, 2.0, 0));
    REQUIRE(!tie.ok());
    CHECK(tie.reason() == Skip::Ambiguous);

    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const Vec3 a = random_point(rng), b = random_point(rng), c = random_point(rng);
        const double db = (a - b).norm(), dc = (a - c).norm();
        const auto got = nearer_of(a, b, c);
        if (std::abs(db - dc) < 0.1) {
            CHECK(!got.ok());
        } else {
            REQUIRE(got.ok());
            CHECK((got.value() == NearerPick::B) == (db < dc));
        }
    }
}

TEST_CASE("relation_to_observer reads signs in the camera frame") {
    const SpatialRelation rel = relation_to_observer(Vec3(-0.5, -0.3, 2));
    CHECK(rel.left_right == Side::Left);
    CHECK(rel.above_below == Side::Above);
    CHECK(rel.front_behind == Side::Front);
    CHECK(rel.near_far == Side::None);

    // Below threshold on one axis -> none.
    const SpatialRelation thin = relation_to_observer(Vec3(0.05, -0.3, 2));
    CHECK(thin.left_right == Side::None);

    const SpatialRelation behind = relation_to_observer(Vec3(0.5, 0.3, -2));
    CHECK(behind.front_behind == Side::Behind);
    CHECK(behind.above_below == Side::Below);
    CHECK(behind.left_right == Side::Right);
}

TEST_CASE("relation_between antisymmetry over random pairs") {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Vec3 a = random_point(rng), b = random_point(rng);
        const SpatialRelation ab = relation_between(a, b);
        const SpatialRelation ba = relation_between(b, a);
        CHECK(ba == flipped(ab));
    }
}

TEST_CASE("lookat_pose reproduces the worked construction") {
    const auto pose = lookat_pose(Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1));
    REQUIRE(pose.ok());
    const Mat3& r = pose.value().rotation;
    CHECK((r.col(0) - Vec3(1, 0, 0)).norm() < 1e-12);   // right
    CHECK((r.col(1) - Vec3(0, 0, -1)).norm() < 1e-12);  // camera y = down = -u
    CHECK((r.col(2) - Vec3(0, 1, 0)).norm() < 1e-12);   // forward
    CHECK(pose.value().translation == Vec3(0, 0, 0));

    // Independent orthonormality oracle.
    CHECK((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lookat_pose rejections") {
    const auto vertical = lookat_pose(Vec3(0, 0, 0), Vec3(0, 0, 5), Vec3(0, 0, 1));
    REQUIRE(!vertical.ok());
    CHECK(vertical.reason() == Skip::DegenerateGaze);

    // 45 degree elevation: tilt 45 <= 60, accepted; u_z = cos(45 deg).
    const auto ok45 = lookat_pose(Vec3(0, 0, 0), Vec3(1, 0, 1), Vec3(0, 0, 1));
    REQUIRE(ok45.ok());
    CHECK(-ok45.value().rotation.col(1).z() ==
          doctest::Approx(std::cos(45 * kRadPerDeg)).epsilon(1e-12));  // u_z = cos(tilt)

    // 70 degree elevation: tilt 70 > 60, rejected.
    const auto steep = lookat_pose(
        Vec3(0, 0, 0), Vec3(std::cos(70 * kRadPerDeg), 0, std::sin(70 * kRadPerDeg)),
        Vec3(0, 0, 1));
    REQUIRE(!steep.ok());
    CHECK(steep.reason() == Skip::ExcessiveTilt);
}

TEST_CASE("lookat_pose properties over random pairs") {
    Rng rng(6);
    const Vec3 up(0, 0, 1);
    int accepted = 0, rejected_tilt = 0;
    for (int i = 0; i < 2000; ++i) {
        const Vec3 a = random_point(rng), b = random_point(rng);
        if ((a - b).norm() < 1e-6) continue;
        const Vec3 f = (b - a).normalized();
        if (up.cross(f).norm() < 1e-6) continue;
        const Vec3 u = f.cross(up.cross(f).normalized());
        const double tilt = std::acos(std::clamp(u.dot(up), -1.0, 1.0)) * kDegPerRad;
        const auto pose = lookat_pose(a, b, up);
        if (pose.ok()) {
            ++accepted;
            const Mat3& r = pose.value().rotation;
            CHECK((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6);
            CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-6));
            CHECK((r.col(2) - f).norm() < 1e-9);
            CHECK(tilt <= 60.0 + 1e-9);
        } else {
            CHECK(pose.reason() == Skip::ExcessiveTilt);
            ++rejected_tilt;
            CHECK(tilt > 60.0 - 1e-9);
        }
    }
    CHECK(accepted > 0);
    CHECK(rejected_tilt > 0);
}

TEST_CASE("imagined_relation matches an explicit frame-change oracle") {
    Rng rng(7);
    const Vec3 up(0, 0, 1);
    const RigidTransform main_pose = testfix::look_at_camera(Vec3(5, -3, 1.5), Vec3(0, 0, 1));
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const Vec3 a = random_point(rng), b = random_point(rng);
        const Vec3 c = random_point(rng), d = random_point(rng);
        const auto change = imagined_relation(a, b, c, d, main_pose, up);
        const auto pose = lookat_pose(a, b, up);
        if (!pose.ok()) {
            CHECK(!change.ok());
            continue;
        }
        REQUIRE(change.ok());
        ++checked;
        // Oracle: explicit world -> frame transforms, relation in each frame.
        const Vec3 c_main = world_to_camera(main_pose, c);
        const Vec3 d_main = world_to_camera(main_pose, d);
        CHECK(change.value().before == relation_between(c_main, d_main));
        const Vec3 c_new = world_to_camera(pose.value(), c);
        const Vec3 d_new = world_to_camera(pose.value(), d);
        CHECK(change.value().after == relation_between(c_new, d_new));
    }
    CHECK(checked > 100);

    // Observer variant: a target at the new camera origin keeps every axis none.
    const Vec3 a(1, 1, 0.5), b(3, 2, 0.6);
    const auto self = imagined_relation(a, b, a, std::nullopt, main_pose, up);
    REQUIRE(self.ok());
    CHECK(self.value().after.left_right == Side::None);
    CHECK(self.value().after.above_below == Side::None);
    CHECK(self.value().after.front_behind == Side::None);
}

TEST_CASE("imagined_relation before/after independence") {
    Rng rng(8);
    const Vec3 up(0, 0, 1);
    const RigidTransform main_a = testfix::look_at_camera(Vec3(4, 0, 1.2), Vec3(0, 0, 1));
    const RigidTransform main_b = testfix::look_at_camera(Vec3(-2, 3, 1.8), Vec3(1, 1, 0.5));
    for (int i = 0; i < 100; ++i) {
        const Vec3 a = random_point(rng), b = random_point(rng);
        const Vec3 c = random_point(rng), d = random_point(rng);
        const auto r1 = imagined_relation(a, b, c, d, main_a, up);
        const auto r2 = imagined_relation(a, b, c, d, main_b, up);
        if (!r1.ok() || !r2.ok()) continue;
        // after depends only on the look-at frame, not the main view
        CHECK(r1.value().after == r2.value().after);

        const auto r3 = imagined_relation(b, a, c, d, main_a, up);
        if (r3.ok()) CHECK(r1.value().before == r3.value().before);
    }
}

TEST_CASE("object_dims formula cases") {
    OrientedBox rect;
    rect.half_extents = Vec3(1.0, 0.5, 1.5);  // 2 x 1 footprint, height 3
    const ObjectDims d1 = object_dims(rect);
    CHECK(d1.h_cm == doctest::Approx(300.0));
    CHECK(d1.l_cm == doctest::Approx(std::sqrt(5.0) * 100).epsilon(1e-9));
    CHECK(d1.w_cm == doctest::Approx(100.0));
    CHECK(d1.volume_cm3 ==
          doctest::Approx(300.0 * std::sqrt(5.0) * 100 * 100).epsilon(1e-9));

    const ObjectDims cube = object_dims(unit_cube_at(Vec3(2, -1, 4)));
    CHECK(cube.h_cm == doctest::Approx(100.0));
    CHECK(cube.l_cm == doctest::Approx(141.4).epsilon(1e-3));
    CHECK(cube.w_cm == doctest::Approx(100.0));

    // Rotation about the up axis leaves all dims unchanged.
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        OrientedBox rot = rect;
        rot.rotation =
            Eigen::AngleAxisd(rng.uniform(0, 2 * EIGEN_PI), Vec3::UnitZ()).toRotationMatrix();
        const ObjectDims dr = object_dims(rot);
        CHECK(dr.h_cm == doctest::Approx(d1.h_cm).epsilon(1e-9));
        CHECK(dr.l_cm == doctest::Approx(d1.l_cm).epsilon(1e-9));
        CHECK(dr.w_cm == doctest::Approx(d1.w_cm).epsilon(1e-9));
    }
}

TEST_CASE("position_match_sample picks two known frames") {
    SceneRecords records;
    records.scene_id = "s";
    for (int f : {2, 5}) {
        ImageRecord img;
        img.frame_index = f;
        ObjectInView view;
        view.object_id = 1;
        view.bbox2d = {10.0 + f, 20.0, 30.0 + f, 40.0};
        img.visible_objects.push_back(view);
        records.image_records.push_back(img);
    }
    ObjectRecord obj;
    obj.object_id = 1;
    obj.label = "chair";
    obj.frame_indices = {2, 5};
    records.object_records.push_back(obj);

    Rng rng(10);
    const auto match = position_match_sample(obj, records, rng);
    REQUIRE(match.ok());
    const auto& pm = match.value();
    CHECK(((pm.frame_a == 2 && pm.frame_b == 5) || (pm.frame_a == 5 && pm.frame_b == 2)));
    CHECK(pm.bbox_a.x_min == doctest::Approx(10.0 + pm.frame_a));

    ObjectRecord single;
    single.object_id = 2;
    single.frame_indices = {3};
    Rng rng2(10);
    const auto skip = position_match_sample(single, records, rng2);
    REQUIRE(!skip.ok());
    CHECK(skip.reason() == Skip::SingleView);

    // Seeded reproducibility.
    Rng r1(77), r2(77);
    const auto m1 = position_match_sample(obj, records, r1);
    const auto m2 = position_match_sample(obj, records, r2);
    CHECK(m1.value().frame_a == m2.value().frame_a);
    CHECK(m1.value().frame_b == m2.value().frame_b);
}

TEST_CASE("view_change identity, pure translation and pure yaw") {
    const RigidTransform base = testfix::look_at_camera(Vec3(1, 2, 1.5), Vec3(4, 5, 1.0));

    const MotionDescriptor none = view_change(base, base);
    CHECK(none.move_right == 0);
    CHECK(none.move_down == 0);
    CHECK(none.move_forward == 0);
    CHECK(none.rotate_down == 0);
    CHECK(none.rotate_right == 0);

    // 1 m along camera-A forward.
    RigidTransform ahead = base;
    ahead.translation += base.rotation.col(2) * 1.0;
    const MotionDescriptor fwd = view_change(base, ahead);
    CHECK(fwd.move_forward == doctest::Approx(1.0));
    CHECK(fwd.move_right == doctest::Approx(0.0));
    CHECK(fwd.move_down == doctest::Approx(0.0));
    CHECK(fwd.rotate_right == doctest::Approx(0.0));

    // 90 degree left yaw: B's forward points left in A's frame.
    RigidTransform turned = base;
    turned.rotation =
        base.rotation * Eigen::AngleAxisd(-90 * kRadPerDeg, Vec3::UnitY()).toRotationMatrix();
    const MotionDescriptor yawed = view_change(base, turned);
    CHECK(yawed.rotate_right == doctest::Approx(-90.0));
    CHECK(yawed.rotate_down == doctest::Approx(0.0));
}

TEST_CASE("view_change translation norm is preserved within rounding") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const RigidTransform a =
            testfix::look_at_camera(random_point(rng), random_point(rng) + Vec3(9, 0, 0));
        const RigidTransform b =
            testfix::look_at_camera(random_point(rng), random_point(rng) + Vec3(9, 0, 0));
        const MotionDescriptor m = view_change(a, b);
        const double got = Vec3(m.move_right, m.move_down, m.move_forward).norm();
        const double want = (a.translation - b.translation).norm();
        CHECK(std::abs(got - want) < 0.18);  // three axes rounded to 0.1
    }
}

TEST_CASE("camera_pose_projection normalizes to the 0-1000 grid") {
    FrameMeta frame;
    frame.camera.fx = frame.camera.fy = 100;
    frame.camera.cx = 64;
    frame.camera.cy = 48;
    frame.camera.width = 128;
    frame.camera.height = 96;

    RigidTransform b;
    b.translation = Vec3(0, 0, 4);  // on A's principal axis
    const auto proj = camera_pose_projection(frame, b);
    REQUIRE(proj.ok());
    CHECK(proj.value().u == doctest::Approx(500.0));
    CHECK(proj.value().v == doctest::Approx(500.0));
    CHECK(proj.value().depth == doctest::Approx(4.0));

    b.translation = Vec3(0, 0, -4);
    const auto behind = camera_pose_projection(frame, b);
    REQUIRE(!behind.ok());
    CHECK(behind.reason() == Skip::BehindCamera);

    b.translation = Vec3(50, 0, 1);  // projects far outside
    const auto outside = camera_pose_projection(frame, b);
    REQUIRE(!outside.ok());
    CHECK(outside.reason() == Skip::OutOfView);
}

TEST_CASE("appearance_order sorts by first frame with id tie-break") {
    std::vector<ObjectRecord> objects(3);
    objects[0].object_id = 10;
    objects[0].frame_indices = {5, 8};
    objects[1].object_id = 11;
    objects[1].frame_indices = {2, 9};
    objects[2].object_id = 12;
    objects[2].frame_indices = {9};
    auto order = appearance_order(objects);
    REQUIRE(order.size() == 3);
    CHECK(order[0].object_id == 11);
    CHECK(order[1].object_id == 10);
    CHECK(order[2].object_id == 12);

    // Tie on the first frame: ascending object id.
    objects[2].frame_indices = {2};
    order = appearance_order(objects);
    CHECK(order[0].object_id == 11);
    CHECK(order[1].object_id == 12);

    // Random lists against a sort oracle.
    Rng rng(12);
    std::vector<ObjectRecord> many;
    for (int i = 0; i < 40; ++i) {
        ObjectRecord rec;
        rec.object_id = i;
        const int n = 1 + static_cast<int>(rng.uniform_int(4));
        for (int k = 0; k < n; ++k)
            rec.frame_indices.push_back(static_cast<int>(rng.uniform_int(30)));
        many.push_back(rec);
    }
    order = appearance_order(many);
    for (size_t i = 1; i < order.size(); ++i) {
        const bool ordered = order[i - 1].first_frame < order[i].first_frame ||
                             (order[i - 1].first_frame == order[i].first_frame &&
                              order[i - 1].object_id < order[i].object_id);
        CHECK(ordered);
    }
}

TEST_CASE("object_count omits singleton labels") {
    std::vector<ObjectAnnotation> objects(4);
    objects[0].label = "chair";
    objects[1].label = "chair";
    objects[2].label = "chair";
    objects[3].label = "lamp";
    const auto counts = object_count(objects);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].first == "chair");
    CHECK(counts[0].second == 3);

    CHECK(object_count({}).empty());
}

TEST_CASE("voxel_downsample produces half-step-offset centers") {
    const std::vector<Vec3> pts{Vec3(0.01, 0.02, 0.0), Vec3(0.04, 0.09, 0.0)};
    const auto centers = voxel_downsample(pts, 0.1);
    REQUIRE(centers.size() == 1);
    CHECK((centers[0] - Vec3(0.05, 0.05, 0.05)).norm() < 1e-12);
}

TEST_CASE("room_area on dense rectangular floors") {
    TriangleMesh mesh;
    testfix::add_floor_grid(mesh, 4.0, 3.0, 0.05);
    const auto area = room_area(mesh);
    REQUIRE(area.ok());
    CHECK(area.value() == doctest::Approx(12.0).epsilon(0.05));

    // Translation invariance.
    TriangleMesh shifted = mesh;
    for (auto& v : shifted.vertices) v += Vec3(31.0, -17.0, 2.0);
    const auto area2 = room_area(shifted);
    REQUIRE(area2.ok());
    CHECK(area2.value() == doctest::Approx(area.value()).epsilon(1e-6));

    // Small rooms are skipped.
    TriangleMesh small;
    testfix::add_floor_grid(small, 2.0, 2.0, 0.05);
    const auto skipped = room_area(small);
    REQUIRE(!skipped.ok());
    CHECK(skipped.reason() == Skip::TooSmall);
}

TEST_CASE("room_area degenerate geometry") {
    // Axis-aligned so the voxel centers stay exactly collinear.
    TriangleMesh line;
    for (int i = 0; i < 200; ++i) {
        line.vertices.emplace_back(i * 0.05, 0.35, 0.0);
        line.vertex_instance.push_back(-1);
    }
    const auto result = room_area(line);
    REQUIRE(!result.ok());
    CHECK(result.reason() == Skip::DegenerateGeometry);

    CHECK(!room_area(TriangleMesh{}).ok());
}

}  // TEST_SUITE
