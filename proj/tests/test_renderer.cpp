// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>

#include "sflow/renderer.hpp"
#include "sflow/rng.hpp"
#include "test_scenes.hpp"

using namespace sflow;
using namespace sflow::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool bundles_identical(const GroundTruthBundle& a, const GroundTruthBundle& b) {
  const auto eq = [](const auto& x, const auto& y) {
    return x.size() == y.size() &&
           std::memcmp(x.data(), y.data(), x.size() * sizeof(x[0])) == 0;
  };
  return eq(a.depth, b.depth) && eq(a.disparity, b.disparity) &&
         eq(a.scene_flow, b.scene_flow) && eq(a.optical_flow, b.optical_flow) &&
         eq(a.valid, b.valid) && eq(a.static_mask, b.static_mask) &&
         eq(a.anchor_mesh, b.anchor_mesh) && eq(a.anchor_tri, b.anchor_tri) &&
         eq(a.shaded, b.shaded);
}

}  // namespace

TEST_CASE("primary_hit: plane, sky, and nearest-surface examples") {
  const Scene scene = plane_scene(5.0);

  const auto anchor = primary_hit(scene, Side::kLeft, 0, 320.0, 240.0);
  REQUIRE(anchor.has_value());
  CHECK(anchor->hit_point.z == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(anchor->mesh_id == 0);

  // Ray that points far off the plane: sky.
  Scene small = plane_scene(5.0, 2, 1.0);
  CHECK_FALSE(primary_hit(small, Side::kLeft, 0, 639.0, 479.0).has_value());

  Scene overlapping = plane_scene(5.0);
  overlapping.meshes.push_back(quad_mesh(1, 100.0, 7.0, 2));
  const auto nearest = primary_hit(overlapping, Side::kLeft, 0, 100.0, 100.0);
  REQUIRE(nearest.has_value());
  CHECK(nearest->mesh_id == 0);
  CHECK(nearest->hit_point.z == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("anchor consistency: barycentric reconstruction reproduces the hit") {
  const Scene scene = plane_scene(5.0);
  const FrameGeometry geom = build_frame_geometry(scene, 0);
  CounterRng rng(51);
  for (int i = 0; i < 500; ++i) {
    const double u = rng.uniform(0, 640), v = rng.uniform(0, 480);
    const Ray ray = camera_ray(scene.rig, Side::kLeft, 0, u, v);
    const auto anchor = primary_hit(geom, ray);
    if (!anchor) continue;
    CHECK(norm(track_anchor(*anchor, geom) - anchor->hit_point) < 1e-9);
  }
}

TEST_CASE("track_anchor: translation, rotation, deformation") {
  SUBCASE("translated mesh moves the tracked point with it") {
    Scene scene = moving_plane_scene({1, 0, 0});
    const auto anchor = primary_hit(scene, Side::kLeft, 0, 250.0, 200.0);
    REQUIRE(anchor.has_value());
    const Vec3 tracked = track_anchor(*anchor, scene, 1);
    CHECK(norm(tracked - (anchor->hit_point + Vec3{1, 0, 0})) < 1e-9);
  }

  SUBCASE("rotation about world z maps (1,0,z) to (0,1,z)") {
    Scene scene = plane_scene(5.0);
    scene.meshes[0].is_static = false;
    scene.meshes[0].poses[1] = RigidTransform{rotation_z(kPi / 2), {0, 0, 0}};
    const auto anchor = primary_hit(scene, Side::kLeft, 0, 420.0, 240.0);  // hits (1,0,5)
    REQUIRE(anchor.has_value());
    CHECK(norm(anchor->hit_point - Vec3{1, 0, 5}) < 1e-9);
    const Vec3 tracked = track_anchor(*anchor, scene, 1);
    CHECK(norm(tracked - Vec3{0, 1, 5}) < 1e-9);
  }

  SUBCASE("deformation: displacement scales with the stored weight") {
    // Direct barycentric evaluation oracle: displacing vertex k by d moves
    // the tracked point by w_k * d.
    Scene scene = plane_scene(5.0);
    Mesh& mesh = scene.meshes[0];
    mesh.is_static = false;
    mesh.deformation = {mesh.vertices, mesh.vertices};
    mesh.deformation[1][0].z += 4.0;

    const FrameGeometry geom0 = build_frame_geometry(scene, 0);
    CounterRng rng(52);
    for (int i = 0; i < 200; ++i) {
      const Ray ray =
          camera_ray(scene.rig, Side::kLeft, 0, rng.uniform(0, 640), rng.uniform(0, 480));
      const auto anchor = primary_hit(geom0, ray);
      if (!anchor) continue;
      // Vertex 0 carries weight w0 in both quad triangles.
      const Vec3 tracked = track_anchor(*anchor, scene, 1);
      const Vec3 expected = anchor->hit_point + Vec3{0, 0, anchor->bary.w0 * 4.0};
      CHECK(norm(tracked - expected) < 1e-9);
    }
  }
}

TEST_CASE("scene_flow_at: static, ego-motion, and object-motion examples") {
  SUBCASE("static scene, static camera: zero motion") {
    const Scene scene = plane_scene(5.0);
    const SceneFlowSample s = scene_flow_at(scene, Side::kLeft, 0, 320.0, 240.0);
    REQUIRE(s.valid_hit);
    CHECK(s.motion == Vec3{0, 0, 0});
  }

  SUBCASE("camera advancing along its axis") {
    const Scene scene = dolly_scene(1.0, 5.0);
    const SceneFlowSample s = scene_flow_at(scene, Side::kLeft, 0, 320.0, 240.0);
    REQUIRE(s.valid_hit);
    CHECK(norm(s.q_t - Vec3{0, 0, 5}) < 1e-9);
    CHECK(norm(s.q_t1 - Vec3{0, 0, 4}) < 1e-9);
    CHECK(norm(s.motion - Vec3{0, 0, -1}) < 1e-9);
  }

  SUBCASE("object approaching a static camera") {
    const Scene scene = moving_plane_scene({0, 0, -1}, 5.0);
    const SceneFlowSample s = scene_flow_at(scene, Side::kLeft, 0, 320.0, 240.0);
    REQUIRE(s.valid_hit);
    CHECK(norm(s.motion - Vec3{0, 0, -1}) < 1e-9);
  }

  SUBCASE("sky pixels are flagged invalid") {
    const Scene scene = plane_scene(5.0, 2, 1.0);
    CHECK_FALSE(scene_flow_at(scene, Side::kLeft, 0, 630.0, 470.0).valid_hit);
  }
}

TEST_CASE("scene_flow_at: out-of-image and behind-camera targets are flagged, not dropped") {
  // Plane crossing sideways fast enough to leave the image in one frame.
  const Scene scene = moving_plane_scene({40, 0, 0}, 5.0);
  const SceneFlowSample s = scene_flow_at(scene, Side::kLeft, 0, 600.0, 240.0);
  REQUIRE(s.valid_hit);
  CHECK(s.target_out_of_image);
  CHECK_FALSE(s.target_behind_camera);
  CHECK(s.motion.x == doctest::Approx(40.0));

  // Plane rushing past the camera: target behind the image plane.
  const Scene behind = moving_plane_scene({0, 0, -10}, 5.0);
  const SceneFlowSample b = scene_flow_at(behind, Side::kLeft, 0, 320.0, 240.0);
  REQUIRE(b.valid_hit);
  CHECK(b.target_behind_camera);
}

TEST_CASE("shade: Lambertian examples") {
  Scene scene = plane_scene(5.0);
  scene.ambient = 0.0;
  scene.meshes[0].material.albedo = {1.0, 1.0, 1.0};
  // Plane normal is -z (toward the camera); light along the normal.
  scene.light_direction = {0.0, 0.0, -1.0};
  const FrameGeometry geom = build_frame_geometry(scene, 0);
  const auto anchor = primary_hit(geom, camera_ray(scene.rig, Side::kLeft, 0, 320, 240));
  REQUIRE(anchor.has_value());
  const Vec3 lit = shade(*anchor, scene, geom);
  CHECK(norm(lit - Vec3{1, 1, 1}) < 1e-12);

  scene.ambient = 0.2;
  scene.light_direction = {0.0, -1.0, 0.0};  // perpendicular to the normal
  scene.meshes[0].material.albedo = {0.5, 1.0, 0.25};
  const Vec3 ambient_only = shade(*anchor, scene, geom);
  CHECK(norm(ambient_only - Vec3{0.1, 0.2, 0.05}) < 1e-12);
}

TEST_CASE("render_bundle: sky pixels take the sky color and invalid sentinels") {
  const Scene scene = plane_scene(5.0, 2, 1.0);  // small plane, mostly sky
  const GroundTruthBundle bundle =
      render_bundle(scene, Side::kLeft, 0, Direction::kForward, 1);
  const size_t corner = bundle.pixel_index(639, 479);
  CHECK(bundle.valid[corner] == 0);
  CHECK(std::isnan(bundle.depth[corner]));
  CHECK(std::isnan(bundle.optical_flow[corner * 2]));
  CHECK(bundle.shaded[corner * 3 + 0] == doctest::Approx(0.4));
  CHECK(bundle.shaded[corner * 3 + 1] == doctest::Approx(0.6));
  CHECK(bundle.shaded[corner * 3 + 2] == doctest::Approx(0.9));
  CHECK(bundle.anchor_mesh[corner] == -1);
}

TEST_CASE("render_bundle: static scene yields exactly zero flow and analytic depth") {
  const Scene scene = plane_scene(5.0);
  const GroundTruthBundle bundle =
      render_bundle(scene, Side::kLeft, 0, Direction::kForward, 2);
  const double fxb = scene.rig.intrinsics.fx * scene.rig.baseline;
  long valid = 0;
  for (int y = 0; y < bundle.height; ++y)
    for (int x = 0; x < bundle.width; ++x) {
      const size_t i = bundle.pixel_index(x, y);
      if (!bundle.valid[i]) continue;
      ++valid;
      CHECK(bundle.scene_flow[i * 3 + 0] == 0.0);
      CHECK(bundle.scene_flow[i * 3 + 1] == 0.0);
      CHECK(bundle.scene_flow[i * 3 + 2] == 0.0);
      CHECK(bundle.optical_flow[i * 2 + 0] == 0.0);
      CHECK(bundle.optical_flow[i * 2 + 1] == 0.0);
      CHECK(bundle.depth[i] == doctest::Approx(5.0).epsilon(1e-12));
      CHECK(std::abs(bundle.disparity[i] * bundle.depth[i] - fxb) < 1e-6);
      CHECK(bundle.static_mask[i] == 1);
    }
  CHECK(valid == bundle.width * bundle.height);  // plane covers the frame at z=5
}

TEST_CASE("render_bundle: thread count never changes the output") {
  Scene scene = moving_plane_scene({0.3, -0.2, 0.5}, 6.0);
  scene.meshes.push_back(quad_mesh(1, 2.0, 4.0, 2));
  const GroundTruthBundle one = render_bundle(scene, Side::kLeft, 0, Direction::kForward, 1);
  const GroundTruthBundle eight =
      render_bundle(scene, Side::kLeft, 0, Direction::kForward, 8);
  CHECK(bundles_identical(one, eight));
}

TEST_CASE("render_bundle: forward and backward motion are inverse on a rigid plane") {
  // Per-pixel traversal oracle: the backward sample at the forward target
  // must negate the forward motion wherever the anchors agree.
  const Scene scene = moving_plane_scene({0.25, 0.125, 0}, 5.0);
  const GroundTruthBundle fwd = render_bundle(scene, Side::kLeft, 0, Direction::kForward, 2);
  const GroundTruthBundle bwd = render_bundle(scene, Side::kLeft, 1, Direction::kBackward, 2);

  long compared = 0;
  for (int y = 0; y < fwd.height; ++y)
    for (int x = 0; x < fwd.width; ++x) {
      const size_t i = fwd.pixel_index(x, y);
      if (!fwd.valid[i] || std::isnan(fwd.optical_flow[i * 2])) continue;
      const int qx = static_cast<int>(std::floor(x + fwd.optical_flow[i * 2] + 0.5));
      const int qy = static_cast<int>(std::floor(y + fwd.optical_flow[i * 2 + 1] + 0.5));
      if (qx < 0 || qx >= fwd.width || qy < 0 || qy >= fwd.height) continue;
      const size_t j = bwd.pixel_index(qx, qy);
      if (!bwd.valid[j] || bwd.anchor_mesh[j] != fwd.anchor_mesh[i] ||
          bwd.anchor_tri[j] != fwd.anchor_tri[i])
        continue;
      ++compared;
      for (int c = 0; c < 3; ++c)
        CHECK(std::abs(fwd.scene_flow[i * 3 + c] + bwd.scene_flow[j * 3 + c]) < 1e-9);
    }
  CHECK(compared > 10000);
}

TEST_CASE("render_bundle: stereo consistency at one instant") {
  // The left pixel displaced by -disparity lands on the right camera's
  // projection of the same 3D point.
  Scene scene = plane_scene(5.0);
  scene.meshes.push_back(quad_mesh(1, 1.5, 3.0, 2));
  const GroundTruthBundle left = render_bundle(scene, Side::kLeft, 0, Direction::kForward, 2);
  const RigidTransform right_w2c = world_to_camera(scene.rig, Side::kRight, 0);
  const FrameGeometry geom = build_frame_geometry(scene, 0);

  CounterRng rng(53);
  for (int i = 0; i < 500; ++i) {
    const int x = rng.uniform_int(0, left.width - 1);
    const int y = rng.uniform_int(0, left.height - 1);
    const size_t idx = left.pixel_index(x, y);
    if (!left.valid[idx]) continue;
    const auto anchor = primary_hit(geom, camera_ray(scene.rig, Side::kLeft, 0, x, y));
    REQUIRE(anchor.has_value());
    const auto right_proj = project(scene.rig.intrinsics,
                                    transform_point(right_w2c, anchor->hit_point));
    REQUIRE(right_proj.has_value());
    CHECK(std::abs((x - left.disparity[idx]) - right_proj->u) < 1e-6);
    CHECK(std::abs(y - right_proj->v) < 1e-6);
  }
}

TEST_CASE("ego_motion_of: examples and factorization") {
  SUBCASE("static camera: identity") {
    const Scene scene = plane_scene(5.0);
    const RigidTransform ego =
        ego_motion_of(scene.rig, Side::kLeft, 0, Direction::kForward);
    CHECK(norm(ego.translation) < 1e-12);
    CHECK(orthonormality_defect(ego.rotation) < 1e-12);
    CHECK(std::abs(ego.rotation.m[0][0] - 1.0) < 1e-12);
  }

  SUBCASE("camera advancing (0,0,1) gives translation (0,0,-1)") {
    const Scene scene = dolly_scene(1.0);
    const RigidTransform ego =
        ego_motion_of(scene.rig, Side::kLeft, 0, Direction::kForward);
    CHECK(norm(ego.translation - Vec3{0, 0, -1}) < 1e-12);
  }

  SUBCASE("q_t1 = ego(q_t) for static pixels under arbitrary trajectories") {
    Scene scene = plane_scene(8.0, 2, 200.0);
    CounterRng rng(54);
    for (int f = 0; f < 2; ++f)
      scene.rig.left_poses[f] = RigidTransform{
          rotation_y(rng.uniform(-0.1, 0.1)) * rotation_x(rng.uniform(-0.05, 0.05)),
          {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(0, 1.5)}};
    const RigidTransform ego = ego_motion_of(scene.rig, Side::kLeft, 0, Direction::kForward);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      const SceneFlowSample s =
          scene_flow_at(scene, Side::kLeft, 0, rng.uniform(0, 640), rng.uniform(0, 480));
      if (!s.valid_hit) continue;
      ++checked;
      CHECK(norm(s.q_t1 - transform_point(ego, s.q_t)) < 1e-9);
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("render_bundle: backward direction swaps the frame roles") {
  const Scene scene = dolly_scene(1.0, 5.0, 3);
  const GroundTruthBundle bwd = render_bundle(scene, Side::kLeft, 2, Direction::kBackward, 1);
  CHECK(bwd.frame == 2);
  const size_t i = bwd.pixel_index(320, 240);
  REQUIRE(bwd.valid[i]);
  // Reference frame 2: camera at z=2, plane at z=5 -> depth 3; target is
  // frame 1 where the plane is 1 m farther.
  CHECK(bwd.depth[i] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(bwd.scene_flow[i * 3 + 2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(render_bundle(scene, Side::kLeft, 0, Direction::kBackward, 1),
                  std::out_of_range);
  CHECK_THROWS_AS(render_bundle(scene, Side::kLeft, 2, Direction::kForward, 1),
                  std::out_of_range);
}
