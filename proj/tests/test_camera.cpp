// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sflow/camera.hpp"
#include "sflow/rng.hpp"
#include "test_scenes.hpp"

using namespace sflow;

namespace {

StereoRig identity_rig(int frames = 1) {
  StereoRig rig;
  rig.intrinsics = testing::test_intrinsics();
  rig.baseline = 0.5;
  rig.left_poses.assign(frames, RigidTransform::identity());
  return rig;
}

}  // namespace

TEST_CASE("camera_ray: examples") {
  const StereoRig rig = identity_rig();

  const Ray center = camera_ray(rig, Side::kLeft, 0, 320.0, 240.0);
  CHECK(center.origin == Vec3{0, 0, 0});
  CHECK(norm(center.direction - Vec3{0, 0, 1}) < 1e-12);

  const Ray off = camera_ray(rig, Side::kLeft, 0, 420.0, 240.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(norm(off.direction - Vec3{inv_sqrt2, 0, inv_sqrt2}) < 1e-12);

  const Ray right = camera_ray(rig, Side::kRight, 0, 320.0, 240.0);
  CHECK(norm(right.origin - Vec3{0.5, 0, 0}) < 1e-12);
  CHECK(norm(right.direction - Vec3{0, 0, 1}) < 1e-12);
}

TEST_CASE("camera_ray: frame bounds") {
  const StereoRig rig = identity_rig(2);
  CHECK_THROWS_AS(camera_ray(rig, Side::kLeft, 2, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(camera_ray(rig, Side::kLeft, -1, 0, 0), std::out_of_range);
}

TEST_CASE("project: examples") {
  const CameraIntrinsics k = testing::test_intrinsics();

  const auto center = project(k, {0, 0, 5});
  REQUIRE(center.has_value());
  CHECK(center->u == doctest::Approx(320.0));
  CHECK(center->v == doctest::Approx(240.0));
  CHECK(center->depth == doctest::Approx(5.0));

  const auto off = project(k, {1, 0, 5});
  REQUIRE(off.has_value());
  CHECK(off->u == doctest::Approx(340.0));

  CHECK_FALSE(project(k, {0, 0, -1}).has_value());
  CHECK_FALSE(project(k, {0, 0, 0}).has_value());

  // Off-image projections are valid results.
  const auto outside = project(k, {100, 0, 1});
  REQUIRE(outside.has_value());
  CHECK(outside->u > k.width);
}

TEST_CASE("world_to_camera: examples") {
  StereoRig rig = identity_rig();
  CHECK(world_to_camera(rig, Side::kLeft, 0) == RigidTransform::identity());

  rig.left_poses[0] = RigidTransform{Mat3::identity(), {0, 0, 1}};
  CHECK(world_to_camera(rig, Side::kLeft, 0).translation == Vec3{0, 0, -1});

  rig.left_poses[0] = RigidTransform{rotation_y(0.3), {2, -1, 4}};
  const Vec3 center = rig.pose(Side::kLeft, 0).translation;
  CHECK(norm(transform_point(world_to_camera(rig, Side::kLeft, 0), center)) < 1e-12);
}

TEST_CASE("camera_ray and project invert each other") {
  CounterRng rng(31);
  StereoRig rig = identity_rig();
  rig.left_poses[0] = RigidTransform{rotation_y(0.4) * rotation_x(-0.2), {3, 1, -2}};
  const RigidTransform w2c = world_to_camera(rig, Side::kLeft, 0);

  for (int i = 0; i < 1000; ++i) {
    const Side side = rng.next_u64() % 2 ? Side::kLeft : Side::kRight;
    const double u = rng.uniform(0, rig.intrinsics.width);
    const double v = rng.uniform(0, rig.intrinsics.height);
    const double depth = rng.uniform(0.5, 50.0);
    const Ray ray = camera_ray(rig, side, 0, u, v);
    // Walk the ray until camera z-depth equals the target.
    const RigidTransform to_cam = side == Side::kLeft ? w2c : world_to_camera(rig, side, 0);
    const Vec3 dir_cam = to_cam.rotation * ray.direction;
    const Vec3 p_cam = dir_cam * (depth / dir_cam.z);
    const auto proj = project(rig.intrinsics, p_cam);
    REQUIRE(proj.has_value());
    CHECK(std::abs(proj->u - u) < 1e-6);
    CHECK(std::abs(proj->v - v) < 1e-6);
    CHECK(proj->depth == doctest::Approx(depth).epsilon(1e-9));
  }
}

TEST_CASE("right camera sits at +baseline on the left camera x axis") {
  CounterRng rng(32);
  StereoRig rig = identity_rig(20);
  for (int f = 0; f < 20; ++f)
    rig.left_poses[f] =
        RigidTransform{rotation_z(rng.uniform(0, 6.28)) * rotation_y(rng.uniform(0, 6.28)),
                       {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-50, 50)}};
  for (int f = 0; f < 20; ++f) {
    const Vec3 right_center = rig.pose(Side::kRight, f).translation;
    const Vec3 in_left = transform_point(world_to_camera(rig, Side::kLeft, f), right_center);
    CHECK(norm(in_left - Vec3{rig.baseline, 0, 0}) < 1e-9);
  }
}
