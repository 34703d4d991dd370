// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sflow/scene.hpp"

namespace sflow::testing {

inline CameraIntrinsics test_intrinsics() {
  return CameraIntrinsics{100.0, 100.0, 320.0, 240.0, 640, 480};
}

inline Mesh quad_mesh(int id, double half_size, double z, int frames) {
  Mesh mesh;
  mesh.id = id;
  mesh.material.albedo = {0.8, 0.8, 0.8};
  mesh.is_static = true;
  mesh.vertices = {{-half_size, -half_size, z},
                   {half_size, -half_size, z},
                   {half_size, half_size, z},
                   {-half_size, half_size, z}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  mesh.poses.assign(frames, RigidTransform::identity());
  return mesh;
}

// Fronto-parallel square at distance z in front of a static camera;
// frame_count frames, identity camera track.
inline Scene plane_scene(double z = 5.0, int frames = 2, double half_size = 100.0) {
  Scene scene;
  scene.frame_count = frames;
  scene.rig.intrinsics = test_intrinsics();
  scene.rig.baseline = 0.5;
  scene.rig.left_poses.assign(frames, RigidTransform::identity());
  scene.light_direction = {0.0, 0.0, -1.0};
  scene.ambient = 0.2;
  scene.meshes.push_back(quad_mesh(0, half_size, z, frames));
  return scene;
}

// The same plane translating by velocity (m/frame) with a static camera.
inline Scene moving_plane_scene(const Vec3& velocity, double z = 5.0, int frames = 2) {
  Scene scene = plane_scene(z, frames);
  Mesh& mesh = scene.meshes[0];
  mesh.is_static = false;
  for (int f = 0; f < frames; ++f)
    mesh.poses[f] = RigidTransform{Mat3::identity(), velocity * static_cast<double>(f)};
  return scene;
}

// Static plane, camera advancing along its own axis by speed (m/frame).
inline Scene dolly_scene(double speed, double z = 5.0, int frames = 2) {
  Scene scene = plane_scene(z, frames);
  for (int f = 0; f < frames; ++f)
    scene.rig.left_poses[f] =
        RigidTransform{Mat3::identity(), {0.0, 0.0, speed * static_cast<double>(f)}};
  return scene;
}

}  // namespace sflow::testing
