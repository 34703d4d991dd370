// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/scene.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "sflow/errors.hpp"

namespace sflow {

std::vector<Vec3> mesh_vertices_at(const Mesh& mesh, int frame) {
  if (frame < 0 || frame >= static_cast<int>(mesh.poses.size()))
    throw std::out_of_range("mesh " + std::to_string(mesh.id) + ": frame " +
                            std::to_string(frame) + " out of range");
  const std::vector<Vec3>& base =
      mesh.has_deformation() ? mesh.deformation[frame] : mesh.vertices;
  const RigidTransform& pose = mesh.poses[frame];
  std::vector<Vec3> world(base.size());
  for (size_t i = 0; i < base.size(); ++i) world[i] = transform_point(pose, base[i]);
  return world;
}

namespace {

void validate_mesh(const Mesh& mesh, int frame_count) {
  const std::string tag = "mesh " + std::to_string(mesh.id) + ": ";
  if (static_cast<int>(mesh.poses.size()) != frame_count)
    throw ValidationError(tag + "pose track length " + std::to_string(mesh.poses.size()) +
                          " != frame count " + std::to_string(frame_count));
  const int vertex_count = static_cast<int>(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices)
    if (!is_finite(v)) throw ValidationError(tag + "non-finite vertex");
  for (const Triangle& t : mesh.triangles) {
    if (t.v0 == t.v1 || t.v1 == t.v2 || t.v0 == t.v2)
      throw ValidationError(tag + "triangle with repeated vertex index");
    if (t.v0 < 0 || t.v1 < 0 || t.v2 < 0 || t.v0 >= vertex_count || t.v1 >= vertex_count ||
        t.v2 >= vertex_count)
      throw ValidationError(tag + "triangle index out of range");
  }
  if (mesh.has_deformation()) {
    if (static_cast<int>(mesh.deformation.size()) != frame_count)
      throw ValidationError(tag + "deformation track length " +
                            std::to_string(mesh.deformation.size()) + " != frame count " +
                            std::to_string(frame_count));
    for (const auto& frame_vertices : mesh.deformation)
      if (frame_vertices.size() != mesh.vertices.size())
        throw ValidationError(tag + "deformation entry vertex count " +
                              std::to_string(frame_vertices.size()) + " != base vertex count " +
                              std::to_string(mesh.vertices.size()));
  }
  if (mesh.is_static) {
    if (mesh.has_deformation())
      throw ValidationError(tag + "static mesh carries a deformation track");
    for (const RigidTransform& pose : mesh.poses)
      if (!(pose == mesh.poses.front()))
        throw ValidationError(tag + "static mesh with a non-constant pose track");
  }
}

}  // namespace

void validate_scene(const Scene& scene) {
  if (scene.frame_count < 1) throw ValidationError("frame count must be positive");

  const CameraIntrinsics& k = scene.rig.intrinsics;
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) throw ValidationError("camera: fx and fy must be positive");
  if (k.width <= 0 || k.height <= 0) throw ValidationError("camera: image size must be positive");
  if (!(k.cx > 0.0 && k.cx < k.width) || !(k.cy > 0.0 && k.cy < k.height))
    throw ValidationError("camera: principal point outside the image");
  if (!(scene.rig.baseline > 0.0)) throw ValidationError("camera: baseline must be positive");
  if (static_cast<int>(scene.rig.left_poses.size()) != scene.frame_count)
    throw ValidationError("camera: pose track length " +
                          std::to_string(scene.rig.left_poses.size()) + " != frame count " +
                          std::to_string(scene.frame_count));

  if (std::abs(norm(scene.light_direction) - 1.0) > 1e-6)
    throw ValidationError("light direction must be unit length");
  if (scene.ambient < 0.0 || scene.ambient > 1.0)
    throw ValidationError("ambient must lie in [0, 1]");

  std::set<int> ids;
  for (const Mesh& mesh : scene.meshes) {
    if (!ids.insert(mesh.id).second)
      throw ValidationError("mesh " + std::to_string(mesh.id) + ": duplicate mesh id");
    validate_mesh(mesh, scene.frame_count);
  }
}

namespace {

bool meshes_equal(const Mesh& a, const Mesh& b) {
  return a.id == b.id && a.material == b.material && a.is_static == b.is_static &&
         a.vertices == b.vertices && a.triangles == b.triangles && a.poses == b.poses &&
         a.deformation == b.deformation;
}

}  // namespace

bool scene_equal(const Scene& a, const Scene& b) {
  if (a.frame_count != b.frame_count || !(a.light_direction == b.light_direction) ||
      a.ambient != b.ambient)
    return false;
  if (!(a.rig.intrinsics == b.rig.intrinsics) || a.rig.baseline != b.rig.baseline ||
      a.rig.left_poses != b.rig.left_poses)
    return false;
  if (a.meshes.size() != b.meshes.size()) return false;
  for (size_t i = 0; i < a.meshes.size(); ++i)
    if (!meshes_equal(a.meshes[i], b.meshes[i])) return false;
  return true;
}

}  // namespace sflow
