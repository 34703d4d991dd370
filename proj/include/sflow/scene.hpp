// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "sflow/camera.hpp"
#include "sflow/geometry.hpp"
#include "sflow/rigid.hpp"

namespace sflow {

struct Material {
  std::string id;  // catalog identifier, empty for ad-hoc materials
  Vec3 albedo{0.5, 0.5, 0.5};

  bool operator==(const Material&) const = default;
};

// Animated triangle mesh. Poses map object space to world space, one per
// frame. The optional deformation track replaces the base vertex array per
// frame (object space); frames are discrete, nothing interpolates.
struct Mesh {
  int id = 0;
  Material material;
  bool is_static = false;
  std::vector<Vec3> vertices;  // object space, meters
  std::vector<Triangle> triangles;
  std::vector<RigidTransform> poses;
  std::vector<std::vector<Vec3>> deformation;  // empty, or one vertex array per frame

  bool has_deformation() const { return !deformation.empty(); }
};

struct Scene {
  int frame_count = 0;
  std::vector<Mesh> meshes;
  StereoRig rig;
  Vec3 light_direction{0.0, -1.0, 0.0};  // unit, surface toward light
  double ambient = 0.2;
};

// World-space vertices of a mesh at one frame: pose applied to the
// deformed (or base) object-space array.
std::vector<Vec3> mesh_vertices_at(const Mesh& mesh, int frame);

// Throws ValidationError naming the offending mesh id; checks track
// lengths, index bounds, the static-flag contract, camera and light
// invariants.
void validate_scene(const Scene& scene);

bool scene_equal(const Scene& a, const Scene& b);

}  // namespace sflow
