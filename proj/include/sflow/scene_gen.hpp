// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "sflow/camera.hpp"
#include "sflow/catalog.hpp"
#include "sflow/rigid.hpp"

namespace sflow {

enum class Preset { kRoad, kOrbit, kRandomBoxes };

const char* to_string(Preset p);
Preset preset_from_string(const std::string& name);

// Generation is a pure function of (params, catalog): identical inputs
// produce byte-identical documents.
struct GenParams {
  Preset preset = Preset::kRoad;
  std::uint64_t seed = 0;
  int frame_count = 3;
  int actor_count = 4;
  double actor_speed_min = 0.2;  // m/frame
  double actor_speed_max = 1.0;
  double camera_speed = 1.0;  // m/frame
  CameraIntrinsics intrinsics{525.0, 525.0, 320.0, 240.0, 640, 480};
  double baseline = 0.5;  // meters
  double extent = 20.0;   // scene half-width, meters
};

struct TrajectorySpec {
  enum class Kind { kLinear, kArc, kStationary };
  Kind kind = Kind::kStationary;
  Vec3 origin;       // linear: start position; arc: circle center
  Vec3 heading;      // unit; linear: motion direction; arc: initial radial direction
  double speed = 0.0;      // m/frame; arc length per frame for arcs
  double arc_radius = 0.0; // arc only, > 0
};

// Pose at a discrete frame. Linear tracks align object x to the heading;
// arc tracks run in the xz-plane around origin, tangent-aligned.
RigidTransform sample_trajectory(const TrajectorySpec& spec, int frame);

// Produces a scene-description document for the preset. The catalog must
// resolve the preset's required asset classes (ground, cube, signpost).
std::string generate_scene(const GenParams& params, const Catalog& catalog);

}  // namespace sflow
