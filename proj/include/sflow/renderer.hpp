// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sflow/bvh.hpp"
#include "sflow/scene.hpp"

namespace sflow {

enum class Direction { kForward, kBackward };

inline const char* to_string(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

// A pixel's first surface hit, anchored to the triangle that produced it.
// The (mesh, triangle, barycentric) triple survives rigid motion and
// deformation, so the surface point can be re-evaluated at any frame.
struct SurfaceAnchor {
  int mesh_id = 0;
  int tri_id = 0;
  Barycentric bary;
  Vec3 hit_point;  // world, at the frame the anchor was created
};

struct SceneFlowSample {
  Vec3 q_t;      // reference-camera coordinates at the reference frame
  Vec3 q_t1;     // same physical camera, target frame coordinates
  Vec3 motion;   // q_t1 - q_t
  bool valid_hit = false;
  bool target_behind_camera = false;
  bool target_out_of_image = false;
};

// World-space vertex arrays plus the acceleration structure for one frame.
// Holds a pointer to the scene it was built from; the scene must outlive it.
struct FrameGeometry {
  const Scene* scene = nullptr;
  int frame = 0;
  std::vector<std::vector<Vec3>> world_vertices;  // parallel to scene.meshes
  std::unordered_map<int, int> mesh_index;        // mesh id -> index
  Bvh bvh;
};

FrameGeometry build_frame_geometry(const Scene& scene, int frame);

// Dense per-pixel ground truth for one camera and one frame pair. All maps
// stay in double precision here; files narrow to float32 on write.
struct GroundTruthBundle {
  int width = 0, height = 0;
  std::vector<double> depth;         // H*W, z-depth at the reference frame, meters
  std::vector<double> disparity;     // H*W, pixels
  std::vector<double> scene_flow;    // H*W*3, meters
  std::vector<double> optical_flow;  // H*W*2, pixels
  std::vector<std::uint8_t> valid;   // H*W, 1 where a surface was hit
  std::vector<std::uint8_t> static_mask;  // H*W, 1 where the anchor mesh is static
  std::vector<std::int32_t> anchor_mesh;  // H*W, -1 where invalid
  std::vector<std::int32_t> anchor_tri;   // H*W, -1 where invalid
  std::vector<double> shaded;        // H*W*3, preview image in [0, 1]
  RigidTransform ego_motion;         // camera(reference) -> camera(target)
  Side side = Side::kLeft;
  Direction direction = Direction::kForward;
  int frame = 0;  // reference frame index

  size_t pixel_index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
};

std::optional<SurfaceAnchor> primary_hit(const FrameGeometry& geom, const Ray& ray);
std::optional<SurfaceAnchor> primary_hit(const Scene& scene, Side side, int frame, double u,
                                         double v);

// Re-evaluates the anchored surface point with the stored barycentric
// weights against the target frame's vertex positions.
Vec3 track_anchor(const SurfaceAnchor& anchor, const FrameGeometry& target_geom);
Vec3 track_anchor(const SurfaceAnchor& anchor, const Scene& scene, int target_frame);

SceneFlowSample scene_flow_at(const Scene& scene, Side side, int frame, double u, double v);

// Lambertian with the face normal at the anchor's frame; sky pixels take
// the fixed sky color.
Vec3 shade(const SurfaceAnchor& anchor, const Scene& scene, const FrameGeometry& geom);
inline constexpr Vec3 kSkyColor{0.4, 0.6, 0.9};

// Transform mapping reference-camera coordinates at the reference frame to
// the same camera's coordinates at the target frame.
RigidTransform ego_motion_of(const StereoRig& rig, Side side, int frame, Direction direction);

int target_frame_of(int frame, Direction direction);

GroundTruthBundle render_bundle(const Scene& scene, Side side, int frame, Direction direction,
                                int thread_count);

// Shared-geometry variant: geometries must match the reference and target
// frames of (frame, direction).
GroundTruthBundle render_bundle(const Scene& scene, const FrameGeometry& ref_geom,
                                const FrameGeometry& target_geom, Side side, int frame,
                                Direction direction, int thread_count);

}  // namespace sflow
