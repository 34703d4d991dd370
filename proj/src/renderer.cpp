// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/renderer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sflow/parallel.hpp"

namespace sflow {

FrameGeometry build_frame_geometry(const Scene& scene, int frame) {
  FrameGeometry geom;
  geom.scene = &scene;
  geom.frame = frame;
  geom.world_vertices.reserve(scene.meshes.size());
  std::vector<Bvh::Primitive> primitives;
  for (size_t m = 0; m < scene.meshes.size(); ++m) {
    const Mesh& mesh = scene.meshes[m];
    geom.mesh_index.emplace(mesh.id, static_cast<int>(m));
    geom.world_vertices.push_back(mesh_vertices_at(mesh, frame));
    const std::vector<Vec3>& verts = geom.world_vertices.back();
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      const Triangle& tri = mesh.triangles[t];
      primitives.push_back({mesh.id, static_cast<int>(t), verts[tri.v0], verts[tri.v1],
                            verts[tri.v2]});
    }
  }
  geom.bvh = Bvh::build(std::move(primitives));
  return geom;
}

std::optional<SurfaceAnchor> primary_hit(const FrameGeometry& geom, const Ray& ray) {
  const auto hit = geom.bvh.intersect(ray);
  if (!hit) return std::nullopt;
  return SurfaceAnchor{hit->mesh_id, hit->tri_id, hit->bary,
                       ray.origin + ray.direction * hit->t};
}

std::optional<SurfaceAnchor> primary_hit(const Scene& scene, Side side, int frame, double u,
                                         double v) {
  const FrameGeometry geom = build_frame_geometry(scene, frame);
  return primary_hit(geom, camera_ray(scene.rig, side, frame, u, v));
}

Vec3 track_anchor(const SurfaceAnchor& anchor, const FrameGeometry& target_geom) {
  const int index = target_geom.mesh_index.at(anchor.mesh_id);
  const Triangle& tri = target_geom.scene->meshes[index].triangles[anchor.tri_id];
  const std::vector<Vec3>& verts = target_geom.world_vertices[index];
  return barycentric_point(verts[tri.v0], verts[tri.v1], verts[tri.v2], anchor.bary);
}

Vec3 track_anchor(const SurfaceAnchor& anchor, const Scene& scene, int target_frame) {
  for (const Mesh& mesh : scene.meshes) {
    if (mesh.id != anchor.mesh_id) continue;
    const std::vector<Vec3> verts = mesh_vertices_at(mesh, target_frame);
    const Triangle& tri = mesh.triangles[anchor.tri_id];
    return barycentric_point(verts[tri.v0], verts[tri.v1], verts[tri.v2], anchor.bary);
  }
  throw std::out_of_range("anchor references unknown mesh id " +
                          std::to_string(anchor.mesh_id));
}

int target_frame_of(int frame, Direction direction) {
  return direction == Direction::kForward ? frame + 1 : frame - 1;
}

RigidTransform ego_motion_of(const StereoRig& rig, Side side, int frame, Direction direction) {
  const int target = target_frame_of(frame, direction);
  return compose(world_to_camera(rig, side, target), rig.pose(side, frame));
}

Vec3 shade(const SurfaceAnchor& anchor, const Scene& scene, const FrameGeometry& geom) {
  const int index = geom.mesh_index.at(anchor.mesh_id);
  const Mesh& mesh = scene.meshes[index];
  const Triangle& tri = mesh.triangles[anchor.tri_id];
  const std::vector<Vec3>& verts = geom.world_vertices[index];
  const Vec3 n = normalized(cross(verts[tri.v1] - verts[tri.v0], verts[tri.v2] - verts[tri.v0]));
  const double diffuse = std::max(0.0, dot(n, scene.light_direction));
  const double lit = scene.ambient + (1.0 - scene.ambient) * diffuse;
  return mesh.material.albedo * lit;
}

namespace {

struct PixelOutput {
  SceneFlowSample sample;
  SurfaceAnchor anchor;
  bool is_static = false;
  Vec3 color;
};

PixelOutput compute_pixel(const Scene& scene, const FrameGeometry& ref_geom,
                          const FrameGeometry& target_geom, Side side, int frame, double u,
                          double v, const RigidTransform& w2c_ref,
                          const RigidTransform& w2c_target) {
  PixelOutput out;
  const Ray ray = camera_ray(scene.rig, side, frame, u, v);
  const auto anchor = primary_hit(ref_geom, ray);
  if (!anchor) {
    out.color = kSkyColor;
    return out;
  }
  out.anchor = *anchor;
  out.color = shade(*anchor, scene, ref_geom);
  const int mesh_index = ref_geom.mesh_index.at(anchor->mesh_id);
  out.is_static = scene.meshes[mesh_index].is_static;

  SceneFlowSample& s = out.sample;
  s.valid_hit = true;
  s.q_t = transform_point(w2c_ref, anchor->hit_point);
  const Vec3 tracked = track_anchor(*anchor, target_geom);
  s.q_t1 = transform_point(w2c_target, tracked);
  s.motion = s.q_t1 - s.q_t;
  return out;
}

}  // namespace

GroundTruthBundle render_bundle(const Scene& scene, const FrameGeometry& ref_geom,
                                const FrameGeometry& target_geom, Side side, int frame,
                                Direction direction, int thread_count) {
  const int target = target_frame_of(frame, direction);
  if (frame < 0 || frame >= scene.frame_count || target < 0 || target >= scene.frame_count)
    throw std::out_of_range("no frame pair (" + std::to_string(frame) + ", " +
                            std::to_string(target) + ") in a " +
                            std::to_string(scene.frame_count) + "-frame scene");
  if (ref_geom.frame != frame || target_geom.frame != target)
    throw std::invalid_argument("frame geometry does not match the requested frame pair");

  const CameraIntrinsics& k = scene.rig.intrinsics;
  GroundTruthBundle b;
  b.width = k.width;
  b.height = k.height;
  b.side = side;
  b.direction = direction;
  b.frame = frame;
  b.ego_motion = ego_motion_of(scene.rig, side, frame, direction);

  const size_t n = static_cast<size_t>(k.width) * k.height;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  b.depth.assign(n, nan);
  b.disparity.assign(n, nan);
  b.scene_flow.assign(n * 3, nan);
  b.optical_flow.assign(n * 2, nan);
  b.valid.assign(n, 0);
  b.static_mask.assign(n, 0);
  b.anchor_mesh.assign(n, -1);
  b.anchor_tri.assign(n, -1);
  b.shaded.assign(n * 3, 0.0);

  const RigidTransform w2c_ref = world_to_camera(scene.rig, side, frame);
  const RigidTransform w2c_target = world_to_camera(scene.rig, side, target);
  const double fxb = k.fx * scene.rig.baseline;

  parallel_for(k.height, thread_count, [&](int y) {
    for (int x = 0; x < k.width; ++x) {
      const PixelOutput out =
          compute_pixel(scene, ref_geom, target_geom, side, frame,
                        static_cast<double>(x), static_cast<double>(y), w2c_ref, w2c_target);
      const size_t i = b.pixel_index(x, y);
      b.shaded[i * 3 + 0] = out.color.x;
      b.shaded[i * 3 + 1] = out.color.y;
      b.shaded[i * 3 + 2] = out.color.z;
      if (!out.sample.valid_hit) continue;

      const SceneFlowSample& s = out.sample;
      b.valid[i] = 1;
      b.static_mask[i] = out.is_static ? 1 : 0;
      b.anchor_mesh[i] = out.anchor.mesh_id;
      b.anchor_tri[i] = out.anchor.tri_id;
      b.depth[i] = s.q_t.z;
      b.disparity[i] = fxb / s.q_t.z;
      b.scene_flow[i * 3 + 0] = s.motion.x;
      b.scene_flow[i * 3 + 1] = s.motion.y;
      b.scene_flow[i * 3 + 2] = s.motion.z;
      if (const auto proj = project(k, s.q_t1)) {
        b.optical_flow[i * 2 + 0] = proj->u - x;
        b.optical_flow[i * 2 + 1] = proj->v - y;
      }
    }
  });
  return b;
}

GroundTruthBundle render_bundle(const Scene& scene, Side side, int frame, Direction direction,
                                int thread_count) {
  const int target = target_frame_of(frame, direction);
  if (frame < 0 || frame >= scene.frame_count || target < 0 || target >= scene.frame_count)
    throw std::out_of_range("no frame pair (" + std::to_string(frame) + ", " +
                            std::to_string(target) + ") in a " +
                            std::to_string(scene.frame_count) + "-frame scene");
  const FrameGeometry ref_geom = build_frame_geometry(scene, frame);
  const FrameGeometry target_geom = build_frame_geometry(scene, target);
  return render_bundle(scene, ref_geom, target_geom, side, frame, direction, thread_count);
}

SceneFlowSample scene_flow_at(const Scene& scene, Side side, int frame, double u, double v) {
  const int target = target_frame_of(frame, Direction::kForward);
  const FrameGeometry ref_geom = build_frame_geometry(scene, frame);
  const FrameGeometry target_geom = build_frame_geometry(scene, target);
  const PixelOutput out =
      compute_pixel(scene, ref_geom, target_geom, side, frame, u, v,
                    world_to_camera(scene.rig, side, frame),
                    world_to_camera(scene.rig, side, target));
  SceneFlowSample sample = out.sample;
  if (sample.valid_hit) {
    const auto proj = project(scene.rig.intrinsics, sample.q_t1);
    sample.target_behind_camera = !proj.has_value();
    if (proj) {
      const CameraIntrinsics& k = scene.rig.intrinsics;
      sample.target_out_of_image = proj->u < 0.0 || proj->u >= k.width || proj->v < 0.0 ||
                                   proj->v >= k.height;
    }
  }
  return sample;
}

}  // namespace sflow
