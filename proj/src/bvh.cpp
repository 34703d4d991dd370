// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/bvh.hpp"

#include <algorithm>
#include <array>

namespace sflow {

namespace {

Aabb primitive_box(const Bvh::Primitive& p) {
  Aabb b;
  b.expand(p.v0);
  b.expand(p.v1);
  b.expand(p.v2);
  return b;
}

Vec3 centroid(const Bvh::Primitive& p) {
  return (p.v0 + p.v1 + p.v2) / 3.0;
}

double axis_value(const Vec3& v, int axis) {
  return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
}

// Slab test against [t_min, t_max]; inclusive bounds so hits lying exactly
// on a box face are never culled.
bool box_hit(const Aabb& box, const Vec3& origin, const Vec3& inv_dir, double t_max) {
  double t0 = kMinHitDistance, t1 = t_max;
  const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
  const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
  const double o[3] = {origin.x, origin.y, origin.z};
  const double inv[3] = {inv_dir.x, inv_dir.y, inv_dir.z};
  for (int a = 0; a < 3; ++a) {
    double near = (lo[a] - o[a]) * inv[a];
    double far = (hi[a] - o[a]) * inv[a];
    if (inv[a] < 0.0) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) return false;
  }
  return true;
}

bool hit_improves(const SceneHit& candidate, const SceneHit& best) {
  if (candidate.t != best.t) return candidate.t < best.t;
  if (candidate.mesh_id != best.mesh_id) return candidate.mesh_id < best.mesh_id;
  return candidate.tri_id < best.tri_id;
}

}  // namespace

Bvh Bvh::build(std::vector<Primitive> primitives, int leaf_size) {
  Bvh bvh;
  bvh.primitives_ = std::move(primitives);
  if (bvh.primitives_.empty()) return bvh;

  struct Range {
    int first, count, node;
  };

  bvh.nodes_.push_back(Node{});
  std::vector<Range> stack{{0, static_cast<int>(bvh.primitives_.size()), 0}};
  while (!stack.empty()) {
    const Range range = stack.back();
    stack.pop_back();

    Aabb box;
    Aabb centroid_box;
    for (int i = range.first; i < range.first + range.count; ++i) {
      box.expand(primitive_box(bvh.primitives_[i]));
      centroid_box.expand(centroid(bvh.primitives_[i]));
    }
    Node& node = bvh.nodes_[range.node];
    node.box = box;

    const Vec3 extent = centroid_box.hi - centroid_box.lo;
    int axis = 0;
    if (extent.y > axis_value(extent, axis)) axis = 1;
    if (extent.z > axis_value(extent, axis)) axis = 2;

    // All centroids coincident: splitting cannot make progress.
    if (range.count <= leaf_size || axis_value(extent, axis) <= 0.0) {
      node.first = range.first;
      node.count = range.count;
      continue;
    }

    const auto begin = bvh.primitives_.begin() + range.first;
    const auto mid = begin + range.count / 2;
    const auto end = begin + range.count;
    std::nth_element(begin, mid, end, [axis](const Primitive& a, const Primitive& b) {
      const double ca = axis_value(centroid(a), axis);
      const double cb = axis_value(centroid(b), axis);
      if (ca != cb) return ca < cb;
      if (a.mesh_id != b.mesh_id) return a.mesh_id < b.mesh_id;
      return a.tri_id < b.tri_id;
    });

    const int left = static_cast<int>(bvh.nodes_.size());
    bvh.nodes_.push_back(Node{});
    bvh.nodes_.push_back(Node{});
    bvh.nodes_[range.node].left = left;
    bvh.nodes_[range.node].right = left + 1;
    const int half = range.count / 2;
    stack.push_back({range.first, half, left});
    stack.push_back({range.first + half, range.count - half, left + 1});
  }
  return bvh;
}

std::optional<SceneHit> Bvh::intersect(const Ray& ray) const {
  if (primitives_.empty()) return std::nullopt;

  const Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
  SceneHit best;
  best.t = 1e300;
  bool found = false;

  std::array<int, 64> stack;
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (!box_hit(node.box, ray.origin, inv_dir, best.t)) continue;
    if (node.is_leaf()) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const Primitive& prim = primitives_[i];
        const auto hit = ray_triangle_intersect(ray, prim.v0, prim.v1, prim.v2);
        if (!hit) continue;
        const SceneHit candidate{prim.mesh_id, prim.tri_id, hit->t, hit->bary};
        if (!found || hit_improves(candidate, best)) {
          best = candidate;
          found = true;
        }
      }
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  if (!found) return std::nullopt;
  return best;
}

}  // namespace sflow
