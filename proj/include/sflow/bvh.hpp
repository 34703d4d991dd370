// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "sflow/geometry.hpp"

namespace sflow {

struct Aabb {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void expand(const Vec3& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }
  void expand(const Aabb& b) { expand(b.lo); expand(b.hi); }
  bool contains(const Aabb& b) const {
    return lo.x <= b.lo.x && lo.y <= b.lo.y && lo.z <= b.lo.z &&
           hi.x >= b.hi.x && hi.y >= b.hi.y && hi.z >= b.hi.z;
  }
};

// Nearest hit over a triangle soup tagged with (mesh id, triangle id).
// Equal-t ties resolve to the lowest (mesh id, triangle id).
struct SceneHit {
  int mesh_id = 0;
  int tri_id = 0;
  double t = 0.0;
  Barycentric bary;
};

// Binary AABB tree with median splits on the longest centroid axis.
// Immutable after build; intersect returns exactly what a linear scan over
// the same primitives would.
class Bvh {
 public:
  struct Primitive {
    int mesh_id = 0;
    int tri_id = 0;
    Vec3 v0, v1, v2;
  };

  struct Node {
    Aabb box;
    int left = -1;         // child index; -1 for leaf
    int right = -1;
    int first = 0, count = 0;  // leaf primitive range
    bool is_leaf() const { return left < 0; }
  };

  static Bvh build(std::vector<Primitive> primitives, int leaf_size = 4);

  std::optional<SceneHit> intersect(const Ray& ray) const;

  bool empty() const { return primitives_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Primitive>& primitives() const { return primitives_; }

 private:
  std::vector<Primitive> primitives_;  // reordered during build
  std::vector<Node> nodes_;
};

}  // namespace sflow
