// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "sflow/vec.hpp"

namespace sflow {

// Minimum accepted hit distance along a ray, in meters. Rejects self-hits
// when a ray starts on a surface.
inline constexpr double kMinHitDistance = 1e-7;

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

// Vertex indices into the owning mesh's vertex array.
struct Triangle {
  int v0 = 0, v1 = 0, v2 = 0;

  bool operator==(const Triangle& b) const { return v0 == b.v0 && v1 == b.v1 && v2 == b.v2; }
};

// Weights over a triangle's vertices; sum to 1, each >= 0 after edge clamping.
struct Barycentric {
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
};

struct TriangleHit {
  double t = 0.0;  // distance along the ray, meters
  Barycentric bary;
};

inline Vec3 barycentric_point(const Vec3& v0, const Vec3& v1, const Vec3& v2,
                              const Barycentric& bary) {
  return v0 * bary.w0 + v1 * bary.w1 + v2 * bary.w2;
}

// Moller-Trumbore parametric solve. Degenerate (zero-area) triangles and
// rays parallel to the triangle plane miss. Hits whose weights fall in
// [-1e-9, 0) are clamped to the edge and renormalized so shared edges do
// not drop pixels.
inline std::optional<TriangleHit> ray_triangle_intersect(const Ray& ray, const Vec3& v0,
                                                         const Vec3& v1, const Vec3& v2) {
  constexpr double kEdgeSlack = 1e-9;

  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 p = cross(ray.direction, e2);
  const double det = dot(e1, p);
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;

  const double inv_det = 1.0 / det;
  const Vec3 s = ray.origin - v0;
  const double u = dot(s, p) * inv_det;
  if (u < -kEdgeSlack || u > 1.0 + kEdgeSlack) return std::nullopt;

  const Vec3 q = cross(s, e1);
  const double v = dot(ray.direction, q) * inv_det;
  if (v < -kEdgeSlack || u + v > 1.0 + kEdgeSlack) return std::nullopt;

  const double t = dot(e2, q) * inv_det;
  if (!(t > kMinHitDistance) || !std::isfinite(t)) return std::nullopt;

  double w1 = u < 0.0 ? 0.0 : u;
  double w2 = v < 0.0 ? 0.0 : v;
  double w0 = 1.0 - w1 - w2;
  if (w0 < 0.0) w0 = 0.0;
  const double sum = w0 + w1 + w2;
  return TriangleHit{t, Barycentric{w0 / sum, w1 / sum, w2 / sum}};
}

}  // namespace sflow
