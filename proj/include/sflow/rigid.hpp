// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "sflow/errors.hpp"
#include "sflow/vec.hpp"

namespace sflow {

inline constexpr double kRotationTolerance = 1e-9;

// SE(3) element: p -> rotation * p + translation. Used for mesh poses,
// camera poses, and ego-motion.
struct RigidTransform {
  Mat3 rotation;
  Vec3 translation;

  static RigidTransform identity() { return RigidTransform{}; }

  // Validating factory: rejects rotations that are not proper rotations
  // within kRotationTolerance. Internal algebra (compose/inverse) builds
  // results directly from already-validated inputs.
  static RigidTransform make(const Mat3& rotation, const Vec3& translation) {
    const double defect = orthonormality_defect(rotation);
    if (defect > kRotationTolerance)
      throw ValidationError("rotation is not orthonormal with det +1 (defect " +
                            std::to_string(defect) + ")");
    if (!is_finite(translation))
      throw ValidationError("translation has non-finite components");
    return RigidTransform{rotation, translation};
  }

  bool operator==(const RigidTransform& b) const {
    return rotation == b.rotation && translation == b.translation;
  }
};

inline Vec3 transform_point(const RigidTransform& t, const Vec3& p) {
  return t.rotation * p + t.translation;
}

// a after b: x -> a(b(x)).
inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline RigidTransform rigid_inverse(const RigidTransform& t) {
  const Mat3 inv = t.rotation.inverse();
  return {inv, -(inv * t.translation)};
}

}  // namespace sflow
