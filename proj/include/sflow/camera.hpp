// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sflow/geometry.hpp"
#include "sflow/rigid.hpp"

namespace sflow {

// Pinhole model, no distortion. Pixel (u, v) addresses the CENTER of the
// pixel in column u, row v; the camera looks along +z with x right, y down.
struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0;  // focal lengths, pixels
  double cx = 0.0, cy = 0.0;  // principal point, pixels
  int width = 0, height = 0;

  bool operator==(const CameraIntrinsics&) const = default;
};

enum class Side { kLeft, kRight };

inline const char* to_string(Side s) { return s == Side::kLeft ? "left" : "right"; }

// Rectified stereo pair sharing one set of intrinsics. Only the left
// camera's trajectory is stored; the right camera sits at +baseline along
// the left camera's x axis at every frame.
struct StereoRig {
  CameraIntrinsics intrinsics;
  double baseline = 0.0;                  // meters
  std::vector<RigidTransform> left_poses;  // camera -> world, one per frame

  int frame_count() const { return static_cast<int>(left_poses.size()); }

  const RigidTransform& left_pose(int frame) const {
    check_frame(frame);
    return left_poses[frame];
  }

  RigidTransform pose(Side side, int frame) const {
    check_frame(frame);
    if (side == Side::kLeft) return left_poses[frame];
    return compose(left_poses[frame], RigidTransform{Mat3::identity(), {baseline, 0.0, 0.0}});
  }

  void check_frame(int frame) const {
    if (frame < 0 || frame >= frame_count())
      throw std::out_of_range("camera frame " + std::to_string(frame) + " out of range [0, " +
                              std::to_string(frame_count()) + ")");
  }
};

inline RigidTransform world_to_camera(const StereoRig& rig, Side side, int frame) {
  return rigid_inverse(rig.pose(side, frame));
}

// Ray through pixel center (u, v); the pixel may lie outside the image
// bounds (verification resamples off-image positions).
inline Ray camera_ray(const StereoRig& rig, Side side, int frame, double u, double v) {
  const RigidTransform pose = rig.pose(side, frame);
  const CameraIntrinsics& k = rig.intrinsics;
  const Vec3 dir_cam{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
  return Ray{pose.translation, normalized(pose.rotation * dir_cam)};
}

struct Projection {
  double u = 0.0, v = 0.0;
  double depth = 0.0;  // z-depth, meters
};

// Projects a camera-space point; empty when the point is at or behind the
// camera plane (caller records the invalid flag). Off-image pixel
// coordinates are valid results.
inline std::optional<Projection> project(const CameraIntrinsics& k, const Vec3& p_cam) {
  if (!(p_cam.z > 0.0)) return std::nullopt;
  return Projection{k.fx * p_cam.x / p_cam.z + k.cx, k.fy * p_cam.y / p_cam.z + k.cy, p_cam.z};
}

}  // namespace sflow
