// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "sflow/float_map.hpp"
#include "sflow/renderer.hpp"

namespace sflow {

// On-disk layout, one directory per (frame, side, direction):
//   <root>/<frame>/<side>/<direction>/
//     image.ppm      shaded preview
//     depth.pfm      z-depth, meters (1 channel)
//     disparity.pfm  pixels (1 channel)
//     sceneflow.pfm  3D motion, meters (3 channels)
//     flow.flo       optical flow, pixels
//     anchors.pfm    (mesh id, triangle id, 0) as floats (3 channels)
//     valid.pgm      255 where a surface was hit
//     static.pgm     255 where the anchor mesh is static
//     meta.txt       key = value sidecar incl. the 12 ego-motion numbers
std::filesystem::path bundle_dir(const std::filesystem::path& root, int frame, Side side,
                                 Direction direction);

struct BundleMeta {
  CameraIntrinsics intrinsics;
  double baseline = 0.0;
  int frame = 0;
  Side side = Side::kLeft;
  Direction direction = Direction::kForward;
  RigidTransform ego_motion;
};

void write_bundle(const std::filesystem::path& root, const GroundTruthBundle& bundle,
                  const CameraIntrinsics& intrinsics, double baseline);

// File-backed view of a bundle: float32 maps exactly as stored.
struct LoadedBundle {
  int width = 0, height = 0;
  FloatMap depth;         // 1 channel
  FloatMap disparity;     // 1 channel
  FloatMap scene_flow;    // 3 channels
  FloatMap optical_flow;  // 2 channels
  FloatMap anchors;       // 3 channels
  std::vector<std::uint8_t> valid;
  std::vector<std::uint8_t> static_mask;
  BundleMeta meta;

  bool valid_at(int x, int y) const { return valid[static_cast<size_t>(y) * width + x] != 0; }
  bool static_at(int x, int y) const {
    return static_mask[static_cast<size_t>(y) * width + x] != 0;
  }
  // (mesh id, triangle id) anchor identity; (-1, -1) for sky pixels.
  std::pair<int, int> anchor_at(int x, int y) const;
};

LoadedBundle read_bundle(const std::filesystem::path& dir);

BundleMeta read_meta(const std::filesystem::path& path);
void write_meta(const std::filesystem::path& path, const BundleMeta& meta);

// Frame indices t for which a complete forward@t / backward@t+1 pair of
// both cameras exists under root, ascending.
std::vector<int> list_frame_pairs(const std::filesystem::path& root);

// Renders and writes every bundle of every frame pair: forward bundles at
// t in [0, frames-2], backward bundles at t+1, both cameras. Rows render
// in parallel; output bytes are independent of thread_count.
void render_dataset(const Scene& scene, const std::filesystem::path& root, int thread_count,
                    bool forward_only = false,
                    const std::function<void(const GroundTruthBundle&)>& on_bundle = {});

}  // namespace sflow
