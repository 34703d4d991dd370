// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sflow/dataset.hpp"

namespace sflow {

// For the two sampling-based checks the error map holds the EXCESS error:
// raw traversal error minus the rounding allowance that nearest-pixel
// sampling can legitimately introduce (per-hop local field gradient times
// the half-pixel rounding radius). Consistent data gives excess ~0 however
// steep the fields; corruption survives the subtraction and fails the
// gate. Raw statistics are reported alongside. The ego check is an exact
// identity: raw equals excess and the gate is the max.
struct CheckResult {
  std::string check;  // "roundtrip" | "fb" | "ego"
  int frame = 0;      // reference frame of the pair or bundle
  Side side = Side::kLeft;
  Direction direction = Direction::kForward;  // ego only; pairs are forward
  int width = 0, height = 0;
  std::vector<double> error_map;  // excess errors; NaN where not evaluated
  long evaluated = 0;
  long skipped = 0;
  double max_error = 0.0;   // of excess
  double mean_error = 0.0;
  double p99_error = 0.0;
  double raw_max = 0.0;     // before subtracting the rounding allowance
  double raw_mean = 0.0;
  double raw_p99 = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

// Everything one frame pair contributes: forward bundles at t, backward
// bundles at t+1, both cameras; disparity maps for both cameras at both
// frames ride along inside the bundles.
struct DatasetPair {
  int frame = 0;  // t
  LoadedBundle fwd_left, fwd_right;
  LoadedBundle bwd_left, bwd_right;
};

DatasetPair load_dataset_pair(const std::filesystem::path& root, int frame);

// Cyclic traversal left t -> left t+1 -> right t+1 -> right t -> left t
// via flow and disparity; consistent GT returns to the start pixel up to
// rounding. Hops leaving the image, landing on invalid pixels, or landing
// on a different (mesh, triangle) anchor than the start pixel (occlusion,
// silhouette) are counted skipped.
CheckResult round_trip_check(const DatasetPair& pair, double base_tolerance_px);

// Backward motion sampled at the forward target pixel must be the inverse
// of the forward motion; anchor-mismatched (occluded) pixels are skipped.
CheckResult forward_backward_check(const LoadedBundle& fwd, const LoadedBundle& bwd,
                                   double base_tolerance_m);

// For static-mesh pixels the ego-motion applied to the depth-reconstructed
// point must reproduce the scene-flow target exactly; gated on max error.
CheckResult ego_motion_check(const LoadedBundle& bundle,
                             const std::vector<std::uint8_t>& static_mask, double tolerance_m);

struct VerifyOptions {
  bool roundtrip = true;
  bool fb = true;
  bool ego = true;
  double roundtrip_tol_px = 0.5;
  double fb_tol_m = 1e-4;
  double ego_tol_m = 1e-6;
};

struct VerificationReport {
  std::vector<CheckResult> results;
  std::vector<std::string> item_errors;  // unreadable or inconsistent items

  bool ok() const {
    if (!item_errors.empty() || results.empty()) return false;
    for (const CheckResult& r : results)
      if (!r.pass) return false;
    return true;
  }
};

// Runs the selected checks over every frame pair and camera under root.
// Unreadable items become report errors, not exceptions. Forward-only
// datasets run the ego check alone.
VerificationReport verify_dataset(const std::filesystem::path& root, const VerifyOptions& opts);

std::string report_text(const VerificationReport& report);

// One line per check: frame, camera, check, evaluated, skipped, mean, p99,
// max, pass/fail.
std::string summary_text(const VerificationReport& report);

void write_report_files(const VerificationReport& report, const std::filesystem::path& root);

}  // namespace sflow
