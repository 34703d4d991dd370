// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sflow/float_map.hpp"

namespace sflow {

// PFM: header "Pf" (1 channel) or "PF" (3 channels), "width height", scale
// line "-1.0" (negative marks little-endian), then raw float32 rows stored
// BOTTOM row first. Round trips are bit-exact; NaNs canonicalize on write.
void write_pfm(const FloatMap& map, const std::filesystem::path& path);
FloatMap read_pfm(const std::filesystem::path& path);

// Middlebury .flo: float magic 202021.25, int32 width, int32 height, then
// interleaved (u, v) float32 pairs, top row first, all little-endian.
void write_flo(const FloatMap& map, const std::filesystem::path& path);
FloatMap read_flo(const std::filesystem::path& path);

// Binary P6, maxval 255. Values clamped to [0, 1], scaled and rounded
// half-up. rgb holds width*height*3 values, top row first.
void write_ppm(const std::vector<double>& rgb, int width, int height,
               const std::filesystem::path& path);

// Binary P5 mask: nonzero -> 255, zero -> 0.
void write_pgm(const std::vector<std::uint8_t>& mask, int width, int height,
               const std::filesystem::path& path);
std::vector<std::uint8_t> read_pgm(const std::filesystem::path& path, int& width, int& height);

// Direction -> hue, magnitude -> saturation at full value; zero flow is
// white, NaN pixels are black. Returns width*height*3 doubles in [0, 1].
std::vector<double> flow_to_color(const FloatMap& flow, double max_magnitude);

// Near-white to far-black depth preview; NaN pixels are black.
std::vector<double> depth_to_gray(const FloatMap& depth, double max_depth);

}  // namespace sflow
