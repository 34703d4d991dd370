// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace sflow {

// Fixed quiet-NaN payload used for invalid pixels in every float channel.
// Writers canonicalize any NaN to this pattern so files stay bit-exact
// round trips.
inline constexpr std::uint32_t kInvalidBits = 0x7FC00000u;

inline float invalid_value() { return std::bit_cast<float>(kInvalidBits); }

// Dense 32-bit float image, row-major, top row first, channels interleaved.
struct FloatMap {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1, 2, or 3
  std::vector<float> data;

  static FloatMap make(int width, int height, int channels, float fill = 0.0f) {
    FloatMap m;
    m.width = width;
    m.height = height;
    m.channels = channels;
    m.data.assign(static_cast<size_t>(width) * height * channels, fill);
    return m;
  }

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

}  // namespace sflow
