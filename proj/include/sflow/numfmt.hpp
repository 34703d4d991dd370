// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace sflow {

// Canonical real formatting for scene documents: %.9g, locale-independent.
inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Shortest representation that parses back to the identical double. Used
// where exact round trips matter (rotations, ego-motion sidecars).
inline std::string format_exact(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Quantizes to the value the %.9g document form will reproduce. Idempotent.
inline double canonical_real(double v) {
  return std::strtod(format_g9(v).c_str(), nullptr);
}

}  // namespace sflow
