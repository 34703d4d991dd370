// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "sflow/scene.hpp"

namespace sflow {

// Parses a scene-description document (JSON). Throws ParseError with a
// line or field path for malformed input, ValidationError (naming the
// mesh) for invariant violations. Total and deterministic.
Scene parse_scene(const std::string& text);

// Canonical serialization: alphabetical keys, fixed layout, reals at %.9g
// except rotation matrices, which keep exact (shortest round-trip) form so
// reconstructed rotations stay orthonormal well inside 1e-9. Byte-stable:
// serialize(parse(serialize(s))) == serialize(s).
std::string serialize_scene(const Scene& scene);

}  // namespace sflow
