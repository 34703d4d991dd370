// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "sflow/geometry.hpp"
#include "sflow/vec.hpp"

namespace sflow {

// One reusable asset: geometry, material, and free-form metadata are kept
// as separate clusters referenced from the record.
struct AssetRecord {
  std::string uuid;      // 128-bit id as 32 hex digits, dashes allowed
  std::string geometry;  // named primitive: unit_quad | unit_cube | signpost
  Vec3 albedo{0.5, 0.5, 0.5};
  std::map<std::string, std::string> metadata;  // e.g. class, default_scale
};

class Catalog {
 public:
  // Parses a catalog document (JSON). Duplicate uuids and unresolvable
  // geometry references are load errors naming the uuid.
  static Catalog load(const std::string& text);

  // Asset set shipped with the generator presets (ground, cube, signpost).
  static Catalog builtin();

  // Throws ValidationError for unknown uuids.
  const AssetRecord& lookup(const std::string& uuid) const;

  // First record whose metadata "class" equals cls, in uuid order; null if
  // absent.
  const AssetRecord* find_class(const std::string& cls) const;

  size_t size() const { return records_.size(); }

 private:
  std::map<std::string, AssetRecord> records_;  // keyed by uuid
};

// Object-space vertices/triangles for a named primitive, unit-sized;
// throws ValidationError for unknown names.
void primitive_geometry(const std::string& name, std::vector<Vec3>& vertices,
                        std::vector<Triangle>& triangles);

}  // namespace sflow
