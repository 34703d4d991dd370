// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/catalog.hpp"

#include <json.hpp>

#include "sflow/errors.hpp"

namespace sflow {

namespace {

using nlohmann::json;

bool is_known_primitive(const std::string& name) {
  return name == "unit_quad" || name == "unit_cube" || name == "signpost";
}

bool valid_uuid(const std::string& uuid) {
  int digits = 0;
  for (const char c : uuid) {
    if (c == '-') continue;
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    ++digits;
  }
  return digits == 32;
}

}  // namespace

Catalog Catalog::load(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("assets") || !doc["assets"].is_array())
    throw ParseError("catalog: expected an object with an 'assets' array");

  Catalog catalog;
  for (const json& entry : doc["assets"]) {
    if (!entry.is_object()) throw ParseError("catalog: asset entries must be objects");
    AssetRecord record;
    if (!entry.contains("uuid") || !entry["uuid"].is_string())
      throw ParseError("catalog: asset without a uuid");
    record.uuid = entry["uuid"].get<std::string>();
    if (!valid_uuid(record.uuid))
      throw ParseError("catalog: '" + record.uuid + "' is not a 128-bit hex identifier");
    if (!entry.contains("geometry") || !entry["geometry"].is_string())
      throw ParseError("catalog: asset " + record.uuid + " without a geometry reference");
    record.geometry = entry["geometry"].get<std::string>();
    if (!is_known_primitive(record.geometry))
      throw ParseError("catalog: asset " + record.uuid + " references unknown geometry '" +
                       record.geometry + "'");
    if (!entry.contains("albedo") || !entry["albedo"].is_array() || entry["albedo"].size() != 3)
      throw ParseError("catalog: asset " + record.uuid + " without an albedo triple");
    for (int i = 0; i < 3; ++i) {
      const double v = entry["albedo"][i].get<double>();
      if (v < 0.0 || v > 1.0)
        throw ParseError("catalog: asset " + record.uuid + " albedo outside [0, 1]");
      (i == 0 ? record.albedo.x : i == 1 ? record.albedo.y : record.albedo.z) = v;
    }
    if (entry.contains("metadata")) {
      if (!entry["metadata"].is_object())
        throw ParseError("catalog: asset " + record.uuid + " metadata must be an object");
      for (const auto& [key, value] : entry["metadata"].items()) {
        if (!value.is_string())
          throw ParseError("catalog: asset " + record.uuid + " metadata values must be strings");
        record.metadata[key] = value.get<std::string>();
      }
    }
    if (!catalog.records_.emplace(record.uuid, record).second)
      throw ParseError("catalog: duplicate uuid " + record.uuid);
  }
  return catalog;
}

const AssetRecord& Catalog::lookup(const std::string& uuid) const {
  const auto it = records_.find(uuid);
  if (it == records_.end()) throw ValidationError("catalog: unknown uuid " + uuid);
  return it->second;
}

const AssetRecord* Catalog::find_class(const std::string& cls) const {
  for (const auto& [uuid, record] : records_) {
    const auto it = record.metadata.find("class");
    if (it != record.metadata.end() && it->second == cls) return &record;
  }
  return nullptr;
}

Catalog Catalog::builtin() {
  static const char* kBuiltin = R"({
  "assets": [
    {
      "uuid": "9c1f0d2a-73f4-4e1b-8c5a-0b6d2f4a1e01",
      "geometry": "unit_quad",
      "albedo": [0.45, 0.45, 0.45],
      "metadata": {"class": "ground", "default_scale": "1 1 1"}
    },
    {
      "uuid": "b20c4e7d-95a3-4f62-9d1e-7c8b3a5f2e02",
      "geometry": "unit_cube",
      "albedo": [0.75, 0.2, 0.15],
      "metadata": {"class": "cube", "default_scale": "1 1 1"}
    },
    {
      "uuid": "e7a9b1c3-21d8-4b07-a55e-d94c6b8f3e03",
      "geometry": "signpost",
      "albedo": [0.85, 0.85, 0.9],
      "metadata": {"class": "signpost", "default_scale": "1 1 1", "height": "2.4"}
    }
  ]
})";
  return load(kBuiltin);
}

void primitive_geometry(const std::string& name, std::vector<Vec3>& vertices,
                        std::vector<Triangle>& triangles) {
  vertices.clear();
  triangles.clear();
  if (name == "unit_quad") {
    // 1x1 quad in the xz-plane, normal -y (up in the y-down world).
    vertices = {{-0.5, 0.0, -0.5}, {0.5, 0.0, -0.5}, {0.5, 0.0, 0.5}, {-0.5, 0.0, 0.5}};
    triangles = {{0, 2, 1}, {0, 3, 2}};
    return;
  }
  if (name == "unit_cube") {
    // Axis-aligned unit cube centered at the origin, outward windings.
    vertices = {{-0.5, -0.5, -0.5}, {0.5, -0.5, -0.5}, {0.5, 0.5, -0.5}, {-0.5, 0.5, -0.5},
                {-0.5, -0.5, 0.5},  {0.5, -0.5, 0.5},  {0.5, 0.5, 0.5},  {-0.5, 0.5, 0.5}};
    triangles = {{0, 2, 1}, {0, 3, 2},   // z = -0.5
                 {4, 5, 6}, {4, 6, 7},   // z = +0.5
                 {0, 1, 5}, {0, 5, 4},   // y = -0.5 (top, y-down world)
                 {3, 6, 2}, {3, 7, 6},   // y = +0.5
                 {0, 7, 3}, {0, 4, 7},   // x = -0.5
                 {1, 2, 6}, {1, 6, 5}};  // x = +0.5
    return;
  }
  if (name == "signpost") {
    // Pole (0.08 wide, 2.2 tall) plus a 0.7 x 0.7 board near the top.
    // Object space: base at y = 0, up is -y.
    const auto add_box = [&](Vec3 lo, Vec3 hi) {
      const int base = static_cast<int>(vertices.size());
      vertices.insert(vertices.end(),
                      {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z},
                       {lo.x, hi.y, lo.z}, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z},
                       {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}});
      const Triangle faces[12] = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                                  {0, 1, 5}, {0, 5, 4}, {3, 6, 2}, {3, 7, 6},
                                  {0, 7, 3}, {0, 4, 7}, {1, 2, 6}, {1, 6, 5}};
      for (const Triangle& t : faces)
        triangles.push_back({t.v0 + base, t.v1 + base, t.v2 + base});
    };
    add_box({-0.04, -2.2, -0.04}, {0.04, 0.0, 0.04});
    add_box({-0.35, -2.15, 0.04}, {0.35, -1.45, 0.10});
    return;
  }
  throw ValidationError("unknown primitive geometry '" + name + "'");
}

}  // namespace sflow
