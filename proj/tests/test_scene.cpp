// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include "sflow/numfmt.hpp"
#include "sflow/scene.hpp"
#include "sflow/scene_io.hpp"
#include "test_scenes.hpp"

using namespace sflow;

namespace {

const char* kMinimalDoc = R"({
  "frame_count": 2,
  "camera": {
    "fx": 100, "fy": 100, "cx": 320, "cy": 240, "width": 640, "height": 480,
    "baseline": 0.5,
    "poses": [
      {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 0]},
      {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 0]}
    ]
  },
  "light": {"direction": [0, 0, -1], "ambient": 0.2},
  "meshes": [
    {
      "id": 0,
      "albedo": [0.5, 0.5, 0.5],
      "material_id": "",
      "static": true,
      "vertices": [[0, 0, 5], [1, 0, 5], [0, 1, 5]],
      "triangles": [[0, 1, 2]],
      "poses": [
        {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 0]},
        {"rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1], "translation": [0, 0, 0]}
      ]
    }
  ]
})";

}  // namespace

TEST_CASE("mesh_vertices_at: static, pose-track, and deformation cases") {
  Mesh mesh = testing::quad_mesh(0, 1.0, 0.0, 2);

  SUBCASE("static mesh ignores the frame index and is byte-stable") {
    const auto f0 = mesh_vertices_at(mesh, 0);
    const auto f1 = mesh_vertices_at(mesh, 1);
    REQUIRE(f0.size() == f1.size());
    CHECK(std::memcmp(f0.data(), f1.data(), f0.size() * sizeof(Vec3)) == 0);
  }

  SUBCASE("pose track shifts every vertex") {
    mesh.is_static = false;
    mesh.poses[1] = RigidTransform{Mat3::identity(), {1, 0, 0}};
    const auto f0 = mesh_vertices_at(mesh, 0);
    const auto f1 = mesh_vertices_at(mesh, 1);
    for (size_t i = 0; i < f0.size(); ++i) CHECK(f1[i] - f0[i] == Vec3{1, 0, 0});
  }

  SUBCASE("deformation replaces the vertex array per frame") {
    mesh.is_static = false;
    mesh.deformation = {mesh.vertices, mesh.vertices};
    mesh.deformation[1][0] = {9, 9, 9};
    const auto f1 = mesh_vertices_at(mesh, 1);
    CHECK(f1[0] == Vec3{9, 9, 9});
    CHECK(f1[1] == mesh.vertices[1]);
  }

  SUBCASE("frame out of range") {
    CHECK_THROWS_AS(mesh_vertices_at(mesh, 2), std::out_of_range);
  }
}

TEST_CASE("parse_scene: minimal document") {
  const Scene scene = parse_scene(kMinimalDoc);
  CHECK(scene.frame_count == 2);
  REQUIRE(scene.meshes.size() == 1);
  CHECK(scene.meshes[0].is_static);
  CHECK(scene.meshes[0].vertices.size() == 3);
  CHECK(scene.rig.baseline == 0.5);
}

TEST_CASE("parse_scene: track length mismatch names the mesh") {
  std::string doc = kMinimalDoc;
  // Drop the second mesh pose: track length 1 in a 2-frame scene.
  const size_t meshes = doc.find("\"meshes\"");
  const size_t first = doc.find("{\"rotation\"", meshes);
  const size_t comma = doc.find("},", first);
  doc.erase(comma + 1, doc.find("}", comma + 2) - comma);
  try {
    parse_scene(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("mesh 0") != std::string::npos);
    CHECK(std::string(e.what()).find("pose track") != std::string::npos);
  }
}

TEST_CASE("parse_scene: unknown top-level key is named") {
  std::string doc = kMinimalDoc;
  doc.insert(doc.find("\"frame_count\""), "\"weather\": 1, ");
  try {
    parse_scene(doc);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("weather") != std::string::npos);
  }
}

TEST_CASE("parse_scene: syntax errors carry a line number") {
  try {
    parse_scene("{\n  \"frame_count\": 2,\n  broken\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_scene: invariant violations are rejected") {
  std::string doc = kMinimalDoc;
  SUBCASE("bad triangle index") {
    doc.replace(doc.find("[0, 1, 2]"), 9, "[0, 1, 7]");
    CHECK_THROWS_AS(parse_scene(doc), ValidationError);
  }
  SUBCASE("repeated triangle index") {
    doc.replace(doc.find("[0, 1, 2]"), 9, "[0, 1, 1]");
    CHECK_THROWS_AS(parse_scene(doc), ValidationError);
  }
  SUBCASE("non-orthonormal rotation") {
    doc.replace(doc.find("[1, 0, 0, 0, 1, 0, 0, 0, 1]"), 27, "[1, 0, 0, 0, 1, 0, 0, 0, 2]");
    CHECK_THROWS_AS(parse_scene(doc), ValidationError);
  }
  SUBCASE("static mesh with varying poses") {
    const size_t meshes = doc.find("\"meshes\"");
    const size_t pose = doc.find("\"translation\": [0, 0, 0]", meshes);
    doc.replace(pose, 24, "\"translation\": [1, 0, 0]");
    CHECK_THROWS_AS(parse_scene(doc), ValidationError);
  }
}

TEST_CASE("serialize/parse round trip is exact and canonical") {
  const Scene scene = parse_scene(kMinimalDoc);
  const std::string canonical = serialize_scene(scene);
  const Scene reparsed = parse_scene(canonical);
  CHECK(scene_equal(scene, reparsed));
  CHECK(serialize_scene(reparsed) == canonical);
}

TEST_CASE("canonical real formatting") {
  CHECK(format_g9(0.1) == "0.1");
  CHECK(format_g9(525.0) == "525");
  CHECK(canonical_real(0.1) == 0.1);
  const double third = 1.0 / 3.0;
  CHECK(canonical_real(third) != third);                            // quantized
  CHECK(canonical_real(canonical_real(third)) == canonical_real(third));  // idempotent
}

TEST_CASE("validate_scene: camera and light invariants") {
  Scene scene = testing::plane_scene();
  CHECK_NOTHROW(validate_scene(scene));

  SUBCASE("duplicate mesh ids") {
    scene.meshes.push_back(scene.meshes[0]);
    CHECK_THROWS_AS(validate_scene(scene), ValidationError);
  }
  SUBCASE("principal point outside image") {
    scene.rig.intrinsics.cx = 700.0;
    CHECK_THROWS_AS(validate_scene(scene), ValidationError);
  }
  SUBCASE("bad baseline") {
    scene.rig.baseline = 0.0;
    CHECK_THROWS_AS(validate_scene(scene), ValidationError);
  }
  SUBCASE("non-unit light") {
    scene.light_direction = {0, 0, -2};
    CHECK_THROWS_AS(validate_scene(scene), ValidationError);
  }
  SUBCASE("camera pose track too short") {
    scene.rig.left_poses.pop_back();
    CHECK_THROWS_AS(validate_scene(scene), ValidationError);
  }
}
