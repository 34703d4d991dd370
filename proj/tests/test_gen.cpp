// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <string>

#include "sflow/catalog.hpp"
#include "sflow/scene_gen.hpp"
#include "sflow/scene_io.hpp"

using namespace sflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

GenParams small_params(Preset preset, std::uint64_t seed) {
  GenParams p;
  p.preset = preset;
  p.seed = seed;
  p.frame_count = 3;
  p.actor_count = 3;
  p.intrinsics = CameraIntrinsics{131.25, 131.25, 80.0, 60.0, 160, 120};
  return p;
}

int non_static_count(const Scene& scene) {
  int n = 0;
  for (const Mesh& mesh : scene.meshes) n += mesh.is_static ? 0 : 1;
  return n;
}

}  // namespace

TEST_CASE("sample_trajectory: linear, stationary, arc") {
  TrajectorySpec linear;
  linear.kind = TrajectorySpec::Kind::kLinear;
  linear.origin = {0, 0, 0};
  linear.heading = {0, 0, 1};
  linear.speed = 2.0;
  CHECK(norm(sample_trajectory(linear, 3).translation - Vec3{0, 0, 6}) < 1e-12);
  CHECK(orthonormality_defect(sample_trajectory(linear, 3).rotation) < 1e-12);
  // Object x maps to the heading.
  CHECK(norm(sample_trajectory(linear, 0).rotation * Vec3{1, 0, 0} - Vec3{0, 0, 1}) < 1e-12);

  TrajectorySpec stationary;
  stationary.kind = TrajectorySpec::Kind::kStationary;
  stationary.origin = {4, 5, 6};
  CHECK(sample_trajectory(stationary, 0) == sample_trajectory(stationary, 17));
  CHECK(sample_trajectory(stationary, 17).translation == Vec3{4, 5, 6});

  // Quarter circle: radius 1 about the origin, start at (1,0,0), angle
  // s*f/r = pi/2 -> (0,0,1).
  TrajectorySpec arc;
  arc.kind = TrajectorySpec::Kind::kArc;
  arc.origin = {0, 0, 0};
  arc.heading = {1, 0, 0};
  arc.arc_radius = 1.0;
  arc.speed = kPi / 8.0;
  const RigidTransform quarter = sample_trajectory(arc, 4);
  CHECK(norm(quarter.translation - Vec3{0, 0, 1}) < 1e-9);
  CHECK(orthonormality_defect(quarter.rotation) < 1e-9);
}

TEST_CASE("generate_scene: determinism and parameter contracts") {
  const Catalog catalog = Catalog::builtin();

  SUBCASE("same seed twice: byte-identical documents") {
    const GenParams p = small_params(Preset::kRoad, 42);
    CHECK(generate_scene(p, catalog) == generate_scene(p, catalog));
  }

  SUBCASE("different seeds differ") {
    CHECK(generate_scene(small_params(Preset::kRoad, 1), catalog) !=
          generate_scene(small_params(Preset::kRoad, 2), catalog));
  }

  SUBCASE("actor count equals the number of non-static meshes") {
    for (const int actors : {0, 3, 7}) {
      GenParams p = small_params(Preset::kRoad, 5);
      p.actor_count = actors;
      const Scene scene = parse_scene(generate_scene(p, catalog));
      CHECK(non_static_count(scene) == actors);
    }
  }

  SUBCASE("zero speed range: actor tracks are constant") {
    GenParams p = small_params(Preset::kRoad, 6);
    p.actor_speed_min = p.actor_speed_max = 0.0;
    const Scene scene = parse_scene(generate_scene(p, catalog));
    for (const Mesh& mesh : scene.meshes) {
      if (mesh.is_static) continue;
      for (const RigidTransform& pose : mesh.poses) CHECK(pose == mesh.poses.front());
    }
  }

  SUBCASE("adding an actor does not perturb earlier actors") {
    GenParams p3 = small_params(Preset::kRandomBoxes, 9);
    GenParams p4 = p3;
    p4.actor_count = 4;
    const Scene s3 = parse_scene(generate_scene(p3, catalog));
    const Scene s4 = parse_scene(generate_scene(p4, catalog));
    REQUIRE(s4.meshes.size() == s3.meshes.size() + 1);
    for (size_t i = 0; i < s3.meshes.size(); ++i)
      CHECK(s3.meshes[i].poses == s4.meshes[i].poses);
  }

  SUBCASE("invalid parameters are rejected") {
    GenParams p = small_params(Preset::kRoad, 0);
    p.frame_count = 1;
    CHECK_THROWS_AS(generate_scene(p, catalog), ValidationError);
    p = small_params(Preset::kRoad, 0);
    p.actor_speed_min = 2.0;  // min > max
    CHECK_THROWS_AS(generate_scene(p, catalog), ValidationError);
  }

  SUBCASE("missing asset class is a catalog error") {
    const Catalog empty = Catalog::load(R"({"assets": []})");
    CHECK_THROWS_AS(generate_scene(small_params(Preset::kRoad, 0), empty), ValidationError);
  }
}

TEST_CASE("generate_scene: every preset parses cleanly across 100 seeds") {
  const Catalog catalog = Catalog::builtin();
  for (const Preset preset : {Preset::kRoad, Preset::kOrbit, Preset::kRandomBoxes}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      GenParams p = small_params(preset, seed);
      p.actor_count = static_cast<int>(seed % 5);
      const Scene scene = parse_scene(generate_scene(p, catalog));
      CHECK(scene.frame_count == p.frame_count);
    }
  }
}

TEST_CASE("catalog: load, lookup, and error paths") {
  const char* doc = R"({
    "assets": [
      {"uuid": "00000000-0000-0000-0000-000000000001", "geometry": "unit_cube",
       "albedo": [0.1, 0.2, 0.3], "metadata": {"class": "cube", "note": "free-form"}},
      {"uuid": "00000000-0000-0000-0000-000000000002", "geometry": "unit_quad",
       "albedo": [1, 1, 1], "metadata": {"class": "ground"}}
    ]
  })";
  const Catalog catalog = Catalog::load(doc);
  CHECK(catalog.size() == 2);

  const AssetRecord& cube = catalog.lookup("00000000-0000-0000-0000-000000000001");
  CHECK(cube.geometry == "unit_cube");
  CHECK(cube.albedo.y == 0.2);
  CHECK(cube.metadata.at("note") == "free-form");
  CHECK(catalog.find_class("ground") != nullptr);
  CHECK(catalog.find_class("vehicle") == nullptr);

  try {
    catalog.lookup("00000000-0000-0000-0000-00000000000f");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("00000000-0000-0000-0000-00000000000f") !=
          std::string::npos);
  }

  SUBCASE("duplicate uuid names the uuid") {
    std::string dup = doc;
    dup.replace(dup.find("000000000002"), 12, "000000000001");
    try {
      Catalog::load(dup);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
      CHECK(std::string(e.what()).find("000000000001") != std::string::npos);
    }
  }

  SUBCASE("unresolvable geometry reference") {
    std::string bad = doc;
    bad.replace(bad.find("unit_cube"), 9, "teapot_xl");
    CHECK_THROWS_AS(Catalog::load(bad), ParseError);
  }

  SUBCASE("malformed uuid") {
    std::string bad = doc;
    bad.replace(bad.find("00000000-0000-0000-0000-000000000001"), 36, "not-a-uuid");
    CHECK_THROWS_AS(Catalog::load(bad), ParseError);
  }
}

TEST_CASE("primitive_geometry: known names and the error path") {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  primitive_geometry("unit_cube", vertices, triangles);
  CHECK(vertices.size() == 8);
  CHECK(triangles.size() == 12);
  primitive_geometry("unit_quad", vertices, triangles);
  CHECK(triangles.size() == 2);
  primitive_geometry("signpost", vertices, triangles);
  CHECK(triangles.size() == 24);
  CHECK_THROWS_AS(primitive_geometry("dragon", vertices, triangles), ValidationError);
}

TEST_CASE("counter rng: streams are stable and independent") {
  CounterRng a(7);
  CounterRng b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CounterRng base(7);
  CounterRng s1 = base.stream(1);
  CounterRng s2 = base.stream(2);
  CHECK(s1.next_u64() != s2.next_u64());
  // Draws from one stream do not depend on how much the parent was used.
  CounterRng burned(7);
  for (int i = 0; i < 50; ++i) (void)burned.next_u64();
  CounterRng s1_again = burned.stream(1);
  CounterRng s1_fresh = CounterRng(7).stream(1);
  for (int i = 0; i < 20; ++i) CHECK(s1_again.next_u64() == s1_fresh.next_u64());

  CounterRng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform(2.0, 5.0);
    CHECK(x >= 2.0);
    CHECK(x < 5.0);
    const int k = u.uniform_int(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
}
