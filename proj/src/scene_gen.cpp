// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/scene_gen.hpp"

#include <cmath>

#include "sflow/errors.hpp"
#include "sflow/numfmt.hpp"
#include "sflow/rng.hpp"
#include "sflow/scene.hpp"
#include "sflow/scene_io.hpp"

namespace sflow {

const char* to_string(Preset p) {
  switch (p) {
    case Preset::kRoad: return "road";
    case Preset::kOrbit: return "orbit";
    case Preset::kRandomBoxes: return "random-boxes";
  }
  return "road";
}

Preset preset_from_string(const std::string& name) {
  if (name == "road") return Preset::kRoad;
  if (name == "orbit") return Preset::kOrbit;
  if (name == "random-boxes") return Preset::kRandomBoxes;
  throw ValidationError("unknown preset '" + name + "'");
}

namespace {

// Orthonormal frame whose first column (object x image) is the unit
// heading; reference up is world -y.
Mat3 frame_from_x(const Vec3& heading) {
  const Vec3 x = normalized(heading);
  Vec3 z = cross(x, Vec3{0.0, 1.0, 0.0});
  if (norm(z) < 1e-9) z = cross(x, Vec3{0.0, 0.0, 1.0});
  z = normalized(z);
  const Vec3 y = cross(z, x);
  Mat3 r;
  r.m[0][0] = x.x; r.m[1][0] = x.y; r.m[2][0] = x.z;
  r.m[0][1] = y.x; r.m[1][1] = y.y; r.m[2][1] = y.z;
  r.m[0][2] = z.x; r.m[1][2] = z.y; r.m[2][2] = z.z;
  return r;
}

// Camera rotation looking along forward, x right, y down.
Mat3 look_rotation(const Vec3& forward) {
  const Vec3 z = normalized(forward);
  const Vec3 x = normalized(cross(Vec3{0.0, 1.0, 0.0}, z));
  const Vec3 y = cross(z, x);
  Mat3 r;
  r.m[0][0] = x.x; r.m[1][0] = x.y; r.m[2][0] = x.z;
  r.m[0][1] = y.x; r.m[1][1] = y.y; r.m[2][1] = y.z;
  r.m[0][2] = z.x; r.m[1][2] = z.y; r.m[2][2] = z.z;
  return r;
}

}  // namespace

RigidTransform sample_trajectory(const TrajectorySpec& spec, int frame) {
  switch (spec.kind) {
    case TrajectorySpec::Kind::kStationary:
      return RigidTransform{Mat3::identity(), spec.origin};
    case TrajectorySpec::Kind::kLinear:
      return RigidTransform{frame_from_x(spec.heading),
                            spec.origin + spec.heading * (spec.speed * frame)};
    case TrajectorySpec::Kind::kArc: {
      if (!(spec.arc_radius > 0.0)) throw ValidationError("arc trajectory needs a radius > 0");
      const Vec3 radial = normalized(spec.heading);
      Vec3 side = cross(radial, Vec3{0.0, 1.0, 0.0});
      if (norm(side) < 1e-9)
        throw ValidationError("arc trajectory heading must not be vertical");
      side = normalized(side);
      const double angle = spec.speed * frame / spec.arc_radius;
      const double c = std::cos(angle), s = std::sin(angle);
      const Vec3 position = spec.origin + (radial * c + side * s) * spec.arc_radius;
      const Vec3 tangent = radial * -s + side * c;
      return RigidTransform{frame_from_x(tangent), position};
    }
  }
  throw ValidationError("unknown trajectory kind");
}

namespace {

Vec3 canon(const Vec3& v) {
  return {canonical_real(v.x), canonical_real(v.y), canonical_real(v.z)};
}

void validate_params(const GenParams& p) {
  if (p.frame_count < 2) throw ValidationError("frame count must be >= 2");
  if (p.actor_count < 0) throw ValidationError("actor count must be >= 0");
  if (p.actor_speed_min < 0.0 || p.actor_speed_min > p.actor_speed_max)
    throw ValidationError("actor speed range must satisfy 0 <= min <= max");
  if (!(p.extent > 0.0)) throw ValidationError("extent must be positive");
  if (p.intrinsics.width <= 0 || p.intrinsics.height <= 0 || !(p.intrinsics.fx > 0.0) ||
      !(p.intrinsics.fy > 0.0))
    throw ValidationError("invalid intrinsics");
  if (!(p.baseline > 0.0)) throw ValidationError("baseline must be positive");
}

const AssetRecord& required_class(const Catalog& catalog, const std::string& cls) {
  const AssetRecord* record = catalog.find_class(cls);
  if (!record)
    throw ValidationError("catalog has no asset of class '" + cls + "'");
  return *record;
}

// Scaled copy of a primitive's object-space geometry, canonicalized for
// document stability.
Mesh asset_mesh(const AssetRecord& record, const Vec3& scale) {
  Mesh mesh;
  mesh.material.id = record.uuid;
  mesh.material.albedo = canon(record.albedo);
  primitive_geometry(record.geometry, mesh.vertices, mesh.triangles);
  for (Vec3& v : mesh.vertices)
    v = canon({v.x * scale.x, v.y * scale.y, v.z * scale.z});
  return mesh;
}

void fill_static_track(Mesh& mesh, const RigidTransform& pose, int frame_count) {
  mesh.is_static = true;
  mesh.poses.assign(frame_count, pose);
}

void fill_trajectory_track(Mesh& mesh, const TrajectorySpec& spec, int frame_count) {
  mesh.is_static = false;
  mesh.poses.reserve(frame_count);
  for (int f = 0; f < frame_count; ++f) {
    RigidTransform pose = sample_trajectory(spec, f);
    pose.translation = canon(pose.translation);
    mesh.poses.push_back(pose);
  }
}

Vec3 random_albedo(CounterRng& rng) {
  return canon({0.15 + 0.7 * rng.next_double(), 0.15 + 0.7 * rng.next_double(),
                0.15 + 0.7 * rng.next_double()});
}

// Ground level below the camera origin, y-down world.
constexpr double kGroundY = 1.6;

Scene begin_scene(const GenParams& p) {
  Scene scene;
  scene.frame_count = p.frame_count;
  scene.rig.intrinsics = p.intrinsics;
  scene.rig.intrinsics.fx = canonical_real(p.intrinsics.fx);
  scene.rig.intrinsics.fy = canonical_real(p.intrinsics.fy);
  scene.rig.intrinsics.cx = canonical_real(p.intrinsics.cx);
  scene.rig.intrinsics.cy = canonical_real(p.intrinsics.cy);
  scene.rig.baseline = canonical_real(p.baseline);
  scene.light_direction = canon(normalized(Vec3{0.3, -0.85, 0.35}));
  scene.ambient = 0.25;
  return scene;
}

void generate_road(const GenParams& p, const Catalog& catalog, Scene& scene, CounterRng& rng) {
  const AssetRecord& ground = required_class(catalog, "ground");
  const AssetRecord& cube = required_class(catalog, "cube");
  const AssetRecord& signpost = required_class(catalog, "signpost");
  int next_id = 0;

  // Straight camera run along +z keeps the ego rotation exactly identity.
  for (int f = 0; f < p.frame_count; ++f)
    scene.rig.left_poses.push_back(
        {Mat3::identity(), canon({0.0, 0.0, p.camera_speed * f})});

  const double road_length = 4.0 * p.extent;
  Mesh ground_mesh = asset_mesh(ground, {2.0 * p.extent, 1.0, 5.0 * p.extent});
  ground_mesh.id = next_id++;
  fill_static_track(ground_mesh,
                    {Mat3::identity(), canon({0.0, kGroundY, 1.5 * p.extent})},
                    p.frame_count);
  scene.meshes.push_back(std::move(ground_mesh));

  // Signposts at fixed 8 m intervals on both road sides.
  const double interval = 8.0;
  for (int k = 0; k * interval <= road_length; ++k)
    for (const double side : {-3.5, 3.5}) {
      Mesh post = asset_mesh(signpost, {1.0, 1.0, 1.0});
      post.id = next_id++;
      fill_static_track(post, {Mat3::identity(), canon({side, kGroundY, k * interval})},
                        p.frame_count);
      scene.meshes.push_back(std::move(post));
    }

  // Actors: box vehicles on the two lanes, right lane receding, left lane
  // oncoming. Exact axis-aligned headings keep document rotations exact.
  for (int i = 0; i < p.actor_count; ++i) {
    CounterRng actor_rng = rng.stream(100 + i);
    const bool right_lane = actor_rng.next_u64() % 2 == 0;
    const double lane_x = right_lane ? 1.75 : -1.75;
    const double direction = right_lane ? 1.0 : -1.0;
    const double speed = actor_rng.uniform(p.actor_speed_min, p.actor_speed_max);
    const double start_z = actor_rng.uniform(8.0, 0.7 * road_length);

    Mesh actor = asset_mesh(cube, {4.2, 1.4, 1.8});
    actor.id = next_id++;
    actor.material.albedo = random_albedo(actor_rng);
    TrajectorySpec spec;
    spec.kind = TrajectorySpec::Kind::kLinear;
    spec.origin = {lane_x, kGroundY - 0.7, start_z};
    spec.heading = {0.0, 0.0, direction};
    spec.speed = canonical_real(speed);
    fill_trajectory_track(actor, spec, p.frame_count);
    scene.meshes.push_back(std::move(actor));
  }
}

void generate_orbit(const GenParams& p, const Catalog& catalog, Scene& scene, CounterRng& rng) {
  const AssetRecord& ground = required_class(catalog, "ground");
  const AssetRecord& cube = required_class(catalog, "cube");
  int next_id = 0;

  // Camera circles the cluster, always fixating the cluster center.
  const double orbit_radius = 0.5 * p.extent;
  const Vec3 target{0.0, 0.8, 0.0};
  for (int f = 0; f < p.frame_count; ++f) {
    const double angle = p.camera_speed * f / orbit_radius;
    const Vec3 position{orbit_radius * std::cos(angle), 0.0, orbit_radius * std::sin(angle)};
    scene.rig.left_poses.push_back({look_rotation(target - position), canon(position)});
  }

  Mesh ground_mesh = asset_mesh(ground, {3.0 * p.extent, 1.0, 3.0 * p.extent});
  ground_mesh.id = next_id++;
  fill_static_track(ground_mesh, {Mat3::identity(), canon({0.0, kGroundY, 0.0})},
                    p.frame_count);
  scene.meshes.push_back(std::move(ground_mesh));

  CounterRng cluster_rng = rng.stream(1);
  const int static_count = 5;
  for (int i = 0; i < static_count; ++i) {
    const double size = cluster_rng.uniform(0.4, 1.2);
    const double radius = cluster_rng.uniform(0.1, 0.35) * p.extent;
    const double angle = cluster_rng.uniform(0.0, 6.283185307179586);
    Mesh block = asset_mesh(cube, {size, size, size});
    block.id = next_id++;
    block.material.albedo = random_albedo(cluster_rng);
    fill_static_track(
        block,
        {rotation_y(cluster_rng.uniform(0.0, 6.283185307179586)),
         canon({radius * std::cos(angle), kGroundY - 0.5 * size, radius * std::sin(angle)})},
        p.frame_count);
    scene.meshes.push_back(std::move(block));
  }

  // Actors ride arcs around the cluster center, tangent-aligned.
  for (int i = 0; i < p.actor_count; ++i) {
    CounterRng actor_rng = rng.stream(100 + i);
    const double size = actor_rng.uniform(0.3, 0.8);
    Mesh actor = asset_mesh(cube, {size, size, size});
    actor.id = next_id++;
    actor.material.albedo = random_albedo(actor_rng);
    TrajectorySpec spec;
    spec.kind = TrajectorySpec::Kind::kArc;
    spec.arc_radius = actor_rng.uniform(0.25, 0.45) * p.extent;
    const double angle = actor_rng.uniform(0.0, 6.283185307179586);
    spec.origin = {0.0, kGroundY - 0.5 * size, 0.0};
    spec.heading = {std::cos(angle), 0.0, std::sin(angle)};
    spec.speed = canonical_real(actor_rng.uniform(p.actor_speed_min, p.actor_speed_max));
    fill_trajectory_track(actor, spec, p.frame_count);
    scene.meshes.push_back(std::move(actor));
  }
}

void generate_random_boxes(const GenParams& p, const Catalog& catalog, Scene& scene,
                           CounterRng& rng) {
  const AssetRecord& ground = required_class(catalog, "ground");
  const AssetRecord& cube = required_class(catalog, "cube");
  int next_id = 0;

  for (int f = 0; f < p.frame_count; ++f)
    scene.rig.left_poses.push_back(
        {Mat3::identity(), canon({0.0, 0.0, p.camera_speed * f})});

  Mesh ground_mesh = asset_mesh(ground, {3.0 * p.extent, 1.0, 4.0 * p.extent});
  ground_mesh.id = next_id++;
  fill_static_track(ground_mesh, {Mat3::identity(), canon({0.0, kGroundY, p.extent})},
                    p.frame_count);
  scene.meshes.push_back(std::move(ground_mesh));

  CounterRng field_rng = rng.stream(1);
  const int static_count = 6;
  for (int i = 0; i < static_count; ++i) {
    const double size = field_rng.uniform(0.4, 1.6);
    Mesh block = asset_mesh(cube, {size, size, size});
    block.id = next_id++;
    block.material.albedo = random_albedo(field_rng);
    const Vec3 position{field_rng.uniform(-0.5, 0.5) * p.extent,
                        field_rng.uniform(-0.3 * p.extent, kGroundY - 0.5 * size),
                        field_rng.uniform(0.3, 1.2) * p.extent};
    fill_static_track(block,
                      {rotation_y(field_rng.uniform(0.0, 6.283185307179586)), canon(position)},
                      p.frame_count);
    scene.meshes.push_back(std::move(block));
  }

  for (int i = 0; i < p.actor_count; ++i) {
    CounterRng actor_rng = rng.stream(100 + i);
    const double size = actor_rng.uniform(0.3, 1.0);
    Mesh actor = asset_mesh(cube, {size, size, size});
    actor.id = next_id++;
    actor.material.albedo = random_albedo(actor_rng);
    const double angle = actor_rng.uniform(0.0, 6.283185307179586);
    TrajectorySpec spec;
    spec.kind = TrajectorySpec::Kind::kLinear;
    spec.origin = {actor_rng.uniform(-0.4, 0.4) * p.extent,
                   actor_rng.uniform(-0.25 * p.extent, kGroundY - 0.5 * size),
                   actor_rng.uniform(0.35, 1.1) * p.extent};
    spec.heading = {std::cos(angle), 0.0, std::sin(angle)};
    spec.speed = canonical_real(actor_rng.uniform(p.actor_speed_min, p.actor_speed_max));
    fill_trajectory_track(actor, spec, p.frame_count);
    scene.meshes.push_back(std::move(actor));
  }
}

}  // namespace

std::string generate_scene(const GenParams& params, const Catalog& catalog) {
  validate_params(params);
  CounterRng rng = CounterRng(params.seed).stream(static_cast<std::uint64_t>(params.preset));

  Scene scene = begin_scene(params);
  switch (params.preset) {
    case Preset::kRoad: generate_road(params, catalog, scene, rng); break;
    case Preset::kOrbit: generate_orbit(params, catalog, scene, rng); break;
    case Preset::kRandomBoxes: generate_random_boxes(params, catalog, scene, rng); break;
  }
  validate_scene(scene);
  return serialize_scene(scene);
}

}  // namespace sflow
