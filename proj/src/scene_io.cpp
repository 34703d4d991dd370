// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/scene_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <string>

#include "sflow/errors.hpp"
#include "sflow/numfmt.hpp"

namespace sflow {

namespace {

using nlohmann::json;

int line_of_byte(const std::string& text, size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() +
                                             std::min(byte, text.size()), '\n'));
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

void check_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
}

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

Vec3 as_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 numbers");
  return {as_real(j[0], path), as_real(j[1], path), as_real(j[2], path)};
}

RigidTransform as_pose(const json& j, const std::string& path) {
  check_keys(j, path, {"rotation", "translation"});
  const json& rot = member(j, path, "rotation");
  if (!rot.is_array() || rot.size() != 9) fail(path + ".rotation", "expected 9 numbers");
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i / 3][i % 3] = as_real(rot[i], path + ".rotation");
  const Vec3 t = as_vec3(member(j, path, "translation"), path + ".translation");
  try {
    return RigidTransform::make(r, t);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::vector<RigidTransform> as_pose_track(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of poses");
  std::vector<RigidTransform> track;
  track.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    track.push_back(as_pose(j[i], path + "[" + std::to_string(i) + "]"));
  return track;
}

Mesh parse_mesh(const json& j, const std::string& path) {
  check_keys(j, path, {"albedo", "deformation", "id", "material_id", "poses", "static",
                       "triangles", "vertices"});
  Mesh mesh;
  mesh.id = as_int(member(j, path, "id"), path + ".id");
  mesh.material.albedo = as_vec3(member(j, path, "albedo"), path + ".albedo");
  if (j.contains("material_id")) {
    const json& mid = j["material_id"];
    if (!mid.is_string()) fail(path + ".material_id", "expected a string");
    mesh.material.id = mid.get<std::string>();
  }
  mesh.is_static = as_bool(member(j, path, "static"), path + ".static");

  const json& verts = member(j, path, "vertices");
  if (!verts.is_array()) fail(path + ".vertices", "expected an array");
  mesh.vertices.reserve(verts.size());
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.push_back(as_vec3(verts[i], path + ".vertices[" + std::to_string(i) + "]"));

  const json& tris = member(j, path, "triangles");
  if (!tris.is_array()) fail(path + ".triangles", "expected an array");
  mesh.triangles.reserve(tris.size());
  for (size_t i = 0; i < tris.size(); ++i) {
    const std::string tri_path = path + ".triangles[" + std::to_string(i) + "]";
    const json& t = tris[i];
    if (!t.is_array() || t.size() != 3) fail(tri_path, "expected 3 vertex indices");
    mesh.triangles.push_back(
        {as_int(t[0], tri_path), as_int(t[1], tri_path), as_int(t[2], tri_path)});
  }

  mesh.poses = as_pose_track(member(j, path, "poses"), path + ".poses");

  if (j.contains("deformation")) {
    const json& def = j["deformation"];
    if (!def.is_array()) fail(path + ".deformation", "expected an array");
    for (size_t f = 0; f < def.size(); ++f) {
      const std::string frame_path = path + ".deformation[" + std::to_string(f) + "]";
      const json& frame = def[f];
      if (!frame.is_array()) fail(frame_path, "expected an array of vertices");
      std::vector<Vec3> positions;
      positions.reserve(frame.size());
      for (size_t i = 0; i < frame.size(); ++i)
        positions.push_back(as_vec3(frame[i], frame_path + "[" + std::to_string(i) + "]"));
      mesh.deformation.push_back(std::move(positions));
    }
  }
  return mesh;
}

}  // namespace

Scene parse_scene(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
  }

  check_keys(doc, "document", {"camera", "frame_count", "light", "meshes"});

  Scene scene;
  scene.frame_count = as_int(member(doc, "document", "frame_count"), "frame_count");

  const json& cam = member(doc, "document", "camera");
  check_keys(cam, "camera",
             {"baseline", "cx", "cy", "fx", "fy", "height", "poses", "width"});
  CameraIntrinsics& k = scene.rig.intrinsics;
  k.fx = as_real(member(cam, "camera", "fx"), "camera.fx");
  k.fy = as_real(member(cam, "camera", "fy"), "camera.fy");
  k.cx = as_real(member(cam, "camera", "cx"), "camera.cx");
  k.cy = as_real(member(cam, "camera", "cy"), "camera.cy");
  k.width = as_int(member(cam, "camera", "width"), "camera.width");
  k.height = as_int(member(cam, "camera", "height"), "camera.height");
  scene.rig.baseline = as_real(member(cam, "camera", "baseline"), "camera.baseline");
  scene.rig.left_poses = as_pose_track(member(cam, "camera", "poses"), "camera.poses");

  const json& light = member(doc, "document", "light");
  check_keys(light, "light", {"ambient", "direction"});
  scene.light_direction = as_vec3(member(light, "light", "direction"), "light.direction");
  scene.ambient = as_real(member(light, "light", "ambient"), "light.ambient");

  const json& meshes = member(doc, "document", "meshes");
  if (!meshes.is_array()) fail("meshes", "expected an array");
  scene.meshes.reserve(meshes.size());
  for (size_t i = 0; i < meshes.size(); ++i)
    scene.meshes.push_back(parse_mesh(meshes[i], "meshes[" + std::to_string(i) + "]"));

  validate_scene(scene);
  return scene;
}

namespace {

class DocWriter {
 public:
  std::string take() { return std::move(out_); }

  void open(const char* bracket) {
    if (!first_) out_ += ",\n";
    pad();
    out_ += bracket;
    out_ += '\n';
    ++indent_;
    first_ = true;
  }
  void close(const char* bracket) {
    out_ += '\n';
    --indent_;
    pad();
    out_ += bracket;
    first_ = false;
  }
  // One entry inside the current object/array ("key": value or bare value).
  void entry(const std::string& text) {
    if (!first_) out_ += ",\n";
    pad();
    out_ += text;
    first_ = false;
  }
  void key(const std::string& name, const char* bracket) {
    entry("\"" + name + "\": ");
    out_ += bracket;
    out_ += '\n';
    ++indent_;
    first_ = true;
  }

 private:
  void pad() { out_.append(static_cast<size_t>(indent_) * 2, ' '); }
  std::string out_;
  int indent_ = 0;
  bool first_ = true;
};

std::string vec3_g9(const Vec3& v) {
  return "[" + format_g9(v.x) + ", " + format_g9(v.y) + ", " + format_g9(v.z) + "]";
}

std::string pose_line(const RigidTransform& t) {
  std::string s = "{\"rotation\": [";
  for (int i = 0; i < 9; ++i) {
    if (i) s += ", ";
    s += format_exact(t.rotation.m[i / 3][i % 3]);
  }
  s += "], \"translation\": [" + format_g9(t.translation.x) + ", " +
       format_g9(t.translation.y) + ", " + format_g9(t.translation.z) + "]}";
  return s;
}

void write_pose_track(DocWriter& w, const std::string& key,
                      const std::vector<RigidTransform>& track) {
  w.key(key, "[");
  for (const RigidTransform& pose : track) w.entry(pose_line(pose));
  w.close("]");
}

}  // namespace

std::string serialize_scene(const Scene& scene) {
  DocWriter w;
  w.open("{");

  w.key("camera", "{");
  const CameraIntrinsics& k = scene.rig.intrinsics;
  w.entry("\"baseline\": " + format_g9(scene.rig.baseline));
  w.entry("\"cx\": " + format_g9(k.cx));
  w.entry("\"cy\": " + format_g9(k.cy));
  w.entry("\"fx\": " + format_g9(k.fx));
  w.entry("\"fy\": " + format_g9(k.fy));
  w.entry("\"height\": " + std::to_string(k.height));
  write_pose_track(w, "poses", scene.rig.left_poses);
  w.entry("\"width\": " + std::to_string(k.width));
  w.close("}");

  w.entry("\"frame_count\": " + std::to_string(scene.frame_count));

  w.key("light", "{");
  w.entry("\"ambient\": " + format_g9(scene.ambient));
  w.entry("\"direction\": " + vec3_g9(scene.light_direction));
  w.close("}");

  w.key("meshes", "[");
  for (const Mesh& mesh : scene.meshes) {
    w.open("{");
    w.entry("\"albedo\": " + vec3_g9(mesh.material.albedo));
    if (mesh.has_deformation()) {
      w.key("deformation", "[");
      for (const auto& frame : mesh.deformation) {
        std::string line = "[";
        for (size_t i = 0; i < frame.size(); ++i) {
          if (i) line += ", ";
          line += vec3_g9(frame[i]);
        }
        line += "]";
        w.entry(line);
      }
      w.close("]");
    }
    w.entry("\"id\": " + std::to_string(mesh.id));
    w.entry("\"material_id\": \"" + mesh.material.id + "\"");
    write_pose_track(w, "poses", mesh.poses);
    w.entry(std::string("\"static\": ") + (mesh.is_static ? "true" : "false"));
    w.key("triangles", "[");
    for (const Triangle& t : mesh.triangles)
      w.entry("[" + std::to_string(t.v0) + ", " + std::to_string(t.v1) + ", " +
              std::to_string(t.v2) + "]");
    w.close("]");
    w.key("vertices", "[");
    for (const Vec3& v : mesh.vertices) w.entry(vec3_g9(v));
    w.close("]");
    w.close("}");
  }
  w.close("]");

  w.close("}");
  std::string out = w.take();
  out += '\n';
  return out;
}

}  // namespace sflow
