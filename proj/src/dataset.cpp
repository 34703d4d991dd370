// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sflow/errors.hpp"
#include "sflow/image_io.hpp"
#include "sflow/numfmt.hpp"

namespace sflow {

namespace {

std::string frame_name(int frame) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", frame);
  return buf;
}

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::kLeft;
  if (s == "right") return Side::kRight;
  throw IoError("bad side '" + s + "'");
}

Direction direction_from_string(const std::string& s) {
  if (s == "forward") return Direction::kForward;
  if (s == "backward") return Direction::kBackward;
  throw IoError("bad direction '" + s + "'");
}

FloatMap to_float_map(const std::vector<double>& data, int width, int height, int channels) {
  FloatMap map = FloatMap::make(width, height, channels);
  for (size_t i = 0; i < data.size(); ++i)
    map.data[i] = std::isnan(data[i]) ? invalid_value() : static_cast<float>(data[i]);
  return map;
}

}  // namespace

std::filesystem::path bundle_dir(const std::filesystem::path& root, int frame, Side side,
                                 Direction direction) {
  return root / frame_name(frame) / to_string(side) / to_string(direction);
}

void write_meta(const std::filesystem::path& path, const BundleMeta& meta) {
  std::ostringstream out;
  out << "width = " << meta.intrinsics.width << "\n";
  out << "height = " << meta.intrinsics.height << "\n";
  out << "fx = " << format_exact(meta.intrinsics.fx) << "\n";
  out << "fy = " << format_exact(meta.intrinsics.fy) << "\n";
  out << "cx = " << format_exact(meta.intrinsics.cx) << "\n";
  out << "cy = " << format_exact(meta.intrinsics.cy) << "\n";
  out << "baseline = " << format_exact(meta.baseline) << "\n";
  out << "frame = " << meta.frame << "\n";
  out << "side = " << to_string(meta.side) << "\n";
  out << "direction = " << to_string(meta.direction) << "\n";
  out << "ego_motion =";
  for (int i = 0; i < 9; ++i) out << " " << format_exact(meta.ego_motion.rotation.m[i / 3][i % 3]);
  out << " " << format_exact(meta.ego_motion.translation.x);
  out << " " << format_exact(meta.ego_motion.translation.y);
  out << " " << format_exact(meta.ego_motion.translation.z);
  out << "\n";

  std::ofstream file(path);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << out.str();
}

BundleMeta read_meta(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(file, line)) {
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    };
    trim(key);
    trim(value);
    kv[key] = value;
  }
  const auto need = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw InputError(path.string() + ": missing key '" + std::string(key) + "'");
    return it->second;
  };

  BundleMeta meta;
  meta.intrinsics.width = std::stoi(need("width"));
  meta.intrinsics.height = std::stoi(need("height"));
  meta.intrinsics.fx = std::strtod(need("fx").c_str(), nullptr);
  meta.intrinsics.fy = std::strtod(need("fy").c_str(), nullptr);
  meta.intrinsics.cx = std::strtod(need("cx").c_str(), nullptr);
  meta.intrinsics.cy = std::strtod(need("cy").c_str(), nullptr);
  meta.baseline = std::strtod(need("baseline").c_str(), nullptr);
  meta.frame = std::stoi(need("frame"));
  meta.side = side_from_string(need("side"));
  meta.direction = direction_from_string(need("direction"));

  std::istringstream ego(need("ego_motion"));
  double values[12];
  for (double& v : values)
    if (!(ego >> v)) throw InputError(path.string() + ": ego_motion needs 12 numbers");
  for (int i = 0; i < 9; ++i) meta.ego_motion.rotation.m[i / 3][i % 3] = values[i];
  meta.ego_motion.translation = {values[9], values[10], values[11]};
  return meta;
}

void write_bundle(const std::filesystem::path& root, const GroundTruthBundle& bundle,
                  const CameraIntrinsics& intrinsics, double baseline) {
  const std::filesystem::path dir = bundle_dir(root, bundle.frame, bundle.side, bundle.direction);
  std::filesystem::create_directories(dir);

  const int w = bundle.width, h = bundle.height;
  write_ppm(bundle.shaded, w, h, dir / "image.ppm");
  write_pfm(to_float_map(bundle.depth, w, h, 1), dir / "depth.pfm");
  write_pfm(to_float_map(bundle.disparity, w, h, 1), dir / "disparity.pfm");
  write_pfm(to_float_map(bundle.scene_flow, w, h, 3), dir / "sceneflow.pfm");
  write_flo(to_float_map(bundle.optical_flow, w, h, 2), dir / "flow.flo");
  write_pgm(bundle.valid, w, h, dir / "valid.pgm");
  write_pgm(bundle.static_mask, w, h, dir / "static.pgm");

  FloatMap anchors = FloatMap::make(w, h, 3, invalid_value());
  for (size_t i = 0; i < bundle.valid.size(); ++i) {
    if (!bundle.valid[i]) continue;
    anchors.data[i * 3 + 0] = static_cast<float>(bundle.anchor_mesh[i]);
    anchors.data[i * 3 + 1] = static_cast<float>(bundle.anchor_tri[i]);
    anchors.data[i * 3 + 2] = 0.0f;
  }
  write_pfm(anchors, dir / "anchors.pfm");

  BundleMeta meta;
  meta.intrinsics = intrinsics;
  meta.baseline = baseline;
  meta.frame = bundle.frame;
  meta.side = bundle.side;
  meta.direction = bundle.direction;
  meta.ego_motion = bundle.ego_motion;
  write_meta(dir / "meta.txt", meta);
}

std::pair<int, int> LoadedBundle::anchor_at(int x, int y) const {
  const float m = anchors.at(x, y, 0);
  const float t = anchors.at(x, y, 1);
  if (std::isnan(m) || std::isnan(t)) return {-1, -1};
  return {static_cast<int>(m), static_cast<int>(t)};
}

LoadedBundle read_bundle(const std::filesystem::path& dir) {
  LoadedBundle b;
  b.meta = read_meta(dir / "meta.txt");
  b.depth = read_pfm(dir / "depth.pfm");
  b.disparity = read_pfm(dir / "disparity.pfm");
  b.scene_flow = read_pfm(dir / "sceneflow.pfm");
  b.optical_flow = read_flo(dir / "flow.flo");
  b.anchors = read_pfm(dir / "anchors.pfm");
  int w = 0, h = 0;
  b.valid = read_pgm(dir / "valid.pgm", w, h);
  int w2 = 0, h2 = 0;
  b.static_mask = read_pgm(dir / "static.pgm", w2, h2);
  b.width = b.depth.width;
  b.height = b.depth.height;

  const auto check = [&](int mw, int mh, const char* name) {
    if (mw != b.width || mh != b.height)
      throw InputError(dir.string() + ": " + name + " dimensions disagree with depth map");
  };
  check(b.disparity.width, b.disparity.height, "disparity");
  check(b.scene_flow.width, b.scene_flow.height, "sceneflow");
  check(b.optical_flow.width, b.optical_flow.height, "flow");
  check(b.anchors.width, b.anchors.height, "anchors");
  check(w, h, "valid");
  check(w2, h2, "static");
  check(b.meta.intrinsics.width, b.meta.intrinsics.height, "meta");
  return b;
}

std::vector<int> list_frame_pairs(const std::filesystem::path& root) {
  std::vector<int> pairs;
  if (!std::filesystem::is_directory(root)) return pairs;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    int frame = -1;
    try {
      frame = std::stoi(entry.path().filename().string());
    } catch (const std::logic_error&) {
      continue;
    }
    bool complete = true;
    for (const Side side : {Side::kLeft, Side::kRight}) {
      if (!std::filesystem::exists(bundle_dir(root, frame, side, Direction::kForward) /
                                   "meta.txt") ||
          !std::filesystem::exists(bundle_dir(root, frame + 1, side, Direction::kBackward) /
                                   "meta.txt"))
        complete = false;
    }
    if (complete) pairs.push_back(frame);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

void render_dataset(const Scene& scene, const std::filesystem::path& root, int thread_count,
                    bool forward_only,
                    const std::function<void(const GroundTruthBundle&)>& on_bundle) {
  validate_scene(scene);
  if (scene.frame_count < 2) throw InputError("rendering needs at least 2 frames");

  FrameGeometry current = build_frame_geometry(scene, 0);
  for (int t = 0; t + 1 < scene.frame_count; ++t) {
    FrameGeometry next = build_frame_geometry(scene, t + 1);
    for (const Side side : {Side::kLeft, Side::kRight}) {
      const GroundTruthBundle fwd =
          render_bundle(scene, current, next, side, t, Direction::kForward, thread_count);
      write_bundle(root, fwd, scene.rig.intrinsics, scene.rig.baseline);
      if (on_bundle) on_bundle(fwd);
      if (!forward_only) {
        const GroundTruthBundle bwd =
            render_bundle(scene, next, current, side, t + 1, Direction::kBackward, thread_count);
        write_bundle(root, bwd, scene.rig.intrinsics, scene.rig.baseline);
        if (on_bundle) on_bundle(bwd);
      }
    }
    current = std::move(next);
  }
}

}  // namespace sflow
