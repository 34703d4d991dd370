// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "sflow/errors.hpp"
#include "sflow/numfmt.hpp"

namespace sflow {

namespace {

// Round half up per component, the fixed sampling rule of every hop.
int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Max rounding displacement of one nearest-pixel hop, pixels.
constexpr double kHopRadius = 0.70710678118654757;  // 0.5 * sqrt(2)

struct Stats {
  long evaluated = 0;
  long skipped = 0;
  double max = 0.0;
  double mean = 0.0;
  double p99 = 0.0;
};

Stats summarize(const std::vector<double>& error_map) {
  Stats s;
  std::vector<double> errors;
  errors.reserve(error_map.size());
  for (const double e : error_map)
    if (!std::isnan(e)) errors.push_back(e);
  s.evaluated = static_cast<long>(errors.size());
  if (errors.empty()) return s;
  std::sort(errors.begin(), errors.end());
  s.max = errors.back();
  double sum = 0.0;
  for (const double e : errors) sum += e;
  s.mean = sum / static_cast<double>(errors.size());
  const size_t idx = static_cast<size_t>(
      std::ceil(0.99 * static_cast<double>(errors.size()))) - 1;
  s.p99 = errors[std::min(idx, errors.size() - 1)];
  return s;
}

void finalize(CheckResult& r, long valid_starts, const std::vector<double>& raw_map,
              double tolerance, bool gate_on_max) {
  const Stats excess = summarize(r.error_map);
  const Stats raw = summarize(raw_map);
  r.evaluated = excess.evaluated;
  r.skipped = valid_starts - excess.evaluated;
  r.max_error = excess.max;
  r.mean_error = excess.mean;
  r.p99_error = excess.p99;
  r.raw_max = raw.max;
  r.raw_mean = raw.mean;
  r.raw_p99 = raw.p99;
  r.tolerance = tolerance;
  // p99 gates the sampling-based checks; an isolated excess above 10x the
  // tolerance still fails so single-pixel corruption cannot hide below the
  // percentile. The ego identity is exact and gates on max directly.
  if (gate_on_max)
    r.pass = excess.max <= tolerance;
  else
    r.pass = excess.p99 <= tolerance && excess.max <= 10.0 * tolerance;
}

long count_valid(const LoadedBundle& b) {
  long n = 0;
  for (const std::uint8_t v : b.valid) n += v ? 1 : 0;
  return n;
}

// Largest field step from (x, y) to a 4-neighbor sharing the same
// (mesh, triangle) anchor: the local Lipschitz estimate bounding what one
// nearest-pixel rounding can change the sampled value by. Object
// boundaries and surface creases, where the field legitimately jumps, do
// not contribute.
double edge_gradient(const FloatMap& field, const LoadedBundle& owner, int x, int y) {
  const auto anchor = owner.anchor_at(x, y);
  double largest = 0.0;
  static constexpr int kSteps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& step : kSteps) {
    const int nx = x + step[0], ny = y + step[1];
    if (nx < 0 || ny < 0 || nx >= owner.width || ny >= owner.height) continue;
    if (!owner.valid_at(nx, ny) || owner.anchor_at(nx, ny) != anchor) continue;
    double sq = 0.0;
    bool finite = true;
    for (int c = 0; c < field.channels; ++c) {
      const double d = double(field.at(nx, ny, c)) - double(field.at(x, y, c));
      if (std::isnan(d)) { finite = false; break; }
      sq += d * d;
    }
    if (finite) largest = std::max(largest, std::sqrt(sq));
  }
  return largest;
}

// Lipschitz estimate around a sampled pixel, valid only when the whole
// 4-neighborhood shares the pixel's anchor (otherwise the gradient toward
// the exact sampling position may be unobservable and the pixel must be
// skipped). The window maximum also covers fields whose gradient itself
// changes between adjacent pixels (steep perspective foreshortening near
// the horizon).
bool local_gradient(const FloatMap& field, const LoadedBundle& owner, int x, int y,
                    double& gradient) {
  const auto anchor = owner.anchor_at(x, y);
  static constexpr int kSteps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& step : kSteps) {
    const int nx = x + step[0], ny = y + step[1];
    if (nx < 0 || ny < 0 || nx >= owner.width || ny >= owner.height) return false;
    if (!owner.valid_at(nx, ny) || owner.anchor_at(nx, ny) != anchor) return false;
  }
  double largest = edge_gradient(field, owner, x, y);
  for (const auto& step : kSteps)
    largest = std::max(largest, edge_gradient(field, owner, x + step[0], y + step[1]));
  gradient = largest;
  return true;
}

void check_dimensions(const LoadedBundle& a, const LoadedBundle& b, const char* what) {
  if (a.width != b.width || a.height != b.height)
    throw InputError(std::string("dimension mismatch between bundles (") + what + ")");
}

}  // namespace

DatasetPair load_dataset_pair(const std::filesystem::path& root, int frame) {
  DatasetPair pair;
  pair.frame = frame;
  const auto load = [&](Side side, Direction dir, int f) {
    const std::filesystem::path dir_path = bundle_dir(root, f, side, dir);
    if (!std::filesystem::exists(dir_path / "meta.txt"))
      throw InputError("missing bundle " + dir_path.string());
    return read_bundle(dir_path);
  };
  pair.fwd_left = load(Side::kLeft, Direction::kForward, frame);
  pair.fwd_right = load(Side::kRight, Direction::kForward, frame);
  pair.bwd_left = load(Side::kLeft, Direction::kBackward, frame + 1);
  pair.bwd_right = load(Side::kRight, Direction::kBackward, frame + 1);
  check_dimensions(pair.fwd_left, pair.fwd_right, "forward left/right");
  check_dimensions(pair.fwd_left, pair.bwd_left, "forward/backward left");
  check_dimensions(pair.fwd_left, pair.bwd_right, "forward/backward right");
  const auto require = [&](const LoadedBundle& b, int f, Direction d, const char* name) {
    if (b.meta.frame != f || b.meta.direction != d)
      throw InputError(std::string("bundle ") + name + " has mismatched frame or direction");
  };
  require(pair.fwd_left, frame, Direction::kForward, "forward-left");
  require(pair.fwd_right, frame, Direction::kForward, "forward-right");
  require(pair.bwd_left, frame + 1, Direction::kBackward, "backward-left");
  require(pair.bwd_right, frame + 1, Direction::kBackward, "backward-right");
  return pair;
}

CheckResult round_trip_check(const DatasetPair& pair, double base_tolerance_px) {
  const LoadedBundle& fl = pair.fwd_left;
  const LoadedBundle& fr = pair.fwd_right;
  const LoadedBundle& bl = pair.bwd_left;
  const LoadedBundle& br = pair.bwd_right;

  CheckResult r;
  r.check = "roundtrip";
  r.frame = pair.frame;
  r.side = Side::kLeft;
  r.width = fl.width;
  r.height = fl.height;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.error_map.assign(static_cast<size_t>(fl.width) * fl.height, nan);
  std::vector<double> raw_map(r.error_map.size(), nan);

  const auto in_image = [&](int x, int y) {
    return x >= 0 && x < fl.width && y >= 0 && y < fl.height;
  };

  for (int y = 0; y < fl.height; ++y)
    for (int x = 0; x < fl.width; ++x) {
      if (!fl.valid_at(x, y)) continue;
      const auto start_anchor = fl.anchor_at(x, y);

      // Hop 1: reference -> next time step (exact stored flow at p).
      const double u0 = fl.optical_flow.at(x, y, 0);
      const double v0 = fl.optical_flow.at(x, y, 1);
      if (std::isnan(u0) || std::isnan(v0)) continue;  // target behind camera
      const double p1x = x + u0, p1y = y + v0;
      const int s1x = round_half_up(p1x), s1y = round_half_up(p1y);
      if (!in_image(s1x, s1y) || !bl.valid_at(s1x, s1y) ||
          bl.anchor_at(s1x, s1y) != start_anchor)
        continue;

      // Hop 2: to the stereo partner via disparity at t+1.
      const double d1 = bl.disparity.at(s1x, s1y);
      const double p2x = p1x - d1, p2y = p1y;
      const int s2x = round_half_up(p2x), s2y = round_half_up(p2y);
      if (!in_image(s2x, s2y) || !br.valid_at(s2x, s2y) ||
          br.anchor_at(s2x, s2y) != start_anchor)
        continue;

      // Hop 3: back to the previous time step along the backward flow.
      const double bu = br.optical_flow.at(s2x, s2y, 0);
      const double bv = br.optical_flow.at(s2x, s2y, 1);
      if (std::isnan(bu) || std::isnan(bv)) continue;
      const double p3x = p2x + bu, p3y = p2y + bv;
      const int s3x = round_half_up(p3x), s3y = round_half_up(p3y);
      if (!in_image(s3x, s3y) || !fr.valid_at(s3x, s3y) ||
          fr.anchor_at(s3x, s3y) != start_anchor)
        continue;

      // Hop 4: back to the reference camera via disparity at t.
      const double d3 = fr.disparity.at(s3x, s3y);
      const double p4x = p3x + d3, p4y = p3y;

      // Each rounded sampling may shift the value by at most the local
      // field gradient over the half-pixel rounding radius; anything
      // beyond that allowance counts as inconsistency.
      double g1 = 0.0, g2 = 0.0, g3 = 0.0;
      if (!local_gradient(bl.disparity, bl, s1x, s1y, g1) ||
          !local_gradient(br.optical_flow, br, s2x, s2y, g2) ||
          !local_gradient(fr.disparity, fr, s3x, s3y, g3))
        continue;
      const double allowance = kHopRadius * (g1 + g2 + g3);
      const double raw = std::hypot(p4x - x, p4y - y);
      const size_t i = static_cast<size_t>(y) * fl.width + x;
      raw_map[i] = raw;
      r.error_map[i] = std::max(0.0, raw - allowance);
    }

  finalize(r, count_valid(fl), raw_map, base_tolerance_px, false);
  return r;
}

CheckResult forward_backward_check(const LoadedBundle& fwd, const LoadedBundle& bwd,
                                   double base_tolerance_m) {
  if (fwd.meta.direction != Direction::kForward || bwd.meta.direction != Direction::kBackward)
    throw InputError("forward_backward_check needs a forward and a backward bundle");
  if (bwd.meta.frame != fwd.meta.frame + 1)
    throw InputError("forward/backward frames are not a (t, t+1) pair");
  if (fwd.meta.side != bwd.meta.side)
    throw InputError("forward and backward bundles belong to different cameras");
  check_dimensions(fwd, bwd, "forward/backward");

  CheckResult r;
  r.check = "fb";
  r.frame = fwd.meta.frame;
  r.side = fwd.meta.side;
  r.width = fwd.width;
  r.height = fwd.height;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.error_map.assign(static_cast<size_t>(fwd.width) * fwd.height, nan);
  std::vector<double> raw_map(r.error_map.size(), nan);

  for (int y = 0; y < fwd.height; ++y)
    for (int x = 0; x < fwd.width; ++x) {
      if (!fwd.valid_at(x, y)) continue;
      const double u = fwd.optical_flow.at(x, y, 0);
      const double v = fwd.optical_flow.at(x, y, 1);
      if (std::isnan(u) || std::isnan(v)) continue;
      const int qx = round_half_up(x + u), qy = round_half_up(y + v);
      if (qx < 0 || qx >= fwd.width || qy < 0 || qy >= fwd.height) continue;
      if (!bwd.valid_at(qx, qy)) continue;
      if (bwd.anchor_at(qx, qy) != fwd.anchor_at(x, y)) continue;  // occlusion/edge
      double sq = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double sum =
            double(fwd.scene_flow.at(x, y, c)) + double(bwd.scene_flow.at(qx, qy, c));
        sq += sum * sum;
      }
      const double raw = std::sqrt(sq);
      double gradient = 0.0;
      if (!local_gradient(bwd.scene_flow, bwd, qx, qy, gradient)) continue;
      const size_t i = static_cast<size_t>(y) * fwd.width + x;
      raw_map[i] = raw;
      r.error_map[i] = std::max(0.0, raw - kHopRadius * gradient);
    }

  finalize(r, count_valid(fwd), raw_map, base_tolerance_m, false);
  return r;
}

CheckResult ego_motion_check(const LoadedBundle& bundle,
                             const std::vector<std::uint8_t>& static_mask, double tolerance_m) {
  if (static_mask.size() != bundle.valid.size())
    throw InputError("static mask dimensions disagree with the bundle");

  CheckResult r;
  r.check = "ego";
  r.frame = bundle.meta.frame;
  r.side = bundle.meta.side;
  r.direction = bundle.meta.direction;
  r.width = bundle.width;
  r.height = bundle.height;
  r.error_map.assign(static_cast<size_t>(bundle.width) * bundle.height,
                     std::numeric_limits<double>::quiet_NaN());

  const CameraIntrinsics& k = bundle.meta.intrinsics;
  const RigidTransform& ego = bundle.meta.ego_motion;
  for (int y = 0; y < bundle.height; ++y)
    for (int x = 0; x < bundle.width; ++x) {
      const size_t i = static_cast<size_t>(y) * bundle.width + x;
      if (!bundle.valid[i] || !static_mask[i]) continue;
      const double z = bundle.depth.at(x, y);
      const Vec3 q_t{(x - k.cx) / k.fx * z, (y - k.cy) / k.fy * z, z};
      const Vec3 q_t1 = q_t + Vec3{bundle.scene_flow.at(x, y, 0), bundle.scene_flow.at(x, y, 1),
                                   bundle.scene_flow.at(x, y, 2)};
      r.error_map[i] = norm(q_t1 - transform_point(ego, q_t));
    }

  finalize(r, count_valid(bundle), r.error_map, tolerance_m, true);
  return r;
}

namespace {

void append_ego_check(const std::filesystem::path& root, int frame, Side side, Direction dir,
                      const VerifyOptions& opts, VerificationReport& report,
                      std::set<std::string>* done) {
  const std::filesystem::path dir_path = bundle_dir(root, frame, side, dir);
  if (done && !done->insert(dir_path.string()).second) return;
  try {
    const LoadedBundle bundle = read_bundle(dir_path);
    report.results.push_back(ego_motion_check(bundle, bundle.static_mask, opts.ego_tol_m));
  } catch (const std::exception& e) {
    report.item_errors.push_back(dir_path.string() + ": " + e.what());
  }
}

}  // namespace

VerificationReport verify_dataset(const std::filesystem::path& root, const VerifyOptions& opts) {
  VerificationReport report;
  if (!std::filesystem::is_directory(root)) {
    report.item_errors.push_back(root.string() + ": not a directory");
    return report;
  }

  std::set<std::string> ego_done;
  for (const int t : list_frame_pairs(root)) {
    DatasetPair pair;
    bool loaded = false;
    try {
      pair = load_dataset_pair(root, t);
      loaded = true;
    } catch (const std::exception& e) {
      report.item_errors.push_back("pair " + std::to_string(t) + ": " + e.what());
    }
    if (!loaded) continue;

    const auto guarded = [&](const char* what, auto&& fn) {
      try {
        report.results.push_back(fn());
      } catch (const std::exception& e) {
        report.item_errors.push_back("pair " + std::to_string(t) + " " + what + ": " + e.what());
      }
    };
    if (opts.roundtrip)
      guarded("roundtrip", [&] { return round_trip_check(pair, opts.roundtrip_tol_px); });
    if (opts.fb) {
      guarded("fb left",
              [&] { return forward_backward_check(pair.fwd_left, pair.bwd_left, opts.fb_tol_m); });
      guarded("fb right", [&] {
        return forward_backward_check(pair.fwd_right, pair.bwd_right, opts.fb_tol_m);
      });
    }
    if (opts.ego) {
      const auto ego = [&](const LoadedBundle& b, int frame, Side side, Direction dir) {
        ego_done.insert(bundle_dir(root, frame, side, dir).string());
        guarded("ego", [&] { return ego_motion_check(b, b.static_mask, opts.ego_tol_m); });
      };
      ego(pair.fwd_left, t, Side::kLeft, Direction::kForward);
      ego(pair.fwd_right, t, Side::kRight, Direction::kForward);
      ego(pair.bwd_left, t + 1, Side::kLeft, Direction::kBackward);
      ego(pair.bwd_right, t + 1, Side::kRight, Direction::kBackward);
    }
  }

  // Bundles outside complete pairs (e.g. forward-only datasets) still get
  // the ego check.
  if (opts.ego) {
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
      if (!entry.is_directory()) continue;
      int frame = -1;
      try {
        frame = std::stoi(entry.path().filename().string());
      } catch (const std::logic_error&) {
        continue;
      }
      for (const Side side : {Side::kLeft, Side::kRight})
        for (const Direction dir : {Direction::kForward, Direction::kBackward})
          if (std::filesystem::exists(bundle_dir(root, frame, side, dir) / "meta.txt"))
            append_ego_check(root, frame, side, dir, opts, report, &ego_done);
    }
  }

  std::sort(report.results.begin(), report.results.end(),
            [](const CheckResult& a, const CheckResult& b) {
              if (a.frame != b.frame) return a.frame < b.frame;
              if (a.check != b.check) return a.check < b.check;
              if (a.side != b.side) return a.side < b.side;
              return a.direction < b.direction;
            });
  return report;
}

namespace {

std::string camera_label(const CheckResult& r) {
  if (r.check == "roundtrip") return "left";
  return to_string(r.side);
}

}  // namespace

std::string summary_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "# frame camera check evaluated skipped mean p99 max status\n";
  for (const CheckResult& r : report.results) {
    out << r.frame << " " << camera_label(r) << " " << r.check << " " << r.evaluated << " "
        << r.skipped << " " << format_exact(r.mean_error) << " " << format_exact(r.p99_error)
        << " " << format_exact(r.max_error) << " " << (r.pass ? "pass" : "fail") << "\n";
  }
  return out.str();
}

std::string report_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "verification report\n";
  long failures = 0;
  for (const CheckResult& r : report.results) {
    if (!r.pass) ++failures;
    out << "frame " << r.frame << " " << camera_label(r) << " " << r.check
        << (r.check == "ego" ? std::string(" (") + to_string(r.direction) + ")" : "")
        << ": evaluated " << r.evaluated << ", skipped " << r.skipped << ", mean "
        << format_g9(r.mean_error) << ", p99 " << format_g9(r.p99_error) << ", max "
        << format_g9(r.max_error);
    if (r.check != "ego")
      out << " (raw p99 " << format_g9(r.raw_p99) << ", raw max " << format_g9(r.raw_max)
          << ")";
    out << ", tolerance " << format_g9(r.tolerance) << " -> " << (r.pass ? "pass" : "FAIL")
        << "\n";
  }
  for (const std::string& e : report.item_errors) out << "error: " << e << "\n";
  out << "checks: " << report.results.size() << ", failures: " << failures
      << ", errors: " << report.item_errors.size() << ", overall: "
      << (report.ok() ? "pass" : "FAIL") << "\n";
  return out.str();
}

void write_report_files(const VerificationReport& report, const std::filesystem::path& root) {
  std::ofstream human(root / "report.txt");
  human << report_text(report);
  std::ofstream machine(root / "summary.txt");
  machine << summary_text(report);
}

}  // namespace sflow
