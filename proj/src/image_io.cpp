// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "sflow/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "sflow/errors.hpp"

namespace sflow {

namespace {

constexpr float kFloMagic = 202021.25f;

std::uint32_t canonical_bits(float f) {
  const auto bits = std::bit_cast<std::uint32_t>(f);
  return std::isnan(f) ? kInvalidBits : bits;
}

void store_f32_le(std::uint32_t bits, std::string& out) {
  out.push_back(static_cast<char>(bits & 0xFF));
  out.push_back(static_cast<char>((bits >> 8) & 0xFF));
  out.push_back(static_cast<char>((bits >> 16) & 0xFF));
  out.push_back(static_cast<char>((bits >> 24) & 0xFF));
}

void store_i32_le(std::int32_t v, std::string& out) {
  store_f32_le(static_cast<std::uint32_t>(v), out);
}

std::uint32_t load_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

// Next whitespace-delimited token starting at pos; advances pos past it.
std::string next_token(const std::string& bytes, size_t& pos, const std::string& context) {
  while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  const size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw IoError(context + ": truncated header");
  return bytes.substr(start, pos - start);
}

int parse_dim(const std::string& token, const std::string& context) {
  try {
    const int v = std::stoi(token);
    if (v <= 0 || v > 100000) throw IoError(context + ": implausible dimension " + token);
    return v;
  } catch (const std::logic_error&) {
    throw IoError(context + ": bad dimension '" + token + "'");
  }
}

}  // namespace

void write_pfm(const FloatMap& map, const std::filesystem::path& path) {
  if (map.channels != 1 && map.channels != 3)
    throw IoError("PFM supports 1 or 3 channels, got " + std::to_string(map.channels));
  std::string bytes;
  bytes += map.channels == 1 ? "Pf\n" : "PF\n";
  bytes += std::to_string(map.width) + " " + std::to_string(map.height) + "\n-1.0\n";
  bytes.reserve(bytes.size() + map.data.size() * 4);
  for (int y = map.height - 1; y >= 0; --y)
    for (int x = 0; x < map.width; ++x)
      for (int c = 0; c < map.channels; ++c) store_f32_le(canonical_bits(map.at(x, y, c)), bytes);
  write_file(path, bytes);
}

FloatMap read_pfm(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::string context = "PFM " + path.string();
  size_t pos = 0;
  const std::string magic = next_token(bytes, pos, context);
  int channels = 0;
  if (magic == "Pf") channels = 1;
  else if (magic == "PF") channels = 3;
  else throw IoError(context + ": bad magic '" + magic + "'");
  const int width = parse_dim(next_token(bytes, pos, context), context);
  const int height = parse_dim(next_token(bytes, pos, context), context);
  const std::string scale = next_token(bytes, pos, context);
  if (scale.empty() || scale[0] != '-')
    throw IoError(context + ": big-endian scale '" + scale + "' unsupported");
  ++pos;  // single whitespace byte terminates the header

  FloatMap map = FloatMap::make(width, height, channels);
  const size_t need = map.data.size() * 4;
  if (bytes.size() - pos < need) throw IoError(context + ": truncated pixel data");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (int y = height - 1; y >= 0; --y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) {
        map.at(x, y, c) = std::bit_cast<float>(load_u32_le(p));
        p += 4;
      }
  return map;
}

void write_flo(const FloatMap& map, const std::filesystem::path& path) {
  if (map.channels != 2)
    throw IoError(".flo requires 2 channels, got " + std::to_string(map.channels));
  std::string bytes;
  bytes.reserve(12 + map.data.size() * 4);
  store_f32_le(std::bit_cast<std::uint32_t>(kFloMagic), bytes);
  store_i32_le(map.width, bytes);
  store_i32_le(map.height, bytes);
  for (const float f : map.data) store_f32_le(canonical_bits(f), bytes);
  write_file(path, bytes);
}

FloatMap read_flo(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::string context = ".flo " + path.string();
  if (bytes.size() < 12) throw IoError(context + ": truncated header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::bit_cast<float>(load_u32_le(p)) != kFloMagic)
    throw IoError(context + ": bad magic");
  const int width = static_cast<std::int32_t>(load_u32_le(p + 4));
  const int height = static_cast<std::int32_t>(load_u32_le(p + 8));
  if (width <= 0 || height <= 0 || width > 100000 || height > 100000)
    throw IoError(context + ": implausible dimensions");
  FloatMap map = FloatMap::make(width, height, 2);
  if (bytes.size() - 12 < map.data.size() * 4) throw IoError(context + ": truncated pixel data");
  p += 12;
  for (float& f : map.data) {
    f = std::bit_cast<float>(load_u32_le(p));
    p += 4;
  }
  return map;
}

void write_ppm(const std::vector<double>& rgb, int width, int height,
               const std::filesystem::path& path) {
  std::string bytes = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  bytes.reserve(bytes.size() + rgb.size());
  for (const double v : rgb) {
    const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    bytes.push_back(static_cast<char>(static_cast<int>(std::floor(clamped * 255.0 + 0.5))));
  }
  write_file(path, bytes);
}

void write_pgm(const std::vector<std::uint8_t>& mask, int width, int height,
               const std::filesystem::path& path) {
  std::string bytes = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  bytes.reserve(bytes.size() + mask.size());
  for (const std::uint8_t v : mask) bytes.push_back(static_cast<char>(v ? 255 : 0));
  write_file(path, bytes);
}

std::vector<std::uint8_t> read_pgm(const std::filesystem::path& path, int& width, int& height) {
  const std::string bytes = read_file(path);
  const std::string context = "PGM " + path.string();
  size_t pos = 0;
  if (next_token(bytes, pos, context) != "P5") throw IoError(context + ": bad magic");
  width = parse_dim(next_token(bytes, pos, context), context);
  height = parse_dim(next_token(bytes, pos, context), context);
  if (next_token(bytes, pos, context) != "255") throw IoError(context + ": unsupported maxval");
  ++pos;
  const size_t need = static_cast<size_t>(width) * height;
  if (bytes.size() - pos < need) throw IoError(context + ": truncated pixel data");
  std::vector<std::uint8_t> mask(need);
  for (size_t i = 0; i < need; ++i)
    mask[i] = static_cast<unsigned char>(bytes[pos + i]) ? 1 : 0;
  return mask;
}

namespace {

// h in [0, 360), s and v in [0, 1].
void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  if (hp < 1) { r1 = c; g1 = x; }
  else if (hp < 2) { r1 = x; g1 = c; }
  else if (hp < 3) { g1 = c; b1 = x; }
  else if (hp < 4) { g1 = x; b1 = c; }
  else if (hp < 5) { r1 = x; b1 = c; }
  else { r1 = c; b1 = x; }
  const double m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

}  // namespace

std::vector<double> flow_to_color(const FloatMap& flow, double max_magnitude) {
  std::vector<double> rgb(static_cast<size_t>(flow.width) * flow.height * 3, 0.0);
  for (int y = 0; y < flow.height; ++y)
    for (int x = 0; x < flow.width; ++x) {
      const float u = flow.at(x, y, 0);
      const float v = flow.at(x, y, 1);
      const size_t i = (static_cast<size_t>(y) * flow.width + x) * 3;
      if (std::isnan(u) || std::isnan(v)) continue;  // black
      const double mag = std::sqrt(double(u) * u + double(v) * v);
      double angle = std::atan2(double(v), double(u)) * 180.0 / 3.14159265358979323846;
      if (angle < 0.0) angle += 360.0;
      if (angle >= 360.0) angle = 0.0;
      const double sat = std::min(1.0, mag / max_magnitude);
      hsv_to_rgb(angle, sat, 1.0, rgb[i], rgb[i + 1], rgb[i + 2]);
    }
  return rgb;
}

std::vector<double> depth_to_gray(const FloatMap& depth, double max_depth) {
  std::vector<double> rgb(static_cast<size_t>(depth.width) * depth.height * 3, 0.0);
  for (int y = 0; y < depth.height; ++y)
    for (int x = 0; x < depth.width; ++x) {
      const float d = depth.at(x, y, 0);
      if (std::isnan(d) || d <= 0.0f) continue;
      const double g = std::clamp(1.0 - double(d) / max_depth, 0.0, 1.0);
      const size_t i = (static_cast<size_t>(y) * depth.width + x) * 3;
      rgb[i] = rgb[i + 1] = rgb[i + 2] = g;
    }
  return rgb;
}

}  // namespace sflow
