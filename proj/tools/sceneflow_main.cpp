// Copyright 2026 The sceneflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pipeline entry point: generate scenes, render ground truth, verify
// datasets, visualize channels.
//
//   sceneflow generate --preset road --seed 7 --frames 3 --out scene.json
//   sceneflow render scene.json --out dataset/ --threads 8
//   sceneflow verify dataset/ --checks all
//   sceneflow visualize dataset/000000/left/forward/flow.flo --out flow.ppm
//
// Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sflow/dataset.hpp"
#include "sflow/image_io.hpp"
#include "sflow/parallel.hpp"
#include "sflow/scene_gen.hpp"
#include "sflow/scene_io.hpp"
#include "sflow/verifier.hpp"

namespace {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sflow::IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sflow::IoError("cannot open " + path.string() + " for writing");
  out << text;
}

struct GenerateCli {
  std::string preset = "road";
  std::uint64_t seed = 0;
  int frames = 3;
  int actors = 4;
  double camera_speed = 1.0;
  double speed_min = 0.2;
  double speed_max = 1.0;
  double extent = 20.0;
  double baseline = 0.5;
  int width = 640;
  int height = 480;
  std::string out = "scene.json";
  std::string catalog_path;
};

int run_generate(const GenerateCli& cli) {
  sflow::GenParams params;
  params.preset = sflow::preset_from_string(cli.preset);
  params.seed = cli.seed;
  params.frame_count = cli.frames;
  params.actor_count = cli.actors;
  params.actor_speed_min = cli.speed_min;
  params.actor_speed_max = cli.speed_max;
  params.camera_speed = cli.camera_speed;
  params.extent = cli.extent;
  params.baseline = cli.baseline;
  params.intrinsics.width = cli.width;
  params.intrinsics.height = cli.height;
  params.intrinsics.fx = params.intrinsics.fy = 525.0 * cli.width / 640.0;
  params.intrinsics.cx = cli.width / 2.0;
  params.intrinsics.cy = cli.height / 2.0;

  const sflow::Catalog catalog = cli.catalog_path.empty()
                                     ? sflow::Catalog::builtin()
                                     : sflow::Catalog::load(read_text_file(cli.catalog_path));
  const std::string doc = sflow::generate_scene(params, catalog);
  write_text_file(cli.out, doc);
  const sflow::Scene scene = sflow::parse_scene(doc);
  std::printf("generate: preset %s seed %llu -> %s (%d frames, %zu meshes)\n",
              cli.preset.c_str(), static_cast<unsigned long long>(cli.seed), cli.out.c_str(),
              scene.frame_count, scene.meshes.size());
  return 0;
}

struct RenderCli {
  std::string scene_path;
  std::string out;
  int threads = sflow::default_thread_count();
  bool forward_only = false;
};

int run_render(const RenderCli& cli) {
  const sflow::Scene scene = sflow::parse_scene(read_text_file(cli.scene_path));
  int bundles = 0;
  sflow::render_dataset(scene, cli.out, cli.threads, cli.forward_only,
                        [&](const sflow::GroundTruthBundle&) { ++bundles; });
  std::printf("render: %s -> %s (%d bundles, %d threads)\n", cli.scene_path.c_str(),
              cli.out.c_str(), bundles, cli.threads);
  return 0;
}

struct VerifyCli {
  std::string root;
  std::string checks = "all";
  double tol_px = 0.5;
  double tol_m = 1e-4;
  double tol_ego = 1e-6;
};

int run_verify(const VerifyCli& cli) {
  sflow::VerifyOptions opts;
  opts.roundtrip_tol_px = cli.tol_px;
  opts.fb_tol_m = cli.tol_m;
  opts.ego_tol_m = cli.tol_ego;
  opts.roundtrip = opts.fb = opts.ego = false;
  std::stringstream names(cli.checks);
  std::string name;
  while (std::getline(names, name, ',')) {
    if (name == "all") opts.roundtrip = opts.fb = opts.ego = true;
    else if (name == "roundtrip") opts.roundtrip = true;
    else if (name == "fb") opts.fb = true;
    else if (name == "ego") opts.ego = true;
  }

  const sflow::VerificationReport report = sflow::verify_dataset(cli.root, opts);
  sflow::write_report_files(report, cli.root);
  long failures = 0;
  for (const auto& r : report.results)
    if (!r.pass) ++failures;
  std::printf("verify: %s -> %zu checks, %ld failures, %zu errors: %s (report: %s)\n",
              cli.root.c_str(), report.results.size(), failures, report.item_errors.size(),
              report.ok() ? "pass" : "FAIL", (cli.root + "/report.txt").c_str());
  return report.ok() ? 0 : 1;
}

struct VisualizeCli {
  std::string input;
  std::string out = "visualization.ppm";
  double max_mag = 10.0;
};

int run_visualize(const VisualizeCli& cli) {
  const std::filesystem::path input(cli.input);
  const std::string ext = input.extension().string();
  std::vector<double> rgb;
  int width = 0, height = 0;
  if (ext == ".flo") {
    const sflow::FloatMap flow = sflow::read_flo(input);
    rgb = sflow::flow_to_color(flow, cli.max_mag);
    width = flow.width;
    height = flow.height;
  } else if (ext == ".pfm") {
    const sflow::FloatMap map = sflow::read_pfm(input);
    if (map.channels != 1)
      throw sflow::InputError("visualize expects a 1-channel .pfm (depth/disparity)");
    rgb = sflow::depth_to_gray(map, cli.max_mag);
    width = map.width;
    height = map.height;
  } else {
    throw sflow::InputError("visualize supports .flo and .pfm inputs, got '" + ext + "'");
  }
  sflow::write_ppm(rgb, width, height, cli.out);
  std::printf("visualize: %s -> %s (%dx%d)\n", cli.input.c_str(), cli.out.c_str(), width,
              height);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic stereo scene flow ground truth: generate, render, verify, visualize"};
  app.require_subcommand(1);

  GenerateCli gen;
  CLI::App* generate = app.add_subcommand("generate", "produce a scene-description document");
  generate->add_option("--preset", gen.preset, "road | orbit | random-boxes")
      ->capture_default_str();
  generate->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  generate->add_option("--frames", gen.frames, "frame count (>= 2)")->capture_default_str();
  generate->add_option("--actors", gen.actors, "dynamic mesh count")->capture_default_str();
  generate->add_option("--camera-speed", gen.camera_speed, "m/frame")->capture_default_str();
  generate->add_option("--speed-min", gen.speed_min, "actor speed range low, m/frame")
      ->capture_default_str();
  generate->add_option("--speed-max", gen.speed_max, "actor speed range high, m/frame")
      ->capture_default_str();
  generate->add_option("--extent", gen.extent, "scene half-width, meters")
      ->capture_default_str();
  generate->add_option("--baseline", gen.baseline, "stereo baseline, meters")
      ->capture_default_str();
  generate->add_option("--width", gen.width, "image width, pixels")->capture_default_str();
  generate->add_option("--height", gen.height, "image height, pixels")->capture_default_str();
  generate->add_option("--catalog", gen.catalog_path, "asset catalog file (default: builtin)");
  generate->add_option("--out", gen.out, "output scene file")->capture_default_str();

  RenderCli render;
  CLI::App* render_cmd = app.add_subcommand("render", "render ground truth bundles");
  render_cmd->add_option("scene", render.scene_path, "scene-description document")->required();
  render_cmd->add_option("--out", render.out, "dataset root directory")->required();
  render_cmd->add_option("--threads", render.threads, "worker threads (>= 1)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  render_cmd->add_flag("--forward-only", render.forward_only,
                       "skip backward bundles (disables fb/roundtrip checks)");

  VerifyCli verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run consistency checks over a dataset");
  verify_cmd->add_option("root", verify.root, "dataset root directory")->required();
  verify_cmd->add_option("--checks", verify.checks, "comma list of roundtrip,fb,ego or all")
      ->capture_default_str()
      ->check([](const std::string& value) -> std::string {
        std::stringstream names(value);
        std::string name;
        while (std::getline(names, name, ','))
          if (name != "all" && name != "roundtrip" && name != "fb" && name != "ego")
            return "unknown check '" + name + "'";
        return {};
      });
  verify_cmd->add_option("--tol-px", verify.tol_px, "round-trip base tolerance, pixels")
      ->capture_default_str();
  verify_cmd->add_option("--tol-m", verify.tol_m, "forward-backward base tolerance, meters")
      ->capture_default_str();
  verify_cmd->add_option("--tol-ego", verify.tol_ego, "ego-motion tolerance, meters")
      ->capture_default_str();

  VisualizeCli visualize;
  CLI::App* visualize_cmd = app.add_subcommand("visualize", "flow/depth file to color .ppm");
  visualize_cmd->add_option("input", visualize.input, ".flo or 1-channel .pfm")->required();
  visualize_cmd->add_option("--out", visualize.out, "output .ppm")->capture_default_str();
  visualize_cmd->add_option("--max-mag", visualize.max_mag,
                            "magnitude mapped to full saturation (flow) or range (depth)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*render_cmd) return run_render(render);
    if (*verify_cmd) return run_verify(verify);
    if (*visualize_cmd) return run_visualize(visualize);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
