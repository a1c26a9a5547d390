// Copyright 2026 The qisburst Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qis/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "metadata.hpp"
#include "qis/burst_io.hpp"
#include "qis/eval.hpp"
#include "qis/image_io.hpp"
#include "qis/motion.hpp"
#include "qis/reconstruct.hpp"
#include "qis/rng.hpp"
#include "qis/scenes.hpp"
#include "qis/sensor.hpp"

namespace qis::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SensorFlags {
  int frames = 8;
  int bits = 3;
  int threshold = 1;
  double read_noise = 0.25;
  double dark_current = 0.0068;
  double integration_time = 75e-6;

  void add_to(CLI::App* app) {
    app->add_option("--frames", frames, "frames per burst")->capture_default_str();
    app->add_option("--bits", bits, "ADC bits (1..8)")->capture_default_str();
    app->add_option("--threshold", threshold, "single-bit threshold in electrons")
        ->capture_default_str();
    app->add_option("--read-noise", read_noise, "read noise, electrons RMS")->capture_default_str();
    app->add_option("--dark-current", dark_current, "dark current, e-/pix/s")->capture_default_str();
    app->add_option("--integration-time", integration_time, "frame integration time, s")
        ->capture_default_str();
  }

  SensorConfig config() const {
    SensorConfig c;
    c.frames_per_burst = frames;
    c.adc_bits = bits;
    c.single_bit_threshold = threshold;
    c.read_noise_sigma = read_noise;
    c.dark_current_rate = dark_current;
    c.integration_time = integration_time;
    return c;
  }
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse '") + item + "' in " + flag);
    }
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<fs::path> list_pgms(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void log_config(std::ostream& err, const SensorConfig& config) {
  err << "[qis] sensor config: " << describe(config) << '\n';
}

std::string frame_name(const char* stem, int index) {
  std::ostringstream os;
  os << stem << '_' << std::setw(2) << std::setfill('0') << index << ".pgm";
  return os.str();
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string input;
  std::string out;
  double ppp = 0.0;
  double gain = 0.0;
  double motion_dx = 0.0;
  double motion_dy = 0.0;
  Seed seed = 0;
  SensorFlags sensor;
};

int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const SceneImage scene = read_pgm(a.input);
  SensorConfig config = a.sensor.config();
  if (a.ppp > 0.0) {
    config.gain_alpha = calibrate_gain(scene, a.ppp);
  } else if (a.gain > 0.0) {
    config.gain_alpha = a.gain;
  } else {
    throw UsageError("simulate needs --ppp or --gain");
  }
  log_config(err, config);
  const MotionTrajectory traj =
      linear_trajectory({a.motion_dx, a.motion_dy}, config.frames_per_burst);
  const auto frames = warp_sequence(scene, traj);
  const Burst sim = simulate_burst(frames, config, a.seed);
  const Burst burst(sim.config(), sim.seed(), sim.width(), sim.height(), sim.frame_count(),
                    {sim.samples().begin(), sim.samples().end()}, traj);
  write_burst(burst, a.out);
  out << "wrote " << a.out << " (" << burst.width() << "x" << burst.height() << "x"
      << burst.frame_count() << ", " << burst.adc_bits() << "-bit)\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth-dataset

struct SynthArgs {
  std::string source;
  std::string masks;
  std::string out;
  int per_image = 1;
  int size = 64;
  int margin = 35;
  double ppp = 1.0;
  double min_motion = 7.0;
  double max_motion = 35.0;
  double max_angle = LocalMotionSpec::kMaxAngleDeg;
  std::string model = "linear";
  Seed seed = 0;
  SensorFlags sensor;
};

int run_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  TrajectoryModel model;
  if (a.model == "linear") {
    model = TrajectoryModel::kLinear;
  } else if (a.model == "smooth-random") {
    model = TrajectoryModel::kSmoothRandom;
  } else {
    throw UsageError("--model must be linear or smooth-random");
  }
  if (a.per_image < 1) throw UsageError("--per-image must be >= 1");
  if (a.max_motion < a.min_motion || a.min_motion < 0) throw UsageError("bad motion range");
  if (a.max_angle < 0 || a.max_angle > LocalMotionSpec::kMaxAngleDeg) {
    throw UsageError("--max-angle must be within [0, 15]");
  }
  if (a.margin < static_cast<int>(std::ceil(a.max_motion))) {
    err << "[qis] warning: margin " << a.margin << " is smaller than the maximum motion "
        << a.max_motion << "; warps may sample outside the source\n";
  }

  SensorConfig base = a.sensor.config();
  base.validate();
  log_config(err, base);
  const auto sources = list_pgms(a.source);
  if (sources.empty()) fail(ErrorCode::kIo, "no .pgm files in " + a.source);
  const fs::path out_dir(a.out);
  fs::create_directories(out_dir);

  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["seed"] = a.seed;
  manifest["ppp"] = a.ppp;
  manifest["motion_range"] = {a.min_motion, a.max_motion};
  manifest["model"] = a.model;
  manifest["patch_size"] = a.size;
  manifest["margin"] = a.margin;
  auto entries = nlohmann::json::array();

  int index = 0;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const SceneImage source = read_pgm(sources[si]);
    std::optional<Grid<std::uint8_t>> source_mask;
    if (!a.masks.empty()) {
      const fs::path mask_path = fs::path(a.masks) / sources[si].filename();
      if (fs::exists(mask_path)) {
        const auto raw = read_pgm_raw(mask_path);
        require(raw.width() == source.width() && raw.height() == source.height(),
                ErrorCode::kDimensionMismatch, "mask size differs from " + sources[si].string());
        Grid<std::uint8_t> m(raw.width(), raw.height());
        for (std::size_t i = 0; i < raw.size(); ++i) m.values()[i] = raw.values()[i] != 0;
        source_mask = std::move(m);
      }
    }

    for (int k = 0; k < a.per_image; ++k, ++index) {
      const Seed seed = rng::derive_seed(a.seed, static_cast<std::uint64_t>(index));
      const CropWindow win =
          sample_crop_window(source.width(), source.height(), a.size, a.margin, seed);
      const int ctx = a.size + 2 * a.margin;
      const SceneImage context = crop(source, win.x0 - a.margin, win.y0 - a.margin, ctx, ctx);
      const SceneImage patch = crop(source, win.x0, win.y0, a.size, a.size);

      SensorConfig config = base;
      config.gain_alpha = calibrate_gain(patch, a.ppp);

      const MotionTrajectory sampled = sample_global_trajectory(
          rng::derive_seed(seed, 1), {a.min_motion, a.max_motion}, config.frames_per_burst, model);
      MotionTrajectory trajectory = sampled;
      std::optional<LocalMotionSpec> local;
      if (source_mask) {
        Grid<std::uint8_t> m = crop(*source_mask, win.x0 - a.margin, win.y0 - a.margin, ctx, ctx);
        const auto mv = m.values();
        if (std::any_of(mv.begin(), mv.end(), [](std::uint8_t v) { return v != 0; })) {
          rng::Stream draw(seed, rng::DrawKind::kLocalMotion, 0, 0, 0);
          const double angle = draw.uniform(0.0, a.max_angle);
          LocalMotionSpec spec{std::move(m), {}};
          const int frames = config.frames_per_burst;
          for (int t = 0; t < frames; ++t) {
            const double frac = frames > 1 ? static_cast<double>(t) / (frames - 1) : 0.0;
            spec.transforms.push_back(
                {sampled.displacements[t].dx, sampled.displacements[t].dy, angle * frac});
          }
          local = std::move(spec);
          trajectory = MotionTrajectory::zero(frames);
        }
      }

      const Triplet triplet =
          center_crop(make_triplet(context, config, seed, trajectory, local), a.margin);

      std::ostringstream dir_name;
      dir_name << "triplet_" << std::setw(5) << std::setfill('0') << index;
      const fs::path dir = out_dir / dir_name.str();
      fs::create_directories(dir);
      write_pgm(triplet.x_true, dir / "x_true.pgm");
      auto motion_paths = nlohmann::json::array();
      for (std::size_t t = 0; t < triplet.x_motion.size(); ++t) {
        const std::string name = frame_name("x_motion", static_cast<int>(t));
        write_pgm(triplet.x_motion[t], dir / name);
        motion_paths.push_back((fs::path(dir_name.str()) / name).generic_string());
      }
      write_burst(triplet.x_noise, dir / "x_noise.qisb");
      write_burst(triplet.x_qis, dir / "x_qis.qisb");

      nlohmann::json e;
      e["id"] = index;
      e["source"] = sources[si].filename().generic_string();
      e["crop"] = {win.x0, win.y0, a.size};
      e["seed"] = seed;
      e["config"] = detail::config_to_json(config);
      e["x_true"] = (fs::path(dir_name.str()) / "x_true.pgm").generic_string();
      e["x_motion"] = std::move(motion_paths);
      e["x_noise"] = (fs::path(dir_name.str()) / "x_noise.qisb").generic_string();
      e["x_qis"] = (fs::path(dir_name.str()) / "x_qis.qisb").generic_string();
      e["trajectory"] = detail::trajectory_to_json(triplet.trajectory);
      if (triplet.local_spec) {
        Grid<double> mask_img(triplet.local_spec->mask.width(), triplet.local_spec->mask.height());
        for (std::size_t i = 0; i < mask_img.size(); ++i) {
          mask_img.values()[i] = triplet.local_spec->mask.values()[i] ? 1.0 : 0.0;
        }
        write_pgm(SceneImage(std::move(mask_img)), dir / "mask.pgm", 8);
        auto transforms = nlohmann::json::array();
        for (const auto& t : triplet.local_spec->transforms) {
          transforms.push_back({t.dx, t.dy, t.angle_deg});
        }
        e["local_spec"] = {{"mask", (fs::path(dir_name.str()) / "mask.pgm").generic_string()},
                           {"transforms", std::move(transforms)}};
      } else {
        e["local_spec"] = nullptr;
      }
      entries.push_back(std::move(e));
    }
  }
  manifest["triplets"] = std::move(entries);

  std::ofstream mf(out_dir / "manifest.json", std::ios::trunc);
  if (!mf) fail(ErrorCode::kIo, "cannot write manifest in " + out_dir.string());
  mf << manifest.dump(2) << '\n';
  out << "wrote " << index << " triplets to " << out_dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string input;
  std::string method = "burst-average";
  std::string out;
  int bit_depth = 16;
  double nlm_h = -1.0;
  int nlm_patch = 0;
  int nlm_search = 0;
};

int run_reconstruct(const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
  ReconstructionMethod method;
  try {
    method = parse_method(a.method);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (a.nlm_h >= 0.0 || a.nlm_patch > 0 || a.nlm_search > 0) {
    NlmParams p = method.kind == MethodKind::kAnscombeDenoise ? default_anscombe_nlm()
                                                               : default_flux_nlm();
    if (a.nlm_h >= 0.0) p.filter_strength = a.nlm_h;
    if (a.nlm_patch > 0) p.patch_radius = a.nlm_patch;
    if (a.nlm_search > 0) p.search_radius = a.nlm_search;
    method.nlm = p;
  }
  const Burst burst = read_burst(a.input);
  log_config(err, burst.config());
  const SceneImage image = reconstruct_pipeline(burst, method);
  write_pgm(image, a.out, a.bit_depth);
  out << "wrote " << a.out << " (" << method_name(method.kind) << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string mode;
  std::string methods = "burst-average";
  std::string magnitudes;
  std::string ppp_list;
  double magnitude = 4.0;
  double ppp = 2.0;
  std::string scenes_dir;
  int synthetic = 0;
  int scene_size = 128;
  int seeds = 4;
  std::optional<Seed> seed;
  int border = kDefaultBorderExclude;
  std::string out;
  std::string estimate;
  std::string truth;
  SensorFlags sensor;
};

int run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  if (a.mode == "single") {
    if (a.estimate.empty() || a.truth.empty()) throw UsageError("single mode needs --estimate and --truth");
    const double m = mse(read_pgm(a.estimate).grid(), read_pgm(a.truth).grid(), a.border);
    const double db = psnr_from_mse(m);
    SweepResult r;
    r.rows.push_back({0.0, "single", db, m, 1});
    out << format_db(db) << '\n';
    if (!a.out.empty()) {
      std::ofstream f(a.out, std::ios::trunc);
      if (!f) fail(ErrorCode::kIo, "cannot write " + a.out);
      f << r.to_csv();
    }
    return kExitOk;
  }
  if (a.mode != "motion-sweep" && a.mode != "photon-sweep") {
    throw UsageError("--mode must be motion-sweep, photon-sweep or single");
  }
  if (!a.seed) throw UsageError("sweeps require --seed");
  if (a.seeds < 1) throw UsageError("--seeds must be >= 1");

  SweepSetup setup;
  for (const auto& name : split_names(a.methods)) {
    try {
      setup.methods.push_back(parse_method(name));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (setup.methods.empty()) throw UsageError("--methods is empty");

  std::vector<double> values;
  if (a.mode == "motion-sweep") {
    values = parse_list(a.magnitudes, "--magnitudes");
    if (values.empty()) throw UsageError("--magnitudes is empty");
  } else {
    values = parse_list(a.ppp_list, "--ppp-list");
    if (values.empty()) throw UsageError("--ppp-list is empty");
  }

  if (!a.scenes_dir.empty()) {
    for (const auto& p : list_pgms(a.scenes_dir)) setup.scenes.push_back(read_pgm(p));
    if (setup.scenes.empty()) fail(ErrorCode::kIo, "no .pgm files in " + a.scenes_dir);
  } else {
    if (a.synthetic < 1) throw UsageError("give --scenes DIR or --synthetic N");
    for (int i = 0; i < a.synthetic; ++i) {
      setup.scenes.push_back(textured_scene(a.scene_size, a.scene_size,
                                            rng::derive_seed(*a.seed, 0x5CE0E000u + i)));
    }
  }
  for (int i = 0; i < a.seeds; ++i) {
    setup.seeds.push_back(rng::derive_seed(*a.seed, static_cast<std::uint64_t>(i)));
  }
  setup.base_config = a.sensor.config();
  setup.border_exclude = a.border;
  log_config(err, setup.base_config);

  const SweepResult result = a.mode == "motion-sweep" ? sweep_motion(setup, values, a.ppp)
                                                      : sweep_photon(setup, values, a.magnitude);
  const std::string csv = result.to_csv();
  if (a.out.empty()) {
    out << csv;
  } else {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::kIo, "cannot write " + a.out);
    f << csv;
    out << "wrote " << a.out << " (" << result.rows.size() << " rows)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- inspect

int run_inspect(const std::string& input, std::ostream& out) {
  const QisbHeader h = read_qisb_header(input);
  out << "file: " << input << '\n'
      << "version: " << h.version << '\n'
      << "height: " << h.height << '\n'
      << "width: " << h.width << '\n'
      << "frame_count: " << h.frame_count << '\n'
      << "adc_bits: " << static_cast<int>(h.adc_bits) << '\n';
  const Burst burst = read_burst(input);
  out << "seed: " << burst.seed() << '\n'
      << "config: " << describe(burst.config()) << '\n'
      << "trajectory: "
      << (burst.trajectory() ? std::to_string(burst.trajectory()->frame_count()) + " frames"
                             : std::string("none"))
      << '\n';
  for (int t = 0; t < burst.frame_count(); ++t) {
    const auto f = burst.frame(t);
    const double mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    out << "frame " << t << " mean: " << mean << '\n';
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-counting burst simulation, reconstruction and evaluation", "qis"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (results do not depend on it)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a burst from a scene");
  simulate->add_option("--input", sim.input, "scene (binary PGM)")->required();
  simulate->add_option("--out", sim.out, "output burst (.qisb)")->required();
  simulate->add_option("--ppp", sim.ppp, "mean photons per pixel per frame");
  simulate->add_option("--gain", sim.gain, "sensor gain alpha (instead of --ppp)");
  simulate->add_option("--motion-dx", sim.motion_dx, "total horizontal motion over the burst, px");
  simulate->add_option("--motion-dy", sim.motion_dy, "total vertical motion over the burst, px");
  simulate->add_option("--seed", sim.seed, "noise seed")->required();
  sim.sensor.add_to(simulate);

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth-dataset", "emit training triplets and a manifest");
  synth->add_option("--source", syn.source, "directory of source PGMs")->required();
  synth->add_option("--masks", syn.masks, "directory of foreground masks (same file names)");
  synth->add_option("--out", syn.out, "output directory")->required();
  synth->add_option("--per-image", syn.per_image, "triplets per source image")->capture_default_str();
  synth->add_option("--size", syn.size, "patch size")->capture_default_str();
  synth->add_option("--margin", syn.margin, "guard margin around each patch")->capture_default_str();
  synth->add_option("--ppp", syn.ppp, "photons per pixel")->capture_default_str();
  synth->add_option("--min-motion", syn.min_motion, "smallest motion magnitude, px")->capture_default_str();
  synth->add_option("--max-motion", syn.max_motion, "largest motion magnitude, px")->capture_default_str();
  synth->add_option("--max-angle", syn.max_angle, "largest foreground rotation, degrees")
      ->capture_default_str();
  synth->add_option("--model", syn.model, "linear | smooth-random")->capture_default_str();
  synth->add_option("--seed", syn.seed, "dataset seed")->required();
  syn.sensor.add_to(synth);

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct an image from a burst");
  reconstruct->add_option("--input", rec.input, "burst (.qisb)")->required();
  reconstruct->add_option("--method", rec.method,
                          "burst-average | average-then-denoise | anscombe-denoise | mle-binary")
      ->capture_default_str();
  reconstruct->add_option("--out", rec.out, "output PGM")->required();
  reconstruct->add_option("--bit-depth", rec.bit_depth, "8 or 16")->capture_default_str();
  reconstruct->add_option("--nlm-h", rec.nlm_h, "NLM filter strength");
  reconstruct->add_option("--nlm-patch", rec.nlm_patch, "NLM patch radius");
  reconstruct->add_option("--nlm-search", rec.nlm_search, "NLM search radius");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "PSNR of one image, or motion/photon sweeps to CSV");
  eval->add_option("--mode", ev.mode, "motion-sweep | photon-sweep | single")->required();
  eval->add_option("--methods", ev.methods, "comma-separated methods")->capture_default_str();
  eval->add_option("--magnitudes", ev.magnitudes, "comma-separated motion magnitudes, px");
  eval->add_option("--ppp-list", ev.ppp_list, "comma-separated photon levels");
  eval->add_option("--magnitude", ev.magnitude, "fixed motion for photon-sweep")->capture_default_str();
  eval->add_option("--ppp", ev.ppp, "fixed photon level for motion-sweep")->capture_default_str();
  eval->add_option("--scenes", ev.scenes_dir, "directory of scene PGMs");
  eval->add_option("--synthetic", ev.synthetic, "number of procedural scenes if no --scenes");
  eval->add_option("--scene-size", ev.scene_size, "procedural scene size")->capture_default_str();
  eval->add_option("--seeds", ev.seeds, "noise seeds per cell")->capture_default_str();
  eval->add_option("--seed", ev.seed, "base seed (required for sweeps)");
  eval->add_option("--border", ev.border, "border excluded from PSNR")->capture_default_str();
  eval->add_option("--out", ev.out, "CSV output (stdout if omitted)");
  eval->add_option("--estimate", ev.estimate, "single mode: estimate PGM");
  eval->add_option("--truth", ev.truth, "single mode: ground-truth PGM");
  ev.sensor.add_to(eval);

  std::string inspect_input;
  auto* inspect = app.add_subcommand("inspect", "dump a burst header and metadata");
  inspect->add_option("--input", inspect_input, "burst (.qisb)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (simulate->parsed()) return run_simulate(sim, out, err);
    if (synth->parsed()) return run_synth(syn, out, err);
    if (reconstruct->parsed()) return run_reconstruct(rec, out, err);
    if (eval->parsed()) return run_eval(ev, out, err);
    if (inspect->parsed()) return run_inspect(inspect_input, out);
  } catch (const UsageError& e) {
    err << "qis: usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "qis: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "qis: i/o error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace qis::cli
