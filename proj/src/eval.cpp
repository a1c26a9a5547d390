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

#include "qis/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qis/motion.hpp"
#include "qis/rng.hpp"
#include "qis/sensor.hpp"

namespace qis {
namespace {

enum class SweepAxis { kMotion, kPhoton };

void check_setup(const SweepSetup& setup) {
  require(!setup.methods.empty(), ErrorCode::kInvalidArgument, "sweep needs at least one method");
  require(!setup.scenes.empty(), ErrorCode::kInvalidArgument, "sweep needs at least one scene");
  require(!setup.seeds.empty(), ErrorCode::kInvalidArgument, "sweep needs at least one seed");
  require(setup.border_exclude >= 0, ErrorCode::kInvalidArgument, "border_exclude must be >= 0");
  setup.base_config.validate();
}

SweepResult run_sweep(const SweepSetup& setup, std::vector<double> variables, SweepAxis axis,
                      double fixed) {
  check_setup(setup);
  require(!variables.empty(), ErrorCode::kInvalidArgument,
          axis == SweepAxis::kMotion ? "magnitude list is empty" : "ppp list is empty");
  for (double v : variables) {
    require(std::isfinite(v) && (axis == SweepAxis::kMotion ? v >= 0.0 : v > 0.0),
            ErrorCode::kInvalidArgument, "invalid sweep value");
  }
  std::sort(variables.begin(), variables.end());

  const std::size_t n_methods = setup.methods.size();
  // psnr_sum[method][variable]
  std::vector<std::vector<double>> psnr_sum(n_methods, std::vector<double>(variables.size(), 0.0));
  const int frames = setup.base_config.frames_per_burst;

  for (std::size_t vi = 0; vi < variables.size(); ++vi) {
    const double magnitude = axis == SweepAxis::kMotion ? variables[vi] : fixed;
    const double ppp = axis == SweepAxis::kMotion ? fixed : variables[vi];
    const MotionTrajectory traj = linear_trajectory({magnitude, 0.0}, frames);
    for (std::size_t si = 0; si < setup.scenes.size(); ++si) {
      const SceneImage& scene = setup.scenes[si];
      const auto moving = warp_sequence(scene, traj);
      SensorConfig config = setup.base_config;
      config.gain_alpha = calibrate_gain(scene, ppp);
      for (Seed seed : setup.seeds) {
        const Burst burst = simulate_burst(moving, config, rng::derive_seed(seed, si));
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
          const SceneImage estimate = reconstruct_pipeline(burst, setup.methods[mi]);
          psnr_sum[mi][vi] += psnr(estimate, scene, setup.border_exclude);
        }
      }
    }
  }

  const int n = static_cast<int>(setup.scenes.size() * setup.seeds.size());
  SweepResult result;
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    for (std::size_t vi = 0; vi < variables.size(); ++vi) {
      const double db = psnr_sum[mi][vi] / n;
      result.rows.push_back({variables[vi], std::string(method_name(setup.methods[mi].kind)), db,
                             std::pow(10.0, -db / 10.0), n});
    }
  }
  return result;
}

}  // namespace

double mse(const RealGrid& estimate, const RealGrid& truth, int border_exclude) {
  require(estimate.same_shape(truth), ErrorCode::kDimensionMismatch,
          "estimate and truth dimensions differ");
  require(border_exclude >= 0, ErrorCode::kInvalidArgument, "border_exclude must be >= 0");
  const int x_end = truth.width() - border_exclude;
  const int y_end = truth.height() - border_exclude;
  require(x_end > border_exclude && y_end > border_exclude, ErrorCode::kInvalidArgument,
          "border exclusion leaves an empty interior");
  double sum = 0.0;
  for (int y = border_exclude; y < y_end; ++y) {
    for (int x = border_exclude; x < x_end; ++x) {
      const double d = estimate(x, y) - truth(x, y);
      sum += d * d;
    }
  }
  return sum / (static_cast<double>(x_end - border_exclude) * (y_end - border_exclude));
}

double psnr_from_mse(double m) {
  if (!(m > 0.0)) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / m));
}

double psnr(const SceneImage& estimate, const SceneImage& truth, int border_exclude) {
  return psnr_from_mse(mse(estimate.grid(), truth.grid(), border_exclude));
}

std::string format_db(double db) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f dB", db);
  return buf;
}

std::string SweepResult::to_csv() const {
  std::string out = "variable,method,psnr_db,mse,n\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%d\n", r.variable, r.method.c_str(),
                  r.psnr_db, r.mse, r.n);
    out += buf;
  }
  return out;
}

SweepResult sweep_motion(const SweepSetup& setup, const std::vector<double>& magnitudes, double ppp) {
  require(std::isfinite(ppp) && ppp > 0.0, ErrorCode::kInvalidArgument, "ppp must be > 0");
  return run_sweep(setup, magnitudes, SweepAxis::kMotion, ppp);
}

SweepResult sweep_photon(const SweepSetup& setup, const std::vector<double>& ppp_list,
                         double magnitude) {
  require(std::isfinite(magnitude) && magnitude >= 0.0, ErrorCode::kInvalidArgument,
          "magnitude must be >= 0");
  return run_sweep(setup, ppp_list, SweepAxis::kPhoton, magnitude);
}

}  // namespace qis
