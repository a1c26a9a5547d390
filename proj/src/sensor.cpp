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

#include "qis/sensor.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "qis/rng.hpp"

namespace qis {
namespace {

// Below this rate the CDF is accumulated from k = 0; e^-64 is still far from
// underflow. Above it the search starts at the mode.
constexpr double kDirectInversionLimit = 64.0;

void check_frame_dims(std::span<const SceneImage> frames) {
  require(!frames.empty(), ErrorCode::kInvalidArgument, "no frames to simulate");
  for (const auto& f : frames) {
    require(f.width() == frames.front().width() && f.height() == frames.front().height(),
            ErrorCode::kDimensionMismatch, "all frames must share the same dimensions");
  }
}

}  // namespace

double calibrate_gain(const SceneImage& scene, double target_ppp) {
  require(std::isfinite(target_ppp) && target_ppp > 0.0, ErrorCode::kInvalidArgument,
          "target ppp must be > 0");
  const double mean = scene.mean();
  require(mean > 0.0, ErrorCode::kCalibrationImpossible,
          "cannot calibrate gain on an all-zero scene");
  return target_ppp / mean;
}

std::uint8_t adc_quantize(double analog_value, const SensorConfig& config) {
  const double rounded = std::floor(analog_value + 0.5);
  if (config.adc_bits == 1) {
    return rounded >= static_cast<double>(config.single_bit_threshold) ? 1 : 0;
  }
  return static_cast<std::uint8_t>(std::clamp(rounded, 0.0, static_cast<double>(config.max_code())));
}

std::uint32_t poisson_quantile(double lambda, double u) {
  if (!(lambda > 0.0)) return 0;

  if (lambda <= kDirectInversionLimit) {
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    std::uint32_t k = 0;
    while (u >= cdf) {
      ++k;
      pmf *= lambda / k;
      if (pmf == 0.0) break;  // tail exhausted in double precision
      cdf += pmf;
    }
    return k;
  }

  auto k = static_cast<std::uint32_t>(std::floor(lambda));
  double cdf = boost::math::gamma_q(static_cast<double>(k) + 1.0, lambda);
  double pmf = std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
  if (u < cdf) {
    while (k > 0) {
      const double below = cdf - pmf;
      if (u >= below) break;
      cdf = below;
      pmf *= k / lambda;
      --k;
    }
  } else {
    while (u >= cdf) {
      ++k;
      pmf *= lambda / k;
      if (pmf == 0.0) break;
      cdf += pmf;
    }
  }
  return k;
}

std::uint8_t sample_pixel(double radiance, const SensorConfig& config, Seed seed,
                          int frame_index, int x, int y) {
  const auto ux = static_cast<std::uint32_t>(x);
  const auto uy = static_cast<std::uint32_t>(y);
  const auto ut = static_cast<std::uint32_t>(frame_index);

  rng::Stream arrivals(seed, rng::DrawKind::kPhotonArrival, ux, uy, ut);
  double analog = poisson_quantile(photon_rate(radiance, config), arrivals.uniform());
  if (config.read_noise_sigma > 0.0) {
    rng::Stream readout(seed, rng::DrawKind::kReadNoise, ux, uy, ut);
    analog += config.read_noise_sigma * readout.normal();
  }
  return adc_quantize(analog, config);
}

Grid<std::uint8_t> simulate_frame(const SceneImage& scene, const SensorConfig& config, Seed seed,
                                  int frame_index) {
  config.validate();
  require(frame_index >= 0 && frame_index < config.frames_per_burst, ErrorCode::kInvalidArgument,
          "frame_index outside [0, frames_per_burst)");
  const int w = scene.width();
  const int h = scene.height();
  Grid<std::uint8_t> out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out(x, y) = sample_pixel(scene(x, y), config, seed, frame_index, x, y);
    }
  }
  return out;
}

Burst simulate_burst(std::span<const SceneImage> frames, const SensorConfig& config, Seed seed) {
  config.validate();
  check_frame_dims(frames);
  require(static_cast<int>(frames.size()) == config.frames_per_burst, ErrorCode::kInvalidArgument,
          "frame count " + std::to_string(frames.size()) + " does not match frames_per_burst " +
              std::to_string(config.frames_per_burst));
  const int w = frames.front().width();
  const int h = frames.front().height();
  const int t_count = config.frames_per_burst;
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  std::vector<std::uint8_t> samples(plane * t_count);

#pragma omp parallel for collapse(2) schedule(static)
  for (int t = 0; t < t_count; ++t) {
    for (int y = 0; y < h; ++y) {
      const SceneImage& scene = frames[t];
      std::uint8_t* row = samples.data() + t * plane + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) row[x] = sample_pixel(scene(x, y), config, seed, t, x, y);
    }
  }
  return Burst(config, seed, w, h, t_count, std::move(samples));
}

Burst simulate_burst(const SceneImage& scene, const SensorConfig& config, Seed seed) {
  config.validate();
  const std::vector<SceneImage> frames(static_cast<std::size_t>(config.frames_per_burst), scene);
  return simulate_burst(frames, config, seed);
}

Grid<std::uint8_t> simulate_cis_frame(const SceneImage& scene, const SensorConfig& cis_config,
                                      Seed seed, int frame_index) {
  return simulate_frame(scene, cis_config, seed, frame_index);
}

}  // namespace qis
