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

// Photon-counting sensor forward model:
//
//   y = ADC( Poisson( alpha * (x + dark_rate * t_int) ) + read_noise )
//
// with Gaussian read noise and either a B-bit rounding/clipping ADC or a
// single-bit threshold. Draws are keyed on (seed, frame, y, x, kind), so the
// output is identical under any parallel partition of pixels or frames.

#pragma once

#include <cstdint>
#include <span>

#include "qis/types.hpp"

namespace qis {

/// Gain that makes the mean of alpha * scene equal `target_ppp`.
double calibrate_gain(const SceneImage& scene, double target_ppp);

/// B > 1: clamp(floor(v + 0.5), 0, 2^B - 1).
/// B = 1: 1 when floor(v + 0.5) >= threshold, else 0.
std::uint8_t adc_quantize(double analog_value, const SensorConfig& config);

/// Poisson(lambda) by CDF inversion of a single uniform u in [0, 1).
/// Nondecreasing in lambda for fixed u.
std::uint32_t poisson_quantile(double lambda, double u);

/// Mean photoelectrons at a pixel of normalized radiance x.
inline double photon_rate(double x, const SensorConfig& config) noexcept {
  return config.gain_alpha * (x + config.dark_offset());
}

/// One pixel of one frame; the shared per-pixel kernel of every simulator.
std::uint8_t sample_pixel(double radiance, const SensorConfig& config, Seed seed,
                          int frame_index, int x, int y);

Grid<std::uint8_t> simulate_frame(const SceneImage& scene, const SensorConfig& config,
                                  Seed seed, int frame_index);

/// Frame t is simulate_frame(frames[t], config, seed, t).
/// Requires frames.size() == config.frames_per_burst.
Burst simulate_burst(std::span<const SceneImage> frames, const SensorConfig& config,
                     Seed seed);

/// Static scene repeated config.frames_per_burst times.
Burst simulate_burst(const SceneImage& scene, const SensorConfig& config, Seed seed);

/// Conventional-sensor capture: same pipeline, but the caller supplies a
/// large read noise and an ADC of up to 8 bits.
Grid<std::uint8_t> simulate_cis_frame(const SceneImage& scene, const SensorConfig& cis_config,
                                      Seed seed, int frame_index);

}  // namespace qis
