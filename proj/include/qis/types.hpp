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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qis/grid.hpp"

namespace qis {

using Seed = std::uint64_t;

/// Physical constants of the photon-counting forward model.
///
/// Defaults describe the reference prototype: 0.0068 e-/pix/s dark current,
/// 0.25 e- RMS read noise, a 3-bit ADC and 75 us frames. `gain_alpha` is
/// scene dependent and is normally produced by calibrate_gain().
struct SensorConfig {
  double gain_alpha = 1.0;
  double dark_current_rate = 0.0068;
  double read_noise_sigma = 0.25;
  int adc_bits = 3;
  int single_bit_threshold = 1;
  double integration_time = 75e-6;
  int frames_per_burst = 8;

  /// Throws Error(kInvalidArgument) when any invariant is violated.
  void validate() const;

  int max_code() const noexcept { return (1 << adc_bits) - 1; }

  /// Mean dark electrons per pixel per frame in normalized-radiance units.
  double dark_offset() const noexcept { return dark_current_rate * integration_time; }

  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

std::string describe(const SensorConfig& config);

/// Normalized radiance in [0, 1], validated at construction.
class SceneImage {
 public:
  SceneImage() = default;
  explicit SceneImage(RealGrid pixels);
  SceneImage(int width, int height, double fill);

  int width() const noexcept { return pixels_.width(); }
  int height() const noexcept { return pixels_.height(); }
  double operator()(int x, int y) const { return pixels_(x, y); }
  std::span<const double> values() const noexcept { return pixels_.values(); }
  const RealGrid& grid() const noexcept { return pixels_; }

  double mean() const;

  friend bool operator==(const SceneImage&, const SceneImage&) = default;

 private:
  RealGrid pixels_;
};

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Per-frame displacement relative to the reference frame 0.
struct MotionTrajectory {
  std::vector<Displacement> displacements;

  std::size_t frame_count() const noexcept { return displacements.size(); }
  void validate() const;
  static MotionTrajectory zero(int frames);

  friend bool operator==(const MotionTrajectory&, const MotionTrajectory&) = default;
};

struct RigidTransform {
  double dx = 0.0;
  double dy = 0.0;
  double angle_deg = 0.0;
  friend bool operator==(const RigidTransform&, const RigidTransform&) = default;
};

/// Foreground mask plus its per-frame rigid motion about the mask centroid.
struct LocalMotionSpec {
  static constexpr double kMaxAngleDeg = 15.0;

  Grid<std::uint8_t> mask;  // nonzero = foreground
  std::vector<RigidTransform> transforms;

  void validate() const;
  /// Centroid of the foreground in continuous pixel-centre coordinates.
  Displacement centroid() const;

  friend bool operator==(const LocalMotionSpec&, const LocalMotionSpec&) = default;
};

/// T x H x W stack of quantized photon counts plus the acquisition metadata.
class Burst {
 public:
  Burst(SensorConfig config, Seed seed, int width, int height, int frame_count,
        std::vector<std::uint8_t> samples,
        std::optional<MotionTrajectory> trajectory = std::nullopt);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int frame_count() const noexcept { return frame_count_; }
  int adc_bits() const noexcept { return config_.adc_bits; }
  const SensorConfig& config() const noexcept { return config_; }
  Seed seed() const noexcept { return seed_; }
  const std::optional<MotionTrajectory>& trajectory() const noexcept { return trajectory_; }

  std::span<const std::uint8_t> samples() const noexcept { return samples_; }
  std::span<const std::uint8_t> frame(int t) const;
  std::uint8_t operator()(int t, int x, int y) const {
    return samples_[(static_cast<std::size_t>(t) * height_ + y) * width_ + x];
  }
  std::size_t pixels_per_frame() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }

  friend bool operator==(const Burst&, const Burst&) = default;

 private:
  SensorConfig config_;
  Seed seed_ = 0;
  int width_ = 0;
  int height_ = 0;
  int frame_count_ = 0;
  std::vector<std::uint8_t> samples_;
  std::optional<MotionTrajectory> trajectory_;
};

/// Aligned training views of one scene: clean-dynamic, noisy-static and
/// noisy-dynamic, with the frame-0 pose as ground truth.
struct Triplet {
  SceneImage x_true;
  std::vector<SceneImage> x_motion;
  Burst x_noise;
  Burst x_qis;
  MotionTrajectory trajectory;
  std::optional<LocalMotionSpec> local_spec;
};

enum class KernelNormalization { kNone, kSumToOne, kSoftmax };

/// Per-pixel K x K x T merge weights, stored as [y][x][t][ky][kx].
class KernelField {
 public:
  KernelField(int width, int height, int frames, int kernel_size,
              std::vector<double> weights,
              KernelNormalization mode = KernelNormalization::kNone);

  /// Constant weight everywhere.
  static KernelField uniform(int width, int height, int frames, int kernel_size,
                             double weight, KernelNormalization mode);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int frames() const noexcept { return frames_; }
  int kernel_size() const noexcept { return kernel_size_; }
  KernelNormalization mode() const noexcept { return mode_; }
  std::size_t taps_per_pixel() const noexcept {
    return static_cast<std::size_t>(frames_) * kernel_size_ * kernel_size_;
  }

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> pixel_weights(int x, int y) const;

  /// Weights after applying mode(); the result has mode kNone.
  KernelField normalized() const;

 private:
  int width_;
  int height_;
  int frames_;
  int kernel_size_;
  std::vector<double> weights_;
  KernelNormalization mode_;
};

}  // namespace qis
