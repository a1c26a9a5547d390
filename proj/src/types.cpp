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

#include "qis/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qis {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kCalibrationImpossible: return "calibration impossible";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated payload";
    case ErrorCode::kValueOutOfRange: return "value out of range";
    case ErrorCode::kBadMetadata: return "bad metadata";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kIncompatibleMethod: return "incompatible method";
  }
  return "unknown";
}

void SensorConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    require(ok, ErrorCode::kInvalidArgument, std::string("SensorConfig: ") + what);
  };
  check(std::isfinite(gain_alpha) && gain_alpha > 0.0, "gain_alpha must be > 0");
  check(std::isfinite(dark_current_rate) && dark_current_rate >= 0.0,
        "dark_current_rate must be >= 0");
  check(std::isfinite(read_noise_sigma) && read_noise_sigma >= 0.0,
        "read_noise_sigma must be >= 0");
  check(std::isfinite(integration_time) && integration_time > 0.0,
        "integration_time must be > 0");
  check(adc_bits >= 1 && adc_bits <= 8, "adc_bits must be in [1, 8]");
  check(single_bit_threshold >= 1 && single_bit_threshold <= 255,
        "single_bit_threshold must be in [1, 255]");
  check(frames_per_burst >= 1, "frames_per_burst must be >= 1");
}

std::string describe(const SensorConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "gain_alpha=" << c.gain_alpha << " dark_current_rate=" << c.dark_current_rate
     << " read_noise_sigma=" << c.read_noise_sigma << " adc_bits=" << c.adc_bits
     << " single_bit_threshold=" << c.single_bit_threshold
     << " integration_time=" << c.integration_time
     << " frames_per_burst=" << c.frames_per_burst;
  return os.str();
}

SceneImage::SceneImage(RealGrid pixels) : pixels_(std::move(pixels)) {
  require(!pixels_.empty(), ErrorCode::kInvalidArgument, "scene must be non-empty");
  for (double v : pixels_.values()) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, ErrorCode::kInvalidArgument,
            "scene values must be finite and in [0, 1]");
  }
}

SceneImage::SceneImage(int width, int height, double fill)
    : SceneImage(RealGrid(width, height, fill)) {}

double SceneImage::mean() const {
  const auto v = pixels_.values();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void MotionTrajectory::validate() const {
  require(!displacements.empty(), ErrorCode::kInvalidArgument, "trajectory must be non-empty");
  require(displacements.front() == Displacement{0.0, 0.0}, ErrorCode::kInvalidArgument,
          "trajectory must start at (0, 0)");
  for (const auto& d : displacements) {
    require(std::isfinite(d.dx) && std::isfinite(d.dy), ErrorCode::kInvalidArgument,
            "trajectory displacements must be finite");
  }
}

MotionTrajectory MotionTrajectory::zero(int frames) {
  require(frames >= 1, ErrorCode::kInvalidArgument, "frames must be >= 1");
  return {std::vector<Displacement>(static_cast<std::size_t>(frames))};
}

void LocalMotionSpec::validate() const {
  require(!mask.empty(), ErrorCode::kInvalidArgument, "local motion mask is empty");
  const auto v = mask.values();
  require(std::any_of(v.begin(), v.end(), [](std::uint8_t m) { return m != 0; }),
          ErrorCode::kInvalidArgument, "local motion mask has no foreground pixel");
  require(!transforms.empty(), ErrorCode::kInvalidArgument, "local motion needs transforms");
  require(transforms.front() == RigidTransform{}, ErrorCode::kInvalidArgument,
          "local transform at frame 0 must be identity");
  for (const auto& t : transforms) {
    require(std::isfinite(t.dx) && std::isfinite(t.dy), ErrorCode::kInvalidArgument,
            "local translation must be finite");
    require(t.angle_deg >= 0.0 && t.angle_deg <= kMaxAngleDeg, ErrorCode::kInvalidArgument,
            "local rotation must be within [0, 15] degrees");
  }
}

Displacement LocalMotionSpec::centroid() const {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask(x, y) != 0) {
        sx += x;
        sy += y;
        ++n;
      }
    }
  }
  require(n > 0, ErrorCode::kInvalidArgument, "local motion mask has no foreground pixel");
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

Burst::Burst(SensorConfig config, Seed seed, int width, int height, int frame_count,
             std::vector<std::uint8_t> samples, std::optional<MotionTrajectory> trajectory)
    : config_(config),
      seed_(seed),
      width_(width),
      height_(height),
      frame_count_(frame_count),
      samples_(std::move(samples)),
      trajectory_(std::move(trajectory)) {
  config_.validate();
  require(width >= 1 && height >= 1 && frame_count >= 1, ErrorCode::kInvalidArgument,
          "burst dimensions must be positive");
  require(samples_.size() == pixels_per_frame() * static_cast<std::size_t>(frame_count),
          ErrorCode::kDimensionMismatch, "burst payload size does not match dimensions");
  const int max_code = config_.max_code();
  for (std::uint8_t s : samples_) {
    require(s <= max_code, ErrorCode::kValueOutOfRange,
            "burst sample exceeds 2^adc_bits - 1");
  }
  if (trajectory_) trajectory_->validate();
}

std::span<const std::uint8_t> Burst::frame(int t) const {
  require(t >= 0 && t < frame_count_, ErrorCode::kInvalidArgument, "frame index out of range");
  return std::span<const std::uint8_t>(samples_).subspan(
      static_cast<std::size_t>(t) * pixels_per_frame(), pixels_per_frame());
}

KernelField::KernelField(int width, int height, int frames, int kernel_size,
                         std::vector<double> weights, KernelNormalization mode)
    : width_(width),
      height_(height),
      frames_(frames),
      kernel_size_(kernel_size),
      weights_(std::move(weights)),
      mode_(mode) {
  require(width >= 1 && height >= 1 && frames >= 1, ErrorCode::kInvalidArgument,
          "kernel field dimensions must be positive");
  require(kernel_size >= 1 && kernel_size % 2 == 1, ErrorCode::kInvalidArgument,
          "kernel size must be odd and >= 1");
  require(weights_.size() == static_cast<std::size_t>(width) * height * taps_per_pixel(),
          ErrorCode::kDimensionMismatch, "kernel weights size does not match dimensions");
  for (double w : weights_) {
    require(std::isfinite(w), ErrorCode::kInvalidArgument, "kernel weights must be finite");
  }
}

KernelField KernelField::uniform(int width, int height, int frames, int kernel_size,
                                 double weight, KernelNormalization mode) {
  const std::size_t n = static_cast<std::size_t>(width) * height * frames * kernel_size *
                        kernel_size;
  return KernelField(width, height, frames, kernel_size, std::vector<double>(n, weight), mode);
}

std::span<const double> KernelField::pixel_weights(int x, int y) const {
  const std::size_t taps = taps_per_pixel();
  return std::span<const double>(weights_).subspan(
      (static_cast<std::size_t>(y) * width_ + x) * taps, taps);
}

KernelField KernelField::normalized() const {
  std::vector<double> out = weights_;
  const std::size_t taps = taps_per_pixel();
  const std::size_t pixels = static_cast<std::size_t>(width_) * height_;
  for (std::size_t p = 0; p < pixels; ++p) {
    double* w = out.data() + p * taps;
    switch (mode_) {
      case KernelNormalization::kNone:
        break;
      case KernelNormalization::kSumToOne: {
        const double sum = std::accumulate(w, w + taps, 0.0);
        require(sum != 0.0 && std::isfinite(sum), ErrorCode::kInvalidArgument,
                "sum-to-one kernel has zero total weight");
        for (std::size_t i = 0; i < taps; ++i) w[i] /= sum;
        break;
      }
      case KernelNormalization::kSoftmax: {
        const double peak = *std::max_element(w, w + taps);
        double sum = 0.0;
        for (std::size_t i = 0; i < taps; ++i) {
          w[i] = std::exp(w[i] - peak);
          sum += w[i];
        }
        for (std::size_t i = 0; i < taps; ++i) w[i] /= sum;
        break;
      }
    }
  }
  return KernelField(width_, height_, frames_, kernel_size_, std::move(out),
                     KernelNormalization::kNone);
}

}  // namespace qis
