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

#include "qis/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlm_kernel.hpp"

namespace qis {
namespace {

SceneImage clamp_to_scene(RealGrid g) {
  for (double& v : g.values()) v = std::clamp(v, 0.0, 1.0);
  return SceneImage(std::move(g));
}

void require_binary(const Burst& burst, const char* who) {
  require(burst.adc_bits() == 1, ErrorCode::kIncompatibleMethod,
          std::string(who) + " requires a single-bit burst, got " +
              std::to_string(burst.adc_bits()) + "-bit");
}

void check_kernel_inputs(std::span<const RealGrid> frames, const KernelField& field) {
  require(!frames.empty(), ErrorCode::kInvalidArgument, "no frames to merge");
  require(static_cast<int>(frames.size()) == field.frames(), ErrorCode::kDimensionMismatch,
          "kernel field frame count does not match the frame stack");
  for (const auto& f : frames) {
    require(f.width() == field.width() && f.height() == field.height(),
            ErrorCode::kDimensionMismatch, "kernel field dimensions do not match the frames");
  }
}

}  // namespace

std::string_view method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kBurstAverage: return "burst-average";
    case MethodKind::kAverageThenDenoise: return "average-then-denoise";
    case MethodKind::kAnscombeDenoise: return "anscombe-denoise";
    case MethodKind::kMleBinary: return "mle-binary";
    case MethodKind::kKernelMerge: return "kernel-merge";
  }
  return "unknown";
}

ReconstructionMethod parse_method(std::string_view name) {
  if (name == "burst-average") return ReconstructionMethod::burst_average();
  if (name == "average-then-denoise") return ReconstructionMethod::average_then_denoise();
  if (name == "anscombe-denoise") return ReconstructionMethod::anscombe_denoise();
  if (name == "mle-binary") return ReconstructionMethod::mle_binary();
  fail(ErrorCode::kInvalidArgument, "unknown reconstruction method '" + std::string(name) + "'");
}

NlmParams default_flux_nlm() { return {2, 7, 0.15}; }
NlmParams default_anscombe_nlm() { return {2, 7, 1.5}; }

SceneImage average_burst(const Burst& burst) {
  const int t_count = burst.frame_count();
  const double alpha = burst.config().gain_alpha;
  const double dark = burst.config().dark_offset();
  RealGrid out(burst.width(), burst.height());
  const auto values = out.values();
  const std::size_t plane = burst.pixels_per_frame();
  const auto samples = burst.samples();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < plane; ++i) {
    unsigned sum = 0;
    for (int t = 0; t < t_count; ++t) sum += samples[t * plane + i];
    const double mean_count = static_cast<double>(sum) / t_count;
    values[i] = std::clamp(mean_count / alpha - dark, 0.0, 1.0);
  }
  return SceneImage(std::move(out));
}

Grid<int> sum_binary_frames(const Burst& burst) {
  require_binary(burst, "binary frame summation");
  Grid<int> out(burst.width(), burst.height());
  for (int t = 0; t < burst.frame_count(); ++t) {
    const auto f = burst.frame(t);
    auto dst = out.values();
    for (std::size_t i = 0; i < f.size(); ++i) dst[i] += f[i];
  }
  return out;
}

double anscombe_binomial(double ones, int frames) {
  require(frames >= 1, ErrorCode::kInvalidArgument, "frame count must be >= 1");
  require(ones >= 0.0 && ones <= frames, ErrorCode::kValueOutOfRange,
          "binary sum outside [0, T]");
  const double n = frames;
  return 2.0 * std::sqrt(n + 0.5) * std::asin(std::sqrt((ones + 0.375) / (n + 0.75)));
}

double inverse_anscombe_binomial(double z, int frames) {
  require(frames >= 1, ErrorCode::kInvalidArgument, "frame count must be >= 1");
  const double n = frames;
  const double arg = std::clamp(z / (2.0 * std::sqrt(n + 0.5)), 0.0, std::numbers::pi / 2.0);
  const double s = std::sin(arg);
  return std::clamp((n + 0.75) * s * s - 0.375, 0.0, n);
}

RealGrid anscombe_binomial(const Grid<int>& summed, int frames) {
  RealGrid out(summed.width(), summed.height());
  const auto src = summed.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = anscombe_binomial(src[i], frames);
  return out;
}

double binary_rate_to_flux(double p_hat, int frames) {
  require(frames >= 1, ErrorCode::kInvalidArgument, "frame count must be >= 1");
  const double ceiling = 1.0 - 1.0 / (2.0 * frames);
  return -std::log1p(-std::clamp(p_hat, 0.0, ceiling));
}

SceneImage mle_invert_binary(const Burst& burst) {
  require_binary(burst, "mle-binary");
  require(burst.config().single_bit_threshold == 1, ErrorCode::kIncompatibleMethod,
          "mle-binary assumes a threshold of one photoelectron");
  const Grid<int> ones = sum_binary_frames(burst);
  const int t_count = burst.frame_count();
  const double alpha = burst.config().gain_alpha;
  RealGrid out(burst.width(), burst.height());
  const auto src = ones.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double p_hat = static_cast<double>(src[i]) / t_count;
    dst[i] = binary_rate_to_flux(p_hat, t_count) / alpha;
  }
  return clamp_to_scene(std::move(out));
}

RealGrid denoise_nlm(const RealGrid& image, int patch_radius, int search_radius,
                     double filter_strength) {
  detail::check_nlm_args(patch_radius, search_radius, filter_strength);
  if (filter_strength == 0.0) return image;

  const int w = image.width();
  const int h = image.height();
  const int pad = patch_radius + search_radius;
  const int pw = w + 2 * pad;
  const int ph = h + 2 * pad;
  std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    const int sy = std::clamp(y - pad, 0, h - 1);
    for (int x = 0; x < pw; ++x) {
      padded[static_cast<std::size_t>(y) * pw + x] = image(std::clamp(x - pad, 0, w - 1), sy);
    }
  }
  auto at = [&](int x, int y) { return padded[static_cast<std::size_t>(y + pad) * pw + x + pad]; };

  const auto [lo, hi] = std::minmax_element(image.values().begin(), image.values().end());
  const double vmin = *lo;
  const double vmax = *hi;
  const double patch_area = (2.0 * patch_radius + 1.0) * (2.0 * patch_radius + 1.0);
  const double h2 = filter_strength * filter_strength;

  RealGrid out(w, h);
#pragma omp parallel for schedule(dynamic, 4)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double num = 0.0;
      double den = 0.0;
      const int y_lo = std::max(0, y - search_radius);
      const int y_hi = std::min(h - 1, y + search_radius);
      const int x_lo = std::max(0, x - search_radius);
      const int x_hi = std::min(w - 1, x + search_radius);
      for (int qy = y_lo; qy <= y_hi; ++qy) {
        for (int qx = x_lo; qx <= x_hi; ++qx) {
          double d2 = 0.0;
          for (int ky = -patch_radius; ky <= patch_radius; ++ky) {
            for (int kx = -patch_radius; kx <= patch_radius; ++kx) {
              const double diff = at(x + kx, y + ky) - at(qx + kx, qy + ky);
              d2 += diff * diff;
            }
          }
          const double weight = detail::nlm_weight(d2, patch_area, h2);
          num += weight * image(qx, qy);
          den += weight;
        }
      }
      out(x, y) = std::clamp(num / den, vmin, vmax);
    }
  }
  return out;
}

SceneImage denoise_nlm(const SceneImage& image, int patch_radius, int search_radius,
                       double filter_strength) {
  return SceneImage(denoise_nlm(image.grid(), patch_radius, search_radius, filter_strength));
}

RealGrid apply_kernel_field(std::span<const RealGrid> frames, const KernelField& field) {
  check_kernel_inputs(frames, field);
  const KernelField weights =
      field.mode() == KernelNormalization::kNone ? field : field.normalized();
  const int w = field.width();
  const int h = field.height();
  const int k = field.kernel_size();
  const int r = k / 2;
  const int t_count = field.frames();

  RealGrid out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto wp = weights.pixel_weights(x, y);
      double acc = 0.0;
      std::size_t tap = 0;
      for (int t = 0; t < t_count; ++t) {
        const RealGrid& frame = frames[t];
        for (int ky = 0; ky < k; ++ky) {
          const int sy = y + ky - r;
          for (int kx = 0; kx < k; ++kx, ++tap) {
            const int sx = x + kx - r;
            if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;
            acc += wp[tap] * frame(sx, sy);
          }
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

std::vector<RealGrid> normalized_frames(const Burst& burst) {
  const double alpha = burst.config().gain_alpha;
  const double dark = burst.config().dark_offset();
  std::vector<RealGrid> frames;
  frames.reserve(static_cast<std::size_t>(burst.frame_count()));
  for (int t = 0; t < burst.frame_count(); ++t) {
    RealGrid g(burst.width(), burst.height());
    const auto src = burst.frame(t);
    auto dst = g.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / alpha - dark;
    frames.push_back(std::move(g));
  }
  return frames;
}

SceneImage reconstruct_pipeline(const Burst& burst, const ReconstructionMethod& method) {
  switch (method.kind) {
    case MethodKind::kBurstAverage:
      return average_burst(burst);

    case MethodKind::kAverageThenDenoise: {
      const NlmParams p = method.nlm.value_or(default_flux_nlm());
      return denoise_nlm(average_burst(burst), p.patch_radius, p.search_radius, p.filter_strength);
    }

    case MethodKind::kAnscombeDenoise: {
      require_binary(burst, "anscombe-denoise");
      const NlmParams p = method.nlm.value_or(default_anscombe_nlm());
      const int t_count = burst.frame_count();
      const RealGrid stabilized = anscombe_binomial(sum_binary_frames(burst), t_count);
      RealGrid flux =
          denoise_nlm(stabilized, p.patch_radius, p.search_radius, p.filter_strength);
      const double alpha = burst.config().gain_alpha;
      for (double& v : flux.values()) {
        const double ones = inverse_anscombe_binomial(v, t_count);
        v = binary_rate_to_flux(ones / t_count, t_count) / alpha;
      }
      return clamp_to_scene(std::move(flux));
    }

    case MethodKind::kMleBinary:
      return mle_invert_binary(burst);

    case MethodKind::kKernelMerge: {
      require(method.field.has_value(), ErrorCode::kInvalidArgument,
              "kernel-merge requires a kernel field");
      const auto frames = normalized_frames(burst);
      return clamp_to_scene(apply_kernel_field(frames, *method.field));
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown reconstruction method");
}

}  // namespace qis
