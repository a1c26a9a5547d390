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

#include "qis/reference.hpp"

#include <algorithm>

#include "nlm_kernel.hpp"
#include "qis/sensor.hpp"

namespace qis::reference {

Burst simulate_burst(std::span<const SceneImage> frames, const SensorConfig& config, Seed seed) {
  config.validate();
  require(static_cast<int>(frames.size()) == config.frames_per_burst, ErrorCode::kInvalidArgument,
          "frame count does not match frames_per_burst");
  const int w = frames.front().width();
  const int h = frames.front().height();
  std::vector<std::uint8_t> samples;
  samples.reserve(static_cast<std::size_t>(w) * h * frames.size());
  for (int t = 0; t < config.frames_per_burst; ++t) {
    require(frames[t].width() == w && frames[t].height() == h, ErrorCode::kDimensionMismatch,
            "all frames must share the same dimensions");
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        samples.push_back(sample_pixel(frames[t](x, y), config, seed, t, x, y));
      }
    }
  }
  return Burst(config, seed, w, h, config.frames_per_burst, std::move(samples));
}

RealGrid denoise_nlm(const RealGrid& image, int patch_radius, int search_radius,
                     double filter_strength) {
  detail::check_nlm_args(patch_radius, search_radius, filter_strength);
  if (filter_strength == 0.0) return image;
  const int w = image.width();
  const int h = image.height();
  auto pixel = [&](int x, int y) {
    return image(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  const double patch_area = (2.0 * patch_radius + 1.0) * (2.0 * patch_radius + 1.0);
  const double h2 = filter_strength * filter_strength;
  const auto [lo, hi] = std::minmax_element(image.values().begin(), image.values().end());

  RealGrid out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double num = 0.0;
      double den = 0.0;
      for (int qy = y - search_radius; qy <= y + search_radius; ++qy) {
        for (int qx = x - search_radius; qx <= x + search_radius; ++qx) {
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          double d2 = 0.0;
          for (int ky = -patch_radius; ky <= patch_radius; ++ky) {
            for (int kx = -patch_radius; kx <= patch_radius; ++kx) {
              const double diff = pixel(x + kx, y + ky) - pixel(qx + kx, qy + ky);
              d2 += diff * diff;
            }
          }
          const double weight = detail::nlm_weight(d2, patch_area, h2);
          num += weight * image(qx, qy);
          den += weight;
        }
      }
      out(x, y) = std::clamp(num / den, *lo, *hi);
    }
  }
  return out;
}

RealGrid apply_kernel_field(std::span<const RealGrid> frames, const KernelField& field) {
  require(static_cast<int>(frames.size()) == field.frames(), ErrorCode::kDimensionMismatch,
          "kernel field frame count does not match the frame stack");
  const KernelField weights = field.normalized();
  const int w = field.width();
  const int h = field.height();
  const int k = field.kernel_size();
  const int r = k / 2;
  RealGrid out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto wp = weights.pixel_weights(x, y);
      double acc = 0.0;
      for (int t = 0; t < field.frames(); ++t) {
        require(frames[t].width() == w && frames[t].height() == h, ErrorCode::kDimensionMismatch,
                "kernel field dimensions do not match the frames");
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const int sx = x + kx - r;
            const int sy = y + ky - r;
            if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;  // zero padding
            acc += wp[(static_cast<std::size_t>(t) * k + ky) * k + kx] * frames[t](sx, sy);
          }
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace qis::reference
