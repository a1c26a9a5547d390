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

#include "qis/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qis/rng.hpp"

namespace qis {

SceneImage textured_scene(int width, int height, Seed seed) {
  rng::Stream draw(seed, rng::DrawKind::kScene, 0, 0, 0);
  const double scale = std::max(width, height);

  const double freq = draw.uniform(2.0, 6.0) * 2.0 * std::numbers::pi / scale;
  const double orient = draw.uniform(0.0, std::numbers::pi);
  const double gx = freq * std::cos(orient);
  const double gy = freq * std::sin(orient);
  const double grating_amp = draw.uniform(0.08, 0.2);

  struct Blob {
    double cx, cy, radius, amp;
  };
  std::vector<Blob> blobs(6);
  for (auto& b : blobs) {
    b = {draw.uniform(0.0, width), draw.uniform(0.0, height), draw.uniform(0.05, 0.2) * scale,
         draw.uniform(-0.35, 0.35)};
  }
  struct Bar {
    int x0, x1;
    double amp;
  };
  std::vector<Bar> bars(3);
  for (auto& b : bars) {
    const int x0 = static_cast<int>(draw.uniform(0.0, width));
    b = {x0, x0 + 1 + static_cast<int>(draw.uniform(0.02, 0.1) * width), draw.uniform(-0.25, 0.25)};
  }

  RealGrid g(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.5 + grating_amp * std::sin(gx * x + gy * y);
      for (const auto& b : blobs) {
        const double r2 = ((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) / (b.radius * b.radius);
        v += b.amp * std::exp(-r2);
      }
      for (const auto& b : bars) {
        if (x >= b.x0 && x < b.x1) v += b.amp;
      }
      g(x, y) = std::clamp(v, 0.05, 0.95);
    }
  }
  return SceneImage(std::move(g));
}

Grid<std::uint8_t> disc_mask(int width, int height, double cx, double cy, double radius) {
  Grid<std::uint8_t> mask(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) mask(x, y) = 1;
    }
  }
  return mask;
}

}  // namespace qis
