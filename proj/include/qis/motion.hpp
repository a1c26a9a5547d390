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

#include <optional>
#include <vector>

#include "qis/types.hpp"

namespace qis {

enum class TrajectoryModel { kLinear, kSmoothRandom };

struct MagnitudeRange {
  double lo = 7.0;
  double hi = 35.0;
};

/// Per-frame jitter of the smooth-random model, in pixels.
inline constexpr double kTrajectoryJitterSigma = 0.5;

/// d_t = (t / (T - 1)) * d_total with |d_total| uniform in [lo, hi] and a
/// uniformly random direction. kSmoothRandom adds Gaussian jitter to the
/// interior frames only, so d_0 = 0 and the endpoint stays exact.
MotionTrajectory sample_global_trajectory(Seed seed, MagnitudeRange range = {},
                                          int frames = 8,
                                          TrajectoryModel model = TrajectoryModel::kLinear);

MotionTrajectory linear_trajectory(Displacement total, int frames);

/// Frame t samples the scene at p - d_t with bilinear interpolation, edges
/// clamped. With a local spec the mask follows translation plus rotation about
/// its centroid, composed on top of the global displacement, and is
/// composited over the globally moved background.
std::vector<SceneImage> warp_sequence(const SceneImage& scene, const MotionTrajectory& trajectory,
                                      const std::optional<LocalMotionSpec>& local_spec = std::nullopt);

struct CropWindow {
  int x0 = 0;
  int y0 = 0;
  int size = 0;
};

/// Top-left corner uniform over positions that keep `margin` pixels of
/// source around the patch.
CropWindow sample_crop_window(int source_width, int source_height, int size, int margin, Seed seed);

SceneImage crop(const SceneImage& scene, int x0, int y0, int width, int height);
Grid<std::uint8_t> crop(const Grid<std::uint8_t>& mask, int x0, int y0, int width, int height);

SceneImage crop_patch(const SceneImage& scene, int size, int margin, Seed seed);

/// Builds the clean-dynamic, noisy-static and noisy-dynamic views. x_noise
/// uses config with frames_per_burst = 1 and x_qis uses config as given; the
/// two noise streams are keyed by distinct seeds derived from `seed`.
Triplet make_triplet(const SceneImage& scene, const SensorConfig& config, Seed seed,
                     const MotionTrajectory& trajectory,
                     const std::optional<LocalMotionSpec>& local_spec = std::nullopt);

Seed static_view_seed(Seed seed);
Seed dynamic_view_seed(Seed seed);

/// Removes `border` pixels on each side of every member. Used to cut the
/// guarded context region back down to the training patch.
Triplet center_crop(const Triplet& triplet, int border);

}  // namespace qis
