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

#include "qis/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qis/rng.hpp"
#include "qis/sensor.hpp"

namespace qis {
namespace {

constexpr std::uint64_t kStaticViewTag = 0x5354415449435649ull;   // "STATICVI"
constexpr std::uint64_t kDynamicViewTag = 0x44594E414D494356ull;  // "DYNAMICV"

// Bilinear sample with edge clamping. std::lerp keeps the result inside
// [min, max] of the four neighbours and is exact at zero fraction.
double sample_bilinear(const SceneImage& scene, double fx, double fy) {
  const int w = scene.width();
  const int h = scene.height();
  fx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = fx - x0;
  const double ay = fy - y0;
  const double top = std::lerp(scene(x0, y0), scene(x1, y0), ax);
  const double bottom = std::lerp(scene(x0, y1), scene(x1, y1), ax);
  return std::lerp(top, bottom, ay);
}

bool mask_at(const Grid<std::uint8_t>& mask, double fx, double fy) {
  const auto x = static_cast<long>(std::lround(fx));
  const auto y = static_cast<long>(std::lround(fy));
  if (x < 0 || y < 0 || x >= mask.width() || y >= mask.height()) return false;
  return mask(static_cast<int>(x), static_cast<int>(y)) != 0;
}

SceneImage warp_global(const SceneImage& scene, Displacement d) {
  if (d == Displacement{}) return scene;
  const int w = scene.width();
  const int h = scene.height();
  RealGrid out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out(x, y) = sample_bilinear(scene, x - d.dx, y - d.dy);
  }
  return SceneImage(std::move(out));
}

SceneImage warp_local(const SceneImage& scene, Displacement d, const LocalMotionSpec& spec,
                      const RigidTransform& local, Displacement centroid) {
  if (d == Displacement{} && local == RigidTransform{}) return scene;
  const int w = scene.width();
  const int h = scene.height();
  const double theta = local.angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  RealGrid out(w, h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Inverse of p = R(theta) (q - centroid) + centroid + local + d.
      const double rx = x - d.dx - local.dx - centroid.dx;
      const double ry = y - d.dy - local.dy - centroid.dy;
      const double qx = c * rx + s * ry + centroid.dx;
      const double qy = -s * rx + c * ry + centroid.dy;
      out(x, y) = mask_at(spec.mask, qx, qy) ? sample_bilinear(scene, qx, qy)
                                             : sample_bilinear(scene, x - d.dx, y - d.dy);
    }
  }
  return SceneImage(std::move(out));
}

Burst crop_burst(const Burst& b, int border) {
  const int w = b.width() - 2 * border;
  const int h = b.height() - 2 * border;
  std::vector<std::uint8_t> samples;
  samples.reserve(static_cast<std::size_t>(w) * h * b.frame_count());
  for (int t = 0; t < b.frame_count(); ++t) {
    for (int y = border; y < border + h; ++y) {
      for (int x = border; x < border + w; ++x) samples.push_back(b(t, x, y));
    }
  }
  return Burst(b.config(), b.seed(), w, h, b.frame_count(), std::move(samples), b.trajectory());
}

}  // namespace

MotionTrajectory linear_trajectory(Displacement total, int frames) {
  require(frames >= 1, ErrorCode::kInvalidArgument, "frames must be >= 1");
  MotionTrajectory traj;
  traj.displacements.resize(static_cast<std::size_t>(frames));
  if (frames == 1) return traj;
  const double span = frames - 1;
  for (int t = 1; t < frames; ++t) {
    traj.displacements[t] = {total.dx * t / span, total.dy * t / span};
  }
  return traj;
}

MotionTrajectory sample_global_trajectory(Seed seed, MagnitudeRange range, int frames,
                                          TrajectoryModel model) {
  require(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo >= 0.0,
          ErrorCode::kInvalidArgument, "magnitude range must be finite and non-negative");
  require(range.lo <= range.hi, ErrorCode::kInvalidArgument, "magnitude range has lo > hi");
  require(frames >= 2, ErrorCode::kInvalidArgument, "trajectory needs at least 2 frames");

  rng::Stream draw(seed, rng::DrawKind::kTrajectory, 0, 0, 0);
  const double magnitude = draw.uniform(range.lo, range.hi);
  const double direction = 2.0 * std::numbers::pi * draw.uniform();
  if (magnitude == 0.0) return MotionTrajectory::zero(frames);

  MotionTrajectory traj =
      linear_trajectory({magnitude * std::cos(direction), magnitude * std::sin(direction)}, frames);
  if (model == TrajectoryModel::kSmoothRandom) {
    for (int t = 1; t < frames - 1; ++t) {
      rng::Stream jitter(seed, rng::DrawKind::kJitter, static_cast<std::uint32_t>(t), 0, 0);
      traj.displacements[t].dx += kTrajectoryJitterSigma * jitter.normal();
      traj.displacements[t].dy += kTrajectoryJitterSigma * jitter.normal();
    }
  }
  return traj;
}

std::vector<SceneImage> warp_sequence(const SceneImage& scene, const MotionTrajectory& trajectory,
                                      const std::optional<LocalMotionSpec>& local_spec) {
  trajectory.validate();
  std::optional<Displacement> centroid;
  if (local_spec) {
    local_spec->validate();
    require(local_spec->mask.width() == scene.width() && local_spec->mask.height() == scene.height(),
            ErrorCode::kDimensionMismatch, "local motion mask does not match scene dimensions");
    require(local_spec->transforms.size() == trajectory.frame_count(), ErrorCode::kInvalidArgument,
            "local transforms and trajectory disagree on frame count");
    centroid = local_spec->centroid();
  }

  std::vector<SceneImage> frames;
  frames.reserve(trajectory.frame_count());
  for (std::size_t t = 0; t < trajectory.frame_count(); ++t) {
    const Displacement d = trajectory.displacements[t];
    frames.push_back(local_spec ? warp_local(scene, d, *local_spec, local_spec->transforms[t], *centroid)
                                : warp_global(scene, d));
  }
  return frames;
}

CropWindow sample_crop_window(int source_width, int source_height, int size, int margin, Seed seed) {
  require(size >= 1 && margin >= 0, ErrorCode::kInvalidArgument, "crop size must be >= 1, margin >= 0");
  require(source_width >= size + 2 * margin && source_height >= size + 2 * margin,
          ErrorCode::kInvalidArgument, "source too small for crop size plus margin");
  rng::Stream draw(seed, rng::DrawKind::kCrop, 0, 0, 0);
  const int span_x = source_width - size - 2 * margin + 1;
  const int span_y = source_height - size - 2 * margin + 1;
  const int ox = std::min(static_cast<int>(draw.uniform() * span_x), span_x - 1);
  const int oy = std::min(static_cast<int>(draw.uniform() * span_y), span_y - 1);
  return {margin + ox, margin + oy, size};
}

SceneImage crop(const SceneImage& scene, int x0, int y0, int width, int height) {
  require(x0 >= 0 && y0 >= 0 && width >= 1 && height >= 1 && x0 + width <= scene.width() &&
              y0 + height <= scene.height(),
          ErrorCode::kInvalidArgument, "crop window outside the source");
  RealGrid out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out(x, y) = scene(x0 + x, y0 + y);
  }
  return SceneImage(std::move(out));
}

Grid<std::uint8_t> crop(const Grid<std::uint8_t>& mask, int x0, int y0, int width, int height) {
  require(x0 >= 0 && y0 >= 0 && width >= 1 && height >= 1 && x0 + width <= mask.width() &&
              y0 + height <= mask.height(),
          ErrorCode::kInvalidArgument, "crop window outside the mask");
  Grid<std::uint8_t> out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out(x, y) = mask(x0 + x, y0 + y);
  }
  return out;
}

SceneImage crop_patch(const SceneImage& scene, int size, int margin, Seed seed) {
  const CropWindow win = sample_crop_window(scene.width(), scene.height(), size, margin, seed);
  return crop(scene, win.x0, win.y0, size, size);
}

Seed static_view_seed(Seed seed) { return rng::derive_seed(seed, kStaticViewTag); }
Seed dynamic_view_seed(Seed seed) { return rng::derive_seed(seed, kDynamicViewTag); }

Triplet make_triplet(const SceneImage& scene, const SensorConfig& config, Seed seed,
                     const MotionTrajectory& trajectory,
                     const std::optional<LocalMotionSpec>& local_spec) {
  config.validate();
  require(static_cast<int>(trajectory.frame_count()) == config.frames_per_burst,
          ErrorCode::kInvalidArgument, "trajectory length must equal frames_per_burst");

  auto x_motion = warp_sequence(scene, trajectory, local_spec);

  SensorConfig static_config = config;
  static_config.frames_per_burst = 1;
  Burst x_noise = simulate_burst(scene, static_config, static_view_seed(seed));

  const Burst dynamic = simulate_burst(x_motion, config, dynamic_view_seed(seed));
  Burst x_qis(dynamic.config(), dynamic.seed(), dynamic.width(), dynamic.height(),
              dynamic.frame_count(),
              std::vector<std::uint8_t>(dynamic.samples().begin(), dynamic.samples().end()),
              trajectory);

  return Triplet{scene, std::move(x_motion), std::move(x_noise), std::move(x_qis), trajectory,
                 local_spec};
}

Triplet center_crop(const Triplet& triplet, int border) {
  require(border >= 0, ErrorCode::kInvalidArgument, "border must be >= 0");
  if (border == 0) return triplet;
  const int w = triplet.x_true.width() - 2 * border;
  const int h = triplet.x_true.height() - 2 * border;
  require(w >= 1 && h >= 1, ErrorCode::kInvalidArgument, "border larger than the triplet");

  std::vector<SceneImage> motion;
  motion.reserve(triplet.x_motion.size());
  for (const auto& f : triplet.x_motion) motion.push_back(crop(f, border, border, w, h));
  std::optional<LocalMotionSpec> local;
  if (triplet.local_spec) {
    local = LocalMotionSpec{crop(triplet.local_spec->mask, border, border, w, h),
                            triplet.local_spec->transforms};
  }
  return Triplet{crop(triplet.x_true, border, border, w, h), std::move(motion),
                 crop_burst(triplet.x_noise, border), crop_burst(triplet.x_qis, border),
                 triplet.trajectory, std::move(local)};
}

}  // namespace qis
