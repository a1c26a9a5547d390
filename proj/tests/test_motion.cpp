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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qis/motion.hpp"
#include "qis/scenes.hpp"
#include "qis/sensor.hpp"

using namespace qis;

namespace {

SceneImage ramp_scene(int w, int h) {
  RealGrid g(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g(x, y) = std::fmod(0.037 * x + 0.011 * y * y, 1.0);
  return SceneImage(std::move(g));
}

MotionTrajectory two_frame(double dx, double dy) {
  return MotionTrajectory{{{0.0, 0.0}, {dx, dy}}};
}

}  // namespace

TEST_CASE("linear trajectory of 28 px over 8 frames moves 4 px per frame") {
  const auto traj = linear_trajectory({28.0, 0.0}, 8);
  REQUIRE(traj.frame_count() == 8);
  for (int t = 0; t < 8; ++t) {
    CHECK(traj.displacements[t].dx == 4.0 * t);
    CHECK(traj.displacements[t].dy == 0.0);
  }
}

TEST_CASE("degenerate magnitude range gives a static trajectory") {
  for (auto model : {TrajectoryModel::kLinear, TrajectoryModel::kSmoothRandom}) {
    const auto traj = sample_global_trajectory(5, {0.0, 0.0}, 8, model);
    CHECK(traj == MotionTrajectory::zero(8));
  }
}

TEST_CASE("sampled trajectories land in the magnitude range") {
  for (auto model : {TrajectoryModel::kLinear, TrajectoryModel::kSmoothRandom}) {
    double lo = 1e9, hi = 0.0;
    for (Seed s = 0; s < 10000; ++s) {
      const auto traj = sample_global_trajectory(s, {}, 8, model);
      REQUIRE(traj.displacements.front() == Displacement{});
      const auto end = traj.displacements.back();
      const double m = std::hypot(end.dx, end.dy);
      REQUIRE(m >= 7.0 - 1e-9);
      REQUIRE(m <= 35.0 + 1e-9);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    CHECK(lo < 8.0);
    CHECK(hi > 34.0);
  }
}

TEST_CASE("smooth-random perturbs interior frames only") {
  const auto lin = sample_global_trajectory(31, {10, 20}, 8, TrajectoryModel::kLinear);
  const auto smooth = sample_global_trajectory(31, {10, 20}, 8, TrajectoryModel::kSmoothRandom);
  CHECK(lin.displacements.back() == smooth.displacements.back());
  double dev = 0.0;
  for (int t = 1; t < 7; ++t) {
    dev = std::max(dev, std::abs(lin.displacements[t].dx - smooth.displacements[t].dx));
  }
  CHECK(dev > 0.0);
  CHECK(dev < 5 * kTrajectoryJitterSigma);
}

TEST_CASE("trajectory argument errors") {
  CHECK_THROWS_AS((void)sample_global_trajectory(1, {5, 3}, 8), Error);
  CHECK_THROWS_AS((void)sample_global_trajectory(1, {3, 5}, 1), Error);
}

TEST_CASE("zero trajectory warps to identical frames") {
  const SceneImage scene = ramp_scene(20, 17);
  const auto frames = warp_sequence(scene, MotionTrajectory::zero(8));
  REQUIRE(frames.size() == 8);
  for (const auto& f : frames) CHECK(f == scene);
}

TEST_CASE("integer displacement shifts the interior by whole columns") {
  const SceneImage scene = ramp_scene(30, 20);
  const auto frames = warp_sequence(scene, two_frame(3.0, 0.0));
  for (int y = 0; y < 20; ++y)
    for (int x = 3; x < 30; ++x) REQUIRE(frames[1](x, y) == scene(x - 3, y));
}

TEST_CASE("two integer translations compose on the interior") {
  const SceneImage scene = ramp_scene(40, 30);
  const auto a = warp_sequence(warp_sequence(scene, two_frame(2.0, 1.0))[1], two_frame(3.0, 2.0))[1];
  const auto b = warp_sequence(scene, two_frame(5.0, 3.0))[1];
  for (int y = 3; y < 30; ++y)
    for (int x = 5; x < 40; ++x) REQUIRE(a(x, y) == b(x, y));
}

TEST_CASE("bilinear warps stay within the scene range") {
  const SceneImage scene = textured_scene(48, 48, 9);
  const auto [lo, hi] = std::minmax_element(scene.values().begin(), scene.values().end());
  for (Seed s = 0; s < 20; ++s) {
    const auto traj = sample_global_trajectory(s, {0.5, 12.0}, 8, TrajectoryModel::kSmoothRandom);
    for (const auto& f : warp_sequence(scene, traj)) {
      for (double v : f.values()) {
        REQUIRE(v >= *lo);
        REQUIRE(v <= *hi);
      }
    }
  }
}

TEST_CASE("rotation about the mask centroid fixes the centroid pixel") {
  RealGrid g(33, 33, 0.0);
  g(16, 16) = 1.0;
  const SceneImage delta(std::move(g));
  LocalMotionSpec spec{disc_mask(33, 33, 16, 16, 6), {{}, {0.0, 0.0, 15.0}}};
  CHECK(spec.centroid() == Displacement{16.0, 16.0});
  const auto frames = warp_sequence(delta, MotionTrajectory::zero(2), spec);
  CHECK(frames[1](16, 16) == 1.0);
  CHECK(frames[0] == delta);
}

TEST_CASE("local motion moves the foreground and leaves the background") {
  const SceneImage scene = ramp_scene(48, 48);
  LocalMotionSpec spec{disc_mask(48, 48, 20, 20, 5), {{}, {4.0, 0.0, 0.0}}};
  const auto frames = warp_sequence(scene, MotionTrajectory::zero(2), spec);
  // Foreground translated by 4 columns.
  CHECK(frames[1](24, 20) == scene(20, 20));
  CHECK(frames[1](27, 22) == scene(23, 22));
  // Far background untouched.
  for (int y = 35; y < 48; ++y)
    for (int x = 0; x < 48; ++x) REQUIRE(frames[1](x, y) == scene(x, y));
}

TEST_CASE("local spec validation") {
  LocalMotionSpec bad_angle{disc_mask(8, 8, 4, 4, 2), {{}, {0, 0, 16.0}}};
  CHECK_THROWS_AS(bad_angle.validate(), Error);
  LocalMotionSpec empty_mask{Grid<std::uint8_t>(8, 8), {{}}};
  CHECK_THROWS_AS(empty_mask.validate(), Error);
  LocalMotionSpec moved_origin{disc_mask(8, 8, 4, 4, 2), {{1, 0, 0}}};
  CHECK_THROWS_AS(moved_origin.validate(), Error);
  LocalMotionSpec ok{disc_mask(8, 8, 4, 4, 2), {{}, {0, 0, 3}}};
  CHECK_THROWS_AS((void)warp_sequence(SceneImage(8, 8, 0.5), MotionTrajectory::zero(3), ok), Error);
}

TEST_CASE("crop_patch is deterministic and keeps its margin inside the source") {
  const SceneImage src = textured_scene(200, 150, 4);
  CHECK(crop_patch(src, 64, 35, 8) == crop_patch(src, 64, 35, 8));
  for (Seed s = 0; s < 500; ++s) {
    const auto win = sample_crop_window(200, 150, 64, 35, s);
    // Any displacement up to the margin samples inside the source.
    REQUIRE(win.x0 - 35 >= 0);
    REQUIRE(win.y0 - 35 >= 0);
    REQUIRE(win.x0 + 64 - 1 + 35 <= 199);
    REQUIRE(win.y0 + 64 - 1 + 35 <= 149);
  }
  const auto patch = crop_patch(src, 64, 35, 3);
  CHECK(patch.width() == 64);
  CHECK(patch.height() == 64);
  CHECK_THROWS_AS((void)crop_patch(SceneImage(100, 100, 0.5), 64, 35, 1), Error);
  CHECK_NOTHROW((void)crop_patch(SceneImage(134, 134, 0.5), 64, 35, 1));
}

TEST_CASE("make_triplet contract") {
  const SceneImage scene = textured_scene(64, 64, 21);
  SensorConfig c;
  c.gain_alpha = calibrate_gain(scene, 2.0);
  const auto traj = linear_trajectory({28.0, 0.0}, 8);
  const Triplet a = make_triplet(scene, c, 100, traj);
  const Triplet b = make_triplet(scene, c, 200, traj);

  CHECK(a.x_motion[0] == a.x_true);
  CHECK(a.x_true == scene);
  CHECK(a.x_motion == b.x_motion);
  CHECK_FALSE(a.x_qis == b.x_qis);
  CHECK(a.x_noise.frame_count() == 1);
  CHECK(a.x_qis.frame_count() == 8);
  SensorConfig static_config = c;
  static_config.frames_per_burst = 1;
  CHECK(a.x_noise.config() == static_config);
  CHECK(a.x_qis.config() == c);
  CHECK(a.x_qis.trajectory() == traj);
  CHECK(static_view_seed(100) != dynamic_view_seed(100));
}

TEST_CASE("with zero motion the noisy views share one distribution") {
  const SceneImage scene(320, 320, 0.5);
  SensorConfig c;
  c.gain_alpha = 4.0;
  const Triplet t = make_triplet(scene, c, 9, MotionTrajectory::zero(8));
  auto stats = [](std::span<const std::uint8_t> v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double s = 0.0;
    for (auto x : v) s += (x - m) * (x - m);
    return std::pair{m, s / (n - 1)};
  };
  const auto [mn, vn] = stats(t.x_noise.frame(0));
  for (int f = 0; f < 8; ++f) {
    const auto [mq, vq] = stats(t.x_qis.frame(f));
    const double n = 320.0 * 320.0;
    const double z = (mq - mn) / std::sqrt(vn / n + vq / n);
    CHECK(std::abs(z) < 4.0);
  }
  // The two views are different noise draws.
  CHECK_FALSE(std::equal(t.x_noise.frame(0).begin(), t.x_noise.frame(0).end(),
                         t.x_qis.frame(0).begin()));
}

TEST_CASE("center_crop trims every member") {
  const SceneImage scene = textured_scene(40, 40, 2);
  SensorConfig c;
  c.gain_alpha = 2.0;
  const auto full = make_triplet(scene, c, 1, linear_trajectory({6, 0}, 8));
  const auto cut = center_crop(full, 5);
  CHECK(cut.x_true.width() == 30);
  CHECK(cut.x_qis.width() == 30);
  CHECK(cut.x_noise.height() == 30);
  CHECK(cut.x_motion[3](0, 0) == full.x_motion[3](5, 5));
  CHECK(cut.x_qis(2, 0, 0) == full.x_qis(2, 5, 5));
  CHECK(cut.x_motion[0] == cut.x_true);
}
