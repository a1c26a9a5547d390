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

#include <omp.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qis/eval.hpp"
#include "qis/reconstruct.hpp"
#include "qis/reference.hpp"
#include "qis/scenes.hpp"
#include "qis/sensor.hpp"

using namespace qis;

namespace {

SensorConfig binary_config(double alpha, int frames = 8) {
  SensorConfig c;
  c.gain_alpha = alpha;
  c.adc_bits = 1;
  c.frames_per_burst = frames;
  return c;
}

Burst constant_burst(const SensorConfig& c, int w, int h, std::uint8_t value) {
  return Burst(c, 0, w, h, c.frames_per_burst,
               std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * c.frames_per_burst,
                                         value));
}

RealGrid noisy_grid(int w, int h, double level, double sigma, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, sigma);
  RealGrid g(w, h);
  for (double& v : g.values()) v = level + n(gen);
  return g;
}

double grid_mse(const RealGrid& a, const RealGrid& b) { return mse(a, b, 0); }

}  // namespace

TEST_CASE("burst-average of an all-zero burst is zero") {
  SensorConfig c;
  const auto out = average_burst(constant_burst(c, 6, 5, 0));
  for (double v : out.values()) CHECK(v == 0.0);
}

TEST_CASE("burst-average recovers a flat scene at 2 ppp") {
  SensorConfig c;
  c.gain_alpha = 4.0;
  const SceneImage scene(300, 300, 0.5);
  const auto est = average_burst(simulate_burst(scene, c, 1));
  CHECK(est.mean() == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("burst-average divides the mean code by alpha and removes dark") {
  SensorConfig c;
  c.gain_alpha = 5.0;
  c.frames_per_burst = 4;
  std::vector<std::uint8_t> s = {1, 3, 0, 2, 2, 7, 4, 1};  // 2x1 pixels, 4 frames
  const Burst b(c, 0, 2, 1, 4, s);
  const auto est = average_burst(b);
  CHECK(est(0, 0) == doctest::Approx((1 + 0 + 2 + 4) / 4.0 / 5.0 - c.dark_offset()));
  CHECK(est(1, 0) == doctest::Approx((3 + 2 + 7 + 1) / 4.0 / 5.0 - c.dark_offset()));
}

TEST_CASE("averaging more frames lowers the error") {
  SensorConfig one;
  one.gain_alpha = 4.0;
  one.frames_per_burst = 1;
  SensorConfig eight = one;
  eight.frames_per_burst = 8;
  const SceneImage scene(256, 256, 0.5);
  const double m1 = mse(average_burst(simulate_burst(scene, one, 4)).grid(), scene.grid(), 0);
  const double m8 = mse(average_burst(simulate_burst(scene, eight, 4)).grid(), scene.grid(), 0);
  CHECK(m1 / m8 > 4.0);
}

TEST_CASE("binomial Anscombe transform") {
  // 2 sqrt(8.5) asin(sqrt(0.375 / 8.75)), evaluated independently.
  CHECK(anscombe_binomial(0.0, 8) == doctest::Approx(1.2159146792354554).epsilon(1e-14));
  double prev = -1.0;
  for (int s = 0; s <= 8; ++s) {
    const double z = anscombe_binomial(s, 8);
    CHECK(z > prev);
    CHECK(inverse_anscombe_binomial(z, 8) == doctest::Approx(s).epsilon(1e-12));
    prev = z;
  }
  CHECK_THROWS_AS((void)anscombe_binomial(9.0, 8), Error);
}

TEST_CASE("Anscombe output variance matches the exact binomial oracle") {
  for (double lambda : {0.5, 1.0, 1.5}) {
    const SensorConfig c = [&] {
      auto k = binary_config(lambda);
      k.dark_current_rate = 0.0;
      k.read_noise_sigma = 0.0;
      return k;
    }();
    const Burst b = simulate_burst(SceneImage(320, 320, 1.0), c, 17);
    const RealGrid z = anscombe_binomial(sum_binary_frames(b), 8);
    const auto v = z.values();
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    const double oracle = testing::anscombe_binomial_variance(8, 1.0 - std::exp(-lambda));
    INFO("lambda=" << lambda);
    CHECK(s / (n - 1) == doctest::Approx(oracle).epsilon(0.03));
  }
}

TEST_CASE("binary rate inversion") {
  CHECK(binary_rate_to_flux(0.0, 8) == 0.0);
  CHECK(binary_rate_to_flux(1.0 - std::exp(-1.0), 1000) == doctest::Approx(1.0).epsilon(1e-12));
  // Saturated pixels are clamped to 1 - 1/(2T).
  CHECK(binary_rate_to_flux(1.0, 8) == doctest::Approx(-std::log(1.0 / 16.0)).epsilon(1e-12));
}

TEST_CASE("mle-binary on constant bursts") {
  const auto c = binary_config(4.0);
  const auto ones = mle_invert_binary(constant_burst(c, 3, 3, 1));
  CHECK(ones(1, 1) == doctest::Approx(-std::log(1.0 / 16.0) / 4.0).epsilon(1e-12));
  const auto zeros = mle_invert_binary(constant_burst(c, 3, 3, 0));
  CHECK(zeros(2, 2) == 0.0);

  SensorConfig three;
  try {
    (void)mle_invert_binary(constant_burst(three, 2, 2, 1));
    FAIL("expected incompatible method");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIncompatibleMethod);
  }
}

TEST_CASE("mle-binary is unbiased for long bursts") {
  auto c = binary_config(2.0, 400);
  c.dark_current_rate = 0.0;
  const auto est = mle_invert_binary(simulate_burst(SceneImage(64, 64, 0.5), c, 8));
  CHECK(est.mean() == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("NLM fixed points and parameters") {
  const RealGrid flat(20, 20, 0.37);
  CHECK(denoise_nlm(flat, 2, 5, 0.3) == flat);
  const RealGrid noisy = noisy_grid(20, 20, 0.5, 0.1, 1);
  CHECK(denoise_nlm(noisy, 1, 3, 0.0) == noisy);
  CHECK_THROWS_AS((void)denoise_nlm(noisy, 0, 3, 0.1), Error);
  CHECK_THROWS_AS((void)denoise_nlm(noisy, 1, 0, 0.1), Error);
  CHECK_THROWS_AS((void)denoise_nlm(noisy, 1, 3, -0.1), Error);
}

TEST_CASE("NLM reduces Gaussian noise on a flat image") {
  const RealGrid truth(64, 64, 0.5);
  const RealGrid noisy = noisy_grid(64, 64, 0.5, 0.1, 2);
  const RealGrid clean = denoise_nlm(noisy, 2, 7, 0.15);
  CHECK(grid_mse(clean, truth) < grid_mse(noisy, truth) / 4.0);
}

TEST_CASE("NLM matches the serial reference bit for bit") {
  RealGrid img = noisy_grid(37, 29, 0.4, 0.2, 3);
  const RealGrid ref = reference::denoise_nlm(img, 2, 4, 0.2);
  const int saved = omp_get_max_threads();
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    CHECK(denoise_nlm(img, 2, 4, 0.2) == ref);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("kernel field normalization") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> w(4 * 3 * 2 * 9);
  for (double& v : w) v = u(gen);
  for (auto mode : {KernelNormalization::kSoftmax}) {
    const auto n = KernelField(4, 3, 2, 3, w, mode).normalized();
    CHECK(n.mode() == KernelNormalization::kNone);
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 4; ++x) {
        const auto p = n.pixel_weights(x, y);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : p) CHECK(v > 0.0);
      }
  }
  for (double& v : w) v = std::abs(v) + 0.01;
  const auto s = KernelField(4, 3, 2, 3, w, KernelNormalization::kSumToOne).normalized();
  const auto p = s.pixel_weights(2, 1);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(KernelField(4, 3, 2, 2, std::vector<double>(4 * 3 * 2 * 4), {}), Error);
}

TEST_CASE("kernel field application") {
  const int w = 9, h = 7, t = 3;
  std::vector<RealGrid> frames;
  for (int f = 0; f < t; ++f) frames.push_back(noisy_grid(w, h, 0.5, 0.2, 10 + f));

  SUBCASE("delta at the centre of frame 0 reproduces frame 0") {
    std::vector<double> wts(static_cast<std::size_t>(w) * h * t * 9, 0.0);
    for (std::size_t p = 0; p < static_cast<std::size_t>(w) * h; ++p) wts[p * t * 9 + 4] = 1.0;
    CHECK(apply_kernel_field(frames, KernelField(w, h, t, 3, wts)) == frames[0]);
  }
  SUBCASE("1x1 uniform kernel gives the frame mean") {
    const auto out = apply_kernel_field(frames, KernelField::uniform(w, h, t, 1, 1.0 / t, {}));
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        CHECK(out(x, y) ==
              doctest::Approx((frames[0](x, y) + frames[1](x, y) + frames[2](x, y)) / 3.0));
  }
  SUBCASE("sum-to-one keeps constants in the interior") {
    const std::vector<RealGrid> flat(t, RealGrid(w, h, 0.25));
    const auto out = apply_kernel_field(
        flat, KernelField::uniform(w, h, t, 3, 7.0, KernelNormalization::kSumToOne));
    for (int y = 1; y < h - 1; ++y)
      for (int x = 1; x < w - 1; ++x) CHECK(out(x, y) == doctest::Approx(0.25));
    CHECK(out(0, 0) < 0.25);  // zero padding outside the frame
  }
  SUBCASE("linear in the frames") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> wts(static_cast<std::size_t>(w) * h * t * 25);
    for (double& v : wts) v = u(gen);
    const KernelField field(w, h, t, 5, wts);
    std::vector<RealGrid> other, combo;
    for (int f = 0; f < t; ++f) {
      other.push_back(noisy_grid(w, h, 0.1, 0.3, 20 + f));
      RealGrid c(w, h);
      for (std::size_t i = 0; i < c.size(); ++i)
        c.values()[i] = 2.0 * frames[f].values()[i] - 0.5 * other[f].values()[i];
      combo.push_back(std::move(c));
    }
    const auto a = apply_kernel_field(frames, field);
    const auto b = apply_kernel_field(other, field);
    const auto ab = apply_kernel_field(combo, field);
    for (std::size_t i = 0; i < ab.size(); ++i)
      CHECK(ab.values()[i] == doctest::Approx(2.0 * a.values()[i] - 0.5 * b.values()[i]));
  }
  SUBCASE("parallel matches the serial reference") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> wts(static_cast<std::size_t>(w) * h * t * 9);
    for (double& v : wts) v = u(gen);
    for (auto mode : {KernelNormalization::kNone, KernelNormalization::kSoftmax}) {
      const KernelField field(w, h, t, 3, wts, mode);
      const auto par = apply_kernel_field(frames, field);
      const auto ref = reference::apply_kernel_field(frames, field);
      for (std::size_t i = 0; i < par.size(); ++i)
        CHECK(par.values()[i] == doctest::Approx(ref.values()[i]).epsilon(1e-12));
    }
  }
  SUBCASE("dimension mismatch") {
    try {
      (void)apply_kernel_field(frames, KernelField::uniform(w + 1, h, t, 3, 1.0, {}));
      FAIL("expected mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDimensionMismatch);
    }
    CHECK_THROWS_AS((void)apply_kernel_field(frames, KernelField::uniform(w, h, t + 1, 3, 1.0, {})),
                    Error);
  }
}

TEST_CASE("pipeline dispatch") {
  SensorConfig c;
  const Burst zeros = constant_burst(c, 8, 8, 0);
  for (auto m : {ReconstructionMethod::burst_average(), ReconstructionMethod::average_then_denoise()}) {
    const auto out = reconstruct_pipeline(zeros, m);
    for (double v : out.values()) CHECK(v == 0.0);
  }
  for (const char* name : {"burst-average", "average-then-denoise", "anscombe-denoise", "mle-binary"}) {
    CHECK(method_name(parse_method(name).kind) == name);
  }
  CHECK_THROWS_AS((void)parse_method("median"), Error);
  try {
    (void)reconstruct_pipeline(zeros, ReconstructionMethod::mle_binary());
    FAIL("expected incompatible method");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIncompatibleMethod);
  }
  CHECK_THROWS_AS((void)reconstruct_pipeline(zeros, ReconstructionMethod::anscombe_denoise()), Error);
  const auto uniform = KernelField::uniform(8, 8, 8, 1, 1.0 / 8, {});
  CHECK(reconstruct_pipeline(zeros, ReconstructionMethod::kernel_merge(uniform)) ==
        average_burst(zeros));
}

TEST_CASE("denoising beats plain averaging on single-bit bursts at 1 ppp") {
  const SceneImage scene = textured_scene(96, 96, 3);
  SensorConfig c = binary_config(calibrate_gain(scene, 1.0));
  const Burst b = simulate_burst(scene, c, 44);
  const double avg = psnr(reconstruct_pipeline(b, ReconstructionMethod::burst_average()), scene);
  const double ans = psnr(reconstruct_pipeline(b, ReconstructionMethod::anscombe_denoise()), scene);
  const double atd = psnr(reconstruct_pipeline(b, ReconstructionMethod::average_then_denoise()), scene);
  INFO("burst-average " << avg << " anscombe " << ans << " avg+nlm " << atd);
  CHECK(ans > avg);
  CHECK(atd > avg);
}
