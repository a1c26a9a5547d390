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

// Training-free reconstruction baselines and the kernel-merge primitive.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qis/types.hpp"

namespace qis {

struct NlmParams {
  int patch_radius = 2;
  int search_radius = 7;
  double filter_strength = 0.1;
};

enum class MethodKind {
  kBurstAverage,
  kAverageThenDenoise,
  kAnscombeDenoise,
  kMleBinary,
  kKernelMerge,
};

struct ReconstructionMethod {
  MethodKind kind = MethodKind::kBurstAverage;
  /// Used by average-then-denoise (on [0,1] flux) and anscombe-denoise (on
  /// the stabilized, roughly unit-variance domain).
  std::optional<NlmParams> nlm;
  /// Required by kernel-merge.
  std::optional<KernelField> field;

  static ReconstructionMethod burst_average() { return {MethodKind::kBurstAverage, {}, {}}; }
  static ReconstructionMethod average_then_denoise(std::optional<NlmParams> p = {}) {
    return {MethodKind::kAverageThenDenoise, p, {}};
  }
  static ReconstructionMethod anscombe_denoise(std::optional<NlmParams> p = {}) {
    return {MethodKind::kAnscombeDenoise, p, {}};
  }
  static ReconstructionMethod mle_binary() { return {MethodKind::kMleBinary, {}, {}}; }
  static ReconstructionMethod kernel_merge(KernelField f) {
    return {MethodKind::kKernelMerge, {}, std::move(f)};
  }
};

std::string_view method_name(MethodKind kind);
/// Parses "burst-average", "average-then-denoise", "anscombe-denoise",
/// "mle-binary". kernel-merge needs a field and cannot be built from a name.
ReconstructionMethod parse_method(std::string_view name);

NlmParams default_flux_nlm();
NlmParams default_anscombe_nlm();

/// (sum_t y_t) / (T * alpha) - dark offset, clamped to [0, 1].
SceneImage average_burst(const Burst& burst);

/// Per-pixel count of ones over a single-bit burst.
Grid<int> sum_binary_frames(const Burst& burst);

double anscombe_binomial(double ones, int frames);
double inverse_anscombe_binomial(double z, int frames);
RealGrid anscombe_binomial(const Grid<int>& summed, int frames);

/// lambda_hat = -ln(1 - min(p_hat, 1 - 1/(2T)))
double binary_rate_to_flux(double p_hat, int frames);

SceneImage mle_invert_binary(const Burst& burst);

/// Non-local means with weights exp(-d^2 / h^2), d^2 the mean squared
/// difference of (2r+1)^2 patches (edge-replicated). Output clamped to the
/// input range. h == 0 returns the input.
RealGrid denoise_nlm(const RealGrid& image, int patch_radius, int search_radius,
                     double filter_strength);
SceneImage denoise_nlm(const SceneImage& image, int patch_radius, int search_radius,
                       double filter_strength);

/// out(p) = sum_t sum_o w[p,t,o] * frame_t(p + o), zero outside the frame.
RealGrid apply_kernel_field(std::span<const RealGrid> frames, const KernelField& field);

/// Burst frames as flux estimates y / alpha - dark offset (not clamped).
std::vector<RealGrid> normalized_frames(const Burst& burst);

SceneImage reconstruct_pipeline(const Burst& burst, const ReconstructionMethod& method);

}  // namespace qis
