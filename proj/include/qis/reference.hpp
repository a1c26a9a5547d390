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

// Serial reference kernels. Straight loops, no OpenMP, no padding tricks.
// The parallel kernels in the main library must match these bit for bit;
// the tests and qis_bench hold them side by side.

#pragma once

#include <span>

#include "qis/types.hpp"

namespace qis::reference {

Burst simulate_burst(std::span<const SceneImage> frames, const SensorConfig& config, Seed seed);

RealGrid denoise_nlm(const RealGrid& image, int patch_radius, int search_radius,
                     double filter_strength);

RealGrid apply_kernel_field(std::span<const RealGrid> frames, const KernelField& field);

}  // namespace qis::reference
