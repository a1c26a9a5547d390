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

// Shared by the parallel and reference NLM so both weigh patches with the
// exact same floating-point expression.

#pragma once

#include <cmath>

#include "qis/error.hpp"

namespace qis::detail {

inline void check_nlm_args(int patch_radius, int search_radius, double filter_strength) {
  require(patch_radius >= 1 && search_radius >= 1, ErrorCode::kInvalidArgument,
          "NLM radii must be positive");
  require(std::isfinite(filter_strength) && filter_strength >= 0.0, ErrorCode::kInvalidArgument,
          "NLM filter strength must be >= 0");
}

inline double nlm_weight(double sum_sq_diff, double patch_area, double h2) {
  return std::exp(-(sum_sq_diff / patch_area) / h2);
}

}  // namespace qis::detail
