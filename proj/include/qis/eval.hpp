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

#include <string>
#include <vector>

#include "qis/reconstruct.hpp"
#include "qis/types.hpp"

namespace qis {

inline constexpr double kPsnrCapDb = 99.0;
inline constexpr int kDefaultBorderExclude = 8;

double mse(const RealGrid& estimate, const RealGrid& truth, int border_exclude);

/// 10 log10(1 / MSE) over the interior; identical images give kPsnrCapDb.
double psnr(const SceneImage& estimate, const SceneImage& truth,
            int border_exclude = kDefaultBorderExclude);
double psnr_from_mse(double mse);

/// "26.74 dB"
std::string format_db(double db);

struct SweepRow {
  double variable = 0.0;
  std::string method;
  double psnr_db = 0.0;
  /// MSE equivalent to psnr_db: the geometric mean of the per-image MSEs.
  double mse = 0.0;
  int n = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  /// Header `variable,method,psnr_db,mse,n`, one row per cell.
  std::string to_csv() const;
};

struct SweepSetup {
  std::vector<ReconstructionMethod> methods;
  std::vector<SceneImage> scenes;
  std::vector<Seed> seeds;
  SensorConfig base_config{};
  int border_exclude = kDefaultBorderExclude;
};

/// Linear horizontal motion of each magnitude at fixed photon level. Cells
/// reuse the same noise seeds so that differences between cells come from
/// the swept variable, not from fresh noise.
SweepResult sweep_motion(const SweepSetup& setup, const std::vector<double>& magnitudes,
                         double ppp = 2.0);

SweepResult sweep_photon(const SweepSetup& setup, const std::vector<double>& ppp_list,
                         double magnitude = 4.0);

}  // namespace qis
