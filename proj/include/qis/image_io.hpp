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

#include <cstdint>
#include <filesystem>

#include "qis/types.hpp"

namespace qis {

/// Binary portable graymap (P5), maxval up to 65535. Values are scaled to
/// [0, 1] by maxval.
SceneImage read_pgm(const std::filesystem::path& path);
Grid<std::uint16_t> read_pgm_raw(const std::filesystem::path& path, int* maxval = nullptr);

/// bit_depth 8 or 16; values are rounded to the nearest code.
void write_pgm(const SceneImage& image, const std::filesystem::path& path, int bit_depth = 16);

}  // namespace qis
