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

// Procedural test scenes for sweeps and tests when no image set is at hand.

#pragma once

#include "qis/types.hpp"

namespace qis {

/// Random mix of soft blobs, bars and a sinusoidal grating in [0.05, 0.95].
/// Deterministic in seed.
SceneImage textured_scene(int width, int height, Seed seed);

/// Disc mask of the given radius centred at (cx, cy).
Grid<std::uint8_t> disc_mask(int width, int height, double cx, double cy, double radius);

}  // namespace qis
