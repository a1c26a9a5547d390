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

// QISB burst container.
//
//   offset  size  field
//   0       4     magic "QISB"
//   4       4     version (u32, = 1)
//   8       4     height (u32)
//   12      4     width (u32)
//   16      4     frame_count (u32)
//   20      1     adc_bits (u8)
//   21      3     reserved, zero
//   24      H*W*T payload, one byte per sample, frame-major then row-major
//
// Integers are little-endian. SensorConfig, seed and trajectory live in a
// JSON sidecar at `<path>.json`.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qis/types.hpp"

namespace qis {

inline constexpr std::uint32_t kQisbVersion = 1;
inline constexpr std::size_t kQisbHeaderSize = 24;

std::filesystem::path sidecar_path(const std::filesystem::path& burst_path);

/// Header plus payload bytes, without the sidecar.
std::vector<std::uint8_t> encode_qisb(const Burst& burst);

/// Sidecar document text (deterministic key order).
std::string encode_sidecar(const Burst& burst);

void write_burst(const Burst& burst, const std::filesystem::path& path);

/// Throws Error with kBadMagic, kVersionMismatch, kTruncated,
/// kValueOutOfRange, kBadMetadata or kIo.
Burst read_burst(const std::filesystem::path& path);

struct QisbHeader {
  std::uint32_t version = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t frame_count = 0;
  std::uint8_t adc_bits = 0;
};

QisbHeader read_qisb_header(const std::filesystem::path& path);

}  // namespace qis
