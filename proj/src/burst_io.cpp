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

#include "qis/burst_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

#include "metadata.hpp"

namespace qis {
namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'I', 'S', 'B'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  out.flush();
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

QisbHeader parse_header(const std::vector<std::uint8_t>& bytes) {
  require(bytes.size() >= kQisbHeaderSize, ErrorCode::kTruncated,
          "file shorter than the 24-byte QISB header");
  require(std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) == 0, ErrorCode::kBadMagic,
          "bad magic: expected \"QISB\"");
  QisbHeader h;
  h.version = get_u32(bytes.data() + 4);
  require(h.version == kQisbVersion, ErrorCode::kVersionMismatch,
          "unsupported QISB version " + std::to_string(h.version));
  h.height = get_u32(bytes.data() + 8);
  h.width = get_u32(bytes.data() + 12);
  h.frame_count = get_u32(bytes.data() + 16);
  h.adc_bits = bytes[20];
  require(bytes[21] == 0 && bytes[22] == 0 && bytes[23] == 0, ErrorCode::kBadMetadata,
          "reserved header bytes must be zero");
  require(h.height >= 1 && h.width >= 1 && h.frame_count >= 1, ErrorCode::kBadMetadata,
          "header declares an empty burst");
  require(h.adc_bits >= 1 && h.adc_bits <= 8, ErrorCode::kBadMetadata,
          "header adc_bits outside [1, 8]");
  return h;
}

}  // namespace

namespace detail {

nlohmann::json config_to_json(const SensorConfig& c) {
  return {{"gain_alpha", c.gain_alpha},
          {"dark_current_rate", c.dark_current_rate},
          {"read_noise_sigma", c.read_noise_sigma},
          {"adc_bits", c.adc_bits},
          {"single_bit_threshold", c.single_bit_threshold},
          {"integration_time", c.integration_time},
          {"frames_per_burst", c.frames_per_burst}};
}

SensorConfig config_from_json(const nlohmann::json& j) {
  SensorConfig c;
  c.gain_alpha = j.at("gain_alpha").get<double>();
  c.dark_current_rate = j.at("dark_current_rate").get<double>();
  c.read_noise_sigma = j.at("read_noise_sigma").get<double>();
  c.adc_bits = j.at("adc_bits").get<int>();
  c.single_bit_threshold = j.at("single_bit_threshold").get<int>();
  c.integration_time = j.at("integration_time").get<double>();
  c.frames_per_burst = j.at("frames_per_burst").get<int>();
  return c;
}

nlohmann::json trajectory_to_json(const MotionTrajectory& trajectory) {
  auto traj = nlohmann::json::array();
  for (const auto& d : trajectory.displacements) traj.push_back({d.dx, d.dy});
  return traj;
}

}  // namespace detail

std::filesystem::path sidecar_path(const std::filesystem::path& burst_path) {
  auto p = burst_path;
  p += ".json";
  return p;
}

std::vector<std::uint8_t> encode_qisb(const Burst& burst) {
  const auto samples = burst.samples();
  const int max_code = burst.config().max_code();
  for (std::uint8_t s : samples) {
    require(s <= max_code, ErrorCode::kValueOutOfRange, "refusing to write out-of-range sample");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kQisbHeaderSize + samples.size());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u32(out, kQisbVersion);
  put_u32(out, static_cast<std::uint32_t>(burst.height()));
  put_u32(out, static_cast<std::uint32_t>(burst.width()));
  put_u32(out, static_cast<std::uint32_t>(burst.frame_count()));
  out.push_back(static_cast<std::uint8_t>(burst.adc_bits()));
  out.insert(out.end(), 3, 0);
  out.insert(out.end(), samples.begin(), samples.end());
  return out;
}

std::string encode_sidecar(const Burst& burst) {
  nlohmann::json j;
  j["format"] = "qisb-sidecar";
  j["version"] = kQisbVersion;
  j["width"] = burst.width();
  j["height"] = burst.height();
  j["frame_count"] = burst.frame_count();
  j["seed"] = burst.seed();
  j["config"] = detail::config_to_json(burst.config());
  if (burst.trajectory()) {
    j["trajectory"] = detail::trajectory_to_json(*burst.trajectory());
  } else {
    j["trajectory"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void write_burst(const Burst& burst, const std::filesystem::path& path) {
  const auto bytes = encode_qisb(burst);
  const auto meta = encode_sidecar(burst);
  write_all(path, bytes.data(), bytes.size());
  write_all(sidecar_path(path), meta.data(), meta.size());
}

QisbHeader read_qisb_header(const std::filesystem::path& path) {
  return parse_header(read_all(path));
}

Burst read_burst(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  const QisbHeader h = parse_header(bytes);
  const std::size_t expected = static_cast<std::size_t>(h.height) * h.width * h.frame_count;
  const std::size_t payload = bytes.size() - kQisbHeaderSize;
  require(payload >= expected, ErrorCode::kTruncated,
          "payload holds " + std::to_string(payload) + " bytes, header declares " +
              std::to_string(expected));
  require(payload == expected, ErrorCode::kBadMetadata, "trailing bytes after payload");
  const int max_code = (1 << h.adc_bits) - 1;
  for (std::size_t i = kQisbHeaderSize; i < bytes.size(); ++i) {
    require(bytes[i] <= max_code, ErrorCode::kValueOutOfRange,
            "payload value " + std::to_string(bytes[i]) + " exceeds 2^B - 1 at offset " +
                std::to_string(i));
  }

  const auto meta_path = sidecar_path(path);
  require(std::filesystem::exists(meta_path), ErrorCode::kBadMetadata,
          "missing sidecar " + meta_path.string());
  const auto meta_bytes = read_all(meta_path);
  nlohmann::json meta;
  SensorConfig config;
  Seed seed = 0;
  std::optional<MotionTrajectory> trajectory;
  try {
    meta = nlohmann::json::parse(meta_bytes.begin(), meta_bytes.end());
    config = detail::config_from_json(meta.at("config"));
    seed = meta.at("seed").get<Seed>();
    const auto& traj = meta.at("trajectory");
    if (!traj.is_null()) {
      MotionTrajectory t;
      for (const auto& d : traj) t.displacements.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
      trajectory = std::move(t);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kBadMetadata, std::string("malformed sidecar: ") + e.what());
  }
  require(config.adc_bits == h.adc_bits, ErrorCode::kBadMetadata,
          "sidecar adc_bits disagrees with header");
  try {
    config.validate();
    if (trajectory) trajectory->validate();
  } catch (const Error& e) {
    fail(ErrorCode::kBadMetadata, std::string("sidecar: ") + e.what());
  }

  std::vector<std::uint8_t> samples(bytes.begin() + kQisbHeaderSize, bytes.end());
  return Burst(config, seed, static_cast<int>(h.width), static_cast<int>(h.height),
               static_cast<int>(h.frame_count), std::move(samples), std::move(trajectory));
}

}  // namespace qis
