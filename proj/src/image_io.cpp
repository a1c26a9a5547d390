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

#include "qis/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

namespace qis {
namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_int(const std::string& tok, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::kBadMetadata, "malformed PGM header in " + path.string());
}

}  // namespace

Grid<std::uint16_t> read_pgm_raw(const std::filesystem::path& path, int* maxval_out) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  require(next_token(in) == "P5", ErrorCode::kBadMagic, path.string() + " is not a binary PGM (P5)");
  const int width = parse_int(next_token(in), path);
  const int height = parse_int(next_token(in), path);
  const int maxval = parse_int(next_token(in), path);
  require(width >= 1 && height >= 1 && maxval >= 1 && maxval <= 65535, ErrorCode::kBadMetadata,
          "unsupported PGM geometry in " + path.string());
  // next_token consumed the single whitespace byte that ends the header.
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(n * bytes_per);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  require(static_cast<std::size_t>(in.gcount()) == raw.size(), ErrorCode::kTruncated,
          "truncated PGM payload in " + path.string());

  Grid<std::uint16_t> out(width, height);
  auto values = out.values();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t v = bytes_per == 2
                                ? static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1])
                                : raw[i];
    require(v <= maxval, ErrorCode::kValueOutOfRange, "PGM sample above maxval in " + path.string());
    values[i] = v;
  }
  if (maxval_out) *maxval_out = maxval;
  return out;
}

SceneImage read_pgm(const std::filesystem::path& path) {
  int maxval = 0;
  const auto raw = read_pgm_raw(path, &maxval);
  RealGrid g(raw.width(), raw.height());
  auto dst = g.values();
  const auto src = raw.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<double>(src[i]) / maxval;
  return SceneImage(std::move(g));
}

void write_pgm(const SceneImage& image, const std::filesystem::path& path, int bit_depth) {
  require(bit_depth == 8 || bit_depth == 16, ErrorCode::kInvalidArgument,
          "PGM bit depth must be 8 or 16");
  const int maxval = bit_depth == 8 ? 255 : 65535;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
  std::vector<unsigned char> raw;
  raw.reserve(image.values().size() * (bit_depth / 8));
  for (double v : image.values()) {
    const auto code = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
    if (bit_depth == 16) raw.push_back(static_cast<unsigned char>(code >> 8));
    raw.push_back(static_cast<unsigned char>(code & 0xFF));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace qis
