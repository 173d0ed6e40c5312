// Copyright 2026 The sealwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEAL_PGM_HPP
#define SEAL_PGM_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "seal/error.hpp"

namespace seal {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, length width*height
};

namespace detail {

// Reads the next whitespace-separated token, skipping '#' comment lines.
inline std::string next_pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  if (tok.empty()) throw ValidationError("pgm: unexpected end of file");
  return tok;
}

}  // namespace detail

/// Reads a binary "P5" PGM with 8-bit samples.
inline GrayImage read_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("pgm: cannot open " + path);
  if (detail::next_pgm_token(f) != "P5")
    throw ValidationError("pgm: not a binary P5 file: " + path);
  GrayImage img;
  try {
    img.width = std::stoul(detail::next_pgm_token(f));
    img.height = std::stoul(detail::next_pgm_token(f));
    const unsigned long maxval = std::stoul(detail::next_pgm_token(f));
    if (maxval == 0 || maxval > 255)
      throw ValidationError("pgm: only 8-bit samples are supported");
  } catch (const std::logic_error&) {
    throw ValidationError("pgm: malformed header in " + path);
  }
  if (img.width == 0 || img.height == 0)
    throw ValidationError("pgm: empty image " + path);
  img.pixels.resize(img.width * img.height);
  f.read(reinterpret_cast<char*>(img.pixels.data()),
         std::streamsize(img.pixels.size()));
  if (std::size_t(f.gcount()) != img.pixels.size())
    throw ValidationError("pgm: truncated pixel data in " + path);
  return img;
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.pixels.size() != img.width * img.height)
    throw ShapeError("pgm: pixel buffer length != width*height");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("pgm: cannot open for writing " + path);
  f << "P5\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.pixels.data()),
          std::streamsize(img.pixels.size()));
  if (!f) throw ValidationError("pgm: write failed " + path);
}

}  // namespace seal

#endif  // SEAL_PGM_HPP
