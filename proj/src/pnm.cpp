/*
 * Copyright 2026 The crackseg authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "crackseg/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

namespace crackseg {
namespace {

// Skips whitespace and '#' comment lines between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const std::string& path,
                     const char* field) {
  skip_separators(in);
  long value = -1;
  if (!(in >> value) || value < 0) {
    throw FormatError(path + ": malformed " + std::string(field) + " field");
  }
  return value;
}

struct PnmHeader {
  long width = 0;
  long height = 0;
};

PnmHeader read_header(std::istream& in, const std::string& path,
                      const char* magic) {
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != magic[0] || m1 != magic[1]) {
    throw FormatError(path + ": malformed magic number (expected " +
                      std::string(magic) + ")");
  }
  PnmHeader h;
  h.width = read_header_int(in, path, "width");
  h.height = read_header_int(in, path, "height");
  const long maxval = read_header_int(in, path, "maxval");
  if (maxval != 255) {
    throw FormatError(path + ": maxval must be 255, got " +
                      std::to_string(maxval));
  }
  if (h.width <= 0 || h.height <= 0) {
    throw FormatError(path + ": non-positive width or height");
  }
  in.get();  // the single separator byte before the raster
  if (!in) throw FormatError(path + ": truncated payload");
  return h;
}

std::vector<std::uint8_t> read_payload(std::istream& in,
                                       const std::string& path,
                                       std::size_t bytes) {
  std::vector<std::uint8_t> buf(bytes);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw FormatError(path + ": truncated payload");
  }
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  return in;
}

std::uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

}  // namespace

Channels load_image(const std::string& path) {
  auto in = open_input(path);
  const PnmHeader h = read_header(in, path, "P6");
  const auto raw = read_payload(
      in, path, static_cast<std::size_t>(h.width) * h.height * 3);
  Channels rgb(3, Plane(h.height, h.width));
  std::size_t k = 0;
  for (long i = 0; i < h.height; ++i) {
    for (long j = 0; j < h.width; ++j) {
      for (int c = 0; c < 3; ++c) {
        rgb[c](i, j) = raw[k++] / 255.0;
      }
    }
  }
  return rgb;
}

Plane load_graymap(const std::string& path) {
  auto in = open_input(path);
  const PnmHeader h = read_header(in, path, "P5");
  const auto raw =
      read_payload(in, path, static_cast<std::size_t>(h.width) * h.height);
  Plane g(h.height, h.width);
  std::size_t k = 0;
  for (long i = 0; i < h.height; ++i) {
    for (long j = 0; j < h.width; ++j) {
      g(i, j) = raw[k++] / 255.0;
    }
  }
  return g;
}

Mask load_mask(const std::string& path) {
  auto in = open_input(path);
  const PnmHeader h = read_header(in, path, "P5");
  const auto raw =
      read_payload(in, path, static_cast<std::size_t>(h.width) * h.height);
  Mask m(h.height, h.width);
  std::size_t k = 0;
  for (long i = 0; i < h.height; ++i) {
    for (long j = 0; j < h.width; ++j) {
      m(i, j) = raw[k++] >= 128 ? 1 : 0;
    }
  }
  return m;
}

void save_image(const std::string& path, const Channels& rgb) {
  if (rgb.size() != 3) {
    throw std::invalid_argument("save_image expects 3 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot open for writing");
  out << "P6\n" << rgb[0].cols() << " " << rgb[0].rows() << "\n255\n";
  std::vector<std::uint8_t> buf;
  buf.reserve(static_cast<std::size_t>(rgb[0].size()) * 3);
  for (Eigen::Index i = 0; i < rgb[0].rows(); ++i) {
    for (Eigen::Index j = 0; j < rgb[0].cols(); ++j) {
      for (int c = 0; c < 3; ++c) buf.push_back(quantize(rgb[c](i, j)));
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(path + ": write failed");
}

void save_mask(const std::string& path, const Mask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot open for writing");
  out << "P5\n" << mask.cols() << " " << mask.rows() << "\n255\n";
  std::vector<std::uint8_t> buf;
  buf.reserve(static_cast<std::size_t>(mask.size()));
  for (Eigen::Index i = 0; i < mask.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
      buf.push_back(mask(i, j) ? 255 : 0);
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(path + ": write failed");
}

}  // namespace crackseg
