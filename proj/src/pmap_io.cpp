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
#include "crackseg/pmap_io.hpp"

#include <cstring>
#include <fstream>

#include "crackseg/binio.hpp"

namespace crackseg {
namespace {

constexpr char kMagic[4] = {'P', 'M', 'A', 'P'};

// One PMAP file must stay addressable with size_t arithmetic on payload bytes.
constexpr std::uint64_t kMaxElements = 1ULL << 31;

}  // namespace

void save_planes(const std::string& path, const Channels& channels) {
  if (channels.empty()) {
    throw std::invalid_argument("save_planes: no channels");
  }
  const Eigen::Index rows = channels[0].rows();
  const Eigen::Index cols = channels[0].cols();
  for (const Plane& ch : channels) {
    if (ch.rows() != rows || ch.cols() != cols) {
      throw std::invalid_argument("save_planes: channel shape mismatch");
    }
  }
  std::string buf;
  buf.append(kMagic, 4);
  binio::put_u32le(buf, static_cast<std::uint32_t>(rows));
  binio::put_u32le(buf, static_cast<std::uint32_t>(cols));
  binio::put_u32le(buf, static_cast<std::uint32_t>(channels.size()));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (const Plane& ch : channels) binio::put_f64le(buf, ch(i, j));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(path + ": write failed");
}

Channels load_planes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 16 || std::memcmp(data.data(), kMagic, 4) != 0) {
    throw FormatError(path + ": bad magic (expected PMAP)");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  const std::uint64_t rows = binio::get_u32le(p + 4);
  const std::uint64_t cols = binio::get_u32le(p + 8);
  const std::uint64_t nch = binio::get_u32le(p + 12);
  if (rows == 0 || cols == 0 || nch == 0) {
    throw FormatError(path + ": zero dimension");
  }
  const std::uint64_t count = rows * cols * nch;
  if (count > kMaxElements || rows * cols > kMaxElements) {
    throw FormatError(path + ": dimension overflow");
  }
  if (data.size() != 16 + count * 8) {
    throw FormatError(path + ": payload length mismatch");
  }
  Channels channels(nch, Plane(static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols)));
  const unsigned char* q = p + 16;
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      for (std::uint64_t c = 0; c < nch; ++c) {
        channels[c](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            binio::get_f64le(q);
        q += 8;
      }
    }
  }
  return channels;
}

void save_probmap(const std::string& path, const ProbMap& map) {
  save_planes(path, {map.background, map.crack});
}

ProbMap load_probmap(const std::string& path) {
  Channels ch = load_planes(path);
  if (ch.size() != 2) {
    throw FormatError(path + ": expected 2 channels, got " +
                      std::to_string(ch.size()));
  }
  return ProbMap{std::move(ch[0]), std::move(ch[1])};
}

void save_priormap(const std::string& path, const PriorMap& map) {
  save_planes(path, {map.background, map.crack});
}

PriorMap load_priormap(const std::string& path) {
  Channels ch = load_planes(path);
  if (ch.size() != 2) {
    throw FormatError(path + ": expected 2 channels, got " +
                      std::to_string(ch.size()));
  }
  return PriorMap{std::move(ch[0]), std::move(ch[1])};
}

}  // namespace crackseg
