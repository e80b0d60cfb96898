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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "crackseg/pmap_io.hpp"
#include "crackseg/pnm.hpp"
#include "crackseg/rng.hpp"
#include "oracles.hpp"

using namespace crackseg;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "crackseg_pnm_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("P6 all-255 loads as ones") {
  const auto path = temp_file("white.ppm");
  write_bytes(path, std::string("P6\n2 2\n255\n") + std::string(12, '\xff'));
  const Channels rgb = load_image(path.string());
  REQUIRE(rgb.size() == 3);
  for (const Plane& ch : rgb) {
    CHECK(ch.rows() == 2);
    CHECK(ch.cols() == 2);
    CHECK(ch.minCoeff() == 1.0);
    CHECK(ch.maxCoeff() == 1.0);
  }
}

TEST_CASE("P6 all-zero loads as zeros") {
  const auto path = temp_file("black.ppm");
  write_bytes(path, std::string("P6\n2 2\n255\n") + std::string(12, '\0'));
  const Channels rgb = load_image(path.string());
  for (const Plane& ch : rgb) {
    CHECK(ch.maxCoeff() == 0.0);
  }
}

TEST_CASE("P6 with 16-bit maxval is rejected naming the field") {
  const auto path = temp_file("wide.ppm");
  write_bytes(path, std::string("P6\n2 2\n65535\n") + std::string(24, '\0'));
  CHECK_THROWS_WITH_AS(load_image(path.string()),
                       doctest::Contains("maxval"), FormatError);
}

TEST_CASE("malformed magic number is rejected") {
  const auto path = temp_file("bad_magic.ppm");
  write_bytes(path, std::string("P3\n2 2\n255\n") + std::string(12, '\0'));
  CHECK_THROWS_WITH_AS(load_image(path.string()),
                       doctest::Contains("magic"), FormatError);
}

TEST_CASE("truncated payload is rejected") {
  const auto path = temp_file("short.ppm");
  write_bytes(path, std::string("P6\n2 2\n255\n") + std::string(5, '\0'));
  CHECK_THROWS_WITH_AS(load_image(path.string()),
                       doctest::Contains("truncated"), FormatError);
}

TEST_CASE("header comments are skipped") {
  const auto path = temp_file("comment.ppm");
  write_bytes(path, std::string("P6\n# a comment\n2 1\n255\n") +
                        std::string(6, '\x80'));
  const Channels rgb = load_image(path.string());
  CHECK(rgb[0](0, 0) == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("P5 masks binarize at 128") {
  const auto path = temp_file("mask.pgm");
  std::string payload;
  payload.push_back('\x00');  // 0   -> background
  payload.push_back('\x7f');  // 127 -> background
  payload.push_back('\x80');  // 128 -> crack
  payload.push_back('\xff');  // 255 -> crack
  write_bytes(path, "P5\n4 1\n255\n" + payload);
  const Mask m = load_mask(path.string());
  CHECK(m(0, 0) == 0);
  CHECK(m(0, 1) == 0);
  CHECK(m(0, 2) == 1);
  CHECK(m(0, 3) == 1);
}

TEST_CASE("P5 all-255 and all-0 masks") {
  const auto white = temp_file("allcrack.pgm");
  write_bytes(white, std::string("P5\n3 2\n255\n") + std::string(6, '\xff'));
  CHECK((load_mask(white.string()) == 1).all());
  const auto black = temp_file("allbg.pgm");
  write_bytes(black, std::string("P5\n3 2\n255\n") + std::string(6, '\0'));
  CHECK((load_mask(black.string()) == 0).all());
}

TEST_CASE("mask save/load round trip") {
  Rng rng(11);
  const Mask m = oracle::random_mask(6, 9, 0.3, rng);
  const auto path = temp_file("roundtrip.pgm");
  save_mask(path.string(), m);
  CHECK((load_mask(path.string()) == m).all());
}

TEST_CASE("image save quantizes to the written maxval") {
  Channels rgb(3, Plane::Constant(2, 2, 0.5));
  const auto path = temp_file("gray.ppm");
  save_image(path.string(), rgb);
  const Channels back = load_image(path.string());
  CHECK(back[0](0, 0) == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("probmap round trip is bit-exact for 100 random maps") {
  Rng rng(42);
  const auto path = temp_file("map.pmap");
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng.uniform_index(12));
    const Eigen::Index cols = 1 + static_cast<Eigen::Index>(rng.uniform_index(12));
    const ProbMap map = oracle::random_probmap(rows, cols, rng);
    save_probmap(path.string(), map);
    const ProbMap back = load_probmap(path.string());
    CHECK((back.background == map.background).all());
    CHECK((back.crack == map.crack).all());
  }
}

TEST_CASE("pmap bad magic is a format error") {
  const auto path = temp_file("bad.pmap");
  write_bytes(path, "XXXX" + std::string(20, '\0'));
  CHECK_THROWS_WITH_AS(load_probmap(path.string()),
                       doctest::Contains("magic"), FormatError);
}

TEST_CASE("pmap truncated payload is a format error") {
  Rng rng(7);
  const ProbMap map = oracle::random_probmap(4, 4, rng);
  const auto path = temp_file("trunc.pmap");
  save_probmap(path.string(), map);
  std::ifstream in(path, std::ios::binary);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  in.close();
  write_bytes(path, data.substr(0, data.size() - 3));
  CHECK_THROWS_WITH_AS(load_probmap(path.string()),
                       doctest::Contains("length mismatch"), FormatError);
}

TEST_CASE("pmap dimension overflow is a format error") {
  const auto path = temp_file("overflow.pmap");
  std::string buf = "PMAP";
  auto put = [&buf](std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) buf.push_back(static_cast<char>((v >> s) & 0xff));
  };
  put(0xffffffffu);
  put(0xffffffffu);
  put(2);
  write_bytes(path, buf);
  CHECK_THROWS_WITH_AS(load_probmap(path.string()),
                       doctest::Contains("overflow"), FormatError);
}

TEST_CASE("priormap persists through the PMAP format") {
  Rng rng(3);
  const PriorMap prior = oracle::random_priormap(5, 7, 0.05, 0.45, rng);
  const auto path = temp_file("prior.pmap");
  save_priormap(path.string(), prior);
  const PriorMap back = load_priormap(path.string());
  CHECK((back.crack == prior.crack).all());
  CHECK((back.background == prior.background).all());
}
