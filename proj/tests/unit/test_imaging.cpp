/*
 * Copyright 2026 The Jigsaw-RL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <fstream>

#include "fixtures.hpp"
#include "jigsaw/core/errors.hpp"
#include "jigsaw/core/imaging.hpp"

using namespace jigsaw;

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path fixture(const char* name) { return testing::source_dir() / "tests/fixtures/images" / name; }

}  // namespace

TEST_CASE("png decode matches an independent decoder") {
  const auto img = load_image(fixture("rgb.png"));
  CHECK(img.width() == 16);
  CHECK(img.height() == 12);
  const auto want = read_bytes(fixture("rgb_png_decoded.rgb"));
  CHECK(std::vector<std::uint8_t>(img.bytes().begin(), img.bytes().end()) == want);
}

TEST_CASE("alpha is dropped and gray is expanded") {
  const auto rgb = load_image(fixture("rgb.png"));
  CHECK(load_image(fixture("rgba.png")) == rgb);
  const auto gray = load_image(fixture("gray.png"));
  CHECK(gray.width() == 16);
  for (int x = 0; x < 16; ++x) {
    const auto p = gray.at(x, 3);
    CHECK(p.r == rgb.at(x, 3).r);
    CHECK(p.g == p.r);
    CHECK(p.b == p.r);
  }
}

TEST_CASE("jpeg decode is close to an independent decoder") {
  const auto img = load_image(fixture("rgb.jpg"));
  const auto want = read_bytes(fixture("rgb_jpg_decoded.rgb"));
  REQUIRE(img.bytes().size() == want.size());
  int worst = 0;
  for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(int(img.bytes()[i]) - int(want[i])));
  CHECK(worst <= 2);
  CHECK(load_image(fixture("gray.jpg")).width() == 16);
}

TEST_CASE("unsupported or broken files raise IoError") {
  CHECK_THROWS_AS(load_image(fixture("cmyk.jpg")), IoError);
  CHECK_THROWS_AS(load_image(fixture("truncated.png")), IoError);
  CHECK_THROWS_AS(load_image(fixture("missing.png")), IoError);
  testing::TempDir dir("img");
  std::ofstream(dir.path() / "text.png") << "not an image";
  CHECK_THROWS_AS(load_image(dir.path() / "text.png"), IoError);
}

TEST_CASE("png encode round-trips") {
  testing::TempDir dir("png");
  const auto img = testing::noise_image(37, 23, 5);
  save_png(img, dir.path() / "a.png");
  CHECK(load_image(dir.path() / "a.png") == img);
  CHECK(encode_png(img) == encode_png(img));
}

TEST_CASE("trim removes the bottom and right remainder") {
  const auto img = testing::noise_image(101, 55, 1);
  const auto t = trim_to_grid(img, GridSpec(2, 3));
  CHECK(t.width() == 99);
  CHECK(t.height() == 54);
  for (int y = 0; y < 54; y += 7) {
    for (int x = 0; x < 99; x += 5) CHECK(t.at(x, y) == img.at(x, y));
  }
  CHECK_THROWS_AS(trim_to_grid(testing::noise_image(2, 2, 1), GridSpec(3, 1)), InvalidInput);
}

TEST_CASE("composed slots hold the mapped source patch, pixel by pixel") {
  const GridSpec g(2, 3);
  const auto src = testing::noise_image(60, 40, 2);
  const auto patches = slice_patches(src, g);
  const Permutation perm({5, 3, 1, 6, 2, 4});
  for (const auto& mask : {MaskConfig::none(), MaskConfig::with_gap(3, {255, 0, 255})}) {
    const auto out = compose_shuffled(patches, perm, g, mask);
    const int gap = mask.enabled ? mask.gap_px : 0;
    CHECK(out.width() == 60 + 2 * gap);
    CHECK(out.height() == 40 + gap);
    for (int x = 1; x <= 6; ++x) {
      const int sr = (x - 1) / 3;
      const int sc = (x - 1) % 3;
      const int o = perm[x];
      const int or_ = (o - 1) / 3;
      const int oc = (o - 1) % 3;
      for (int py = 0; py < 20; ++py) {
        for (int px = 0; px < 20; ++px) {
          REQUIRE(out.at(sc * (20 + gap) + px, sr * (20 + gap) + py) == src.at(oc * 20 + px, or_ * 20 + py));
        }
      }
    }
    if (mask.enabled) {
      CHECK(out.at(20, 0) == Rgb{255, 0, 255});
      CHECK(out.at(0, 20) == Rgb{255, 0, 255});
    }
    CHECK(unshuffle(out, perm, g, mask) == src);
  }
}

TEST_CASE("mask config rejects negative gaps") {
  CHECK_THROWS_AS(MaskConfig::with_gap(-1), ConfigError);
  CHECK_FALSE(MaskConfig::with_gap(0).enabled);
}

TEST_CASE("box swap moves patches between rects") {
  const auto img = testing::noise_image(40, 40, 3);
  const std::vector<PixelRect> rects{{0, 0, 10, 10}, {25, 5, 35, 15}, {3, 22, 13, 32}, {28, 28, 38, 38}};
  const Permutation swap({2, 1, 4, 3});
  const auto out = render_box_swap(img, rects, swap);
  for (int s = 1; s <= 4; ++s) {
    const auto& dst = rects[static_cast<std::size_t>(s - 1)];
    const auto& from = rects[static_cast<std::size_t>(swap[s] - 1)];
    CHECK(out.crop(dst) == img.crop(from));
  }
  CHECK(out.at(20, 20) == img.at(20, 20));
  const std::vector<PixelRect> uneven{{0, 0, 10, 10}, {0, 0, 11, 10}};
  CHECK_THROWS_AS(render_box_swap(img, uneven, Permutation({2, 1})), InvalidInput);
}
