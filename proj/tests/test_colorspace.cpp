#include <doctest.h>

#include <cmath>
#include <vector>

#include "stegcol/colorspace.hpp"
#include "stegcol/rng.hpp"

using namespace stegcol;

namespace {

struct Reference {
  Triple rgb;
  Triple hsv;  // hue in degrees
  Triple xyz;
  Triple lab;
};

// HSV from Python's colorsys, XYZ and Lab from scikit-image (D65). The
// scikit-image matrix is rounded to six places, so XYZ and Lab carry a small
// tolerance.
const Reference kReference[] = {
    {{1, 0, 0}, {0, 1, 1}, {0.412453, 0.212671, 0.019334}, {53.2405879437449, 80.0923082256922, 67.2027510444287}},
    {{0, 1, 0}, {120, 1, 1}, {0.35758, 0.71516, 0.119193}, {87.73509948831895, -86.18302974439501, 83.17970317538452}},
    {{0, 0, 1}, {240, 1, 1}, {0.180423, 0.072169, 0.950227}, {32.29567256501351, 79.18559091176556, -107.85730020669489}},
    {{0.2, 0.5, 0.8}, {210, 0.75, 0.8}, {0.19913533125839458, 0.20369170105652099, 0.5999252939328713},
     {52.25206057904583, 2.7760227272805027, -46.28571385678306}},
    {{0.9, 0.7, 0.1}, {45, 0.888888888888889, 0.9}, {0.4867706057777538, 0.4885664893389053, 0.07814487152489133},
     {75.36205952196616, 6.233625099090312, 74.40629225085516}},
};

void check_close(const Triple& got, const Triple& want, double tol) {
  for (int c = 0; c < 3; ++c) CHECK(std::abs(got[c] - want[c]) <= tol);
}

Triple random_rgb(RngStream& rng) { return {rng.uniform(), rng.uniform(), rng.uniform()}; }

}  // namespace

TEST_CASE("forward transforms match reference values") {
  for (const auto& r : kReference) {
    check_close(rgb_to_hsv(r.rgb), r.hsv, 1e-12);
    check_close(rgb_to_xyz(r.rgb), r.xyz, 1e-4);
    check_close(xyz_to_lab(rgb_to_xyz(r.rgb)), r.lab, 0.02);
  }
}

TEST_CASE("luma-chroma transforms") {
  const double off = 128.0 / 255.0;
  check_close(rgb_to_ycbcr({1, 0, 0}), {0.299, off - 0.168736, off + 0.5}, 1e-12);
  check_close(rgb_to_ycbcr({0.5019607843137255, 0.5019607843137255, 0.5019607843137255}), {off, off, off}, 1e-12);
  check_close(rgb_to_yuv({1, 0, 0}), {0.299, 0.5 + 0.492 * -0.299, 0.5 + 0.877 * 0.701}, 1e-12);
  // Agrees with scikit-image's YUV matrix to its rounding.
  const Triple sk = {0.4445, 0.174945462, -0.21449569200000002};
  const Triple ours = rgb_to_yuv({0.2, 0.5, 0.8});
  check_close({ours[0], ours[1] - 0.5, ours[2] - 0.5}, sk, 1e-3);
}

TEST_CASE("white and black anchor points") {
  check_close(xyz_to_lab(rgb_to_xyz({1, 1, 1})), {100, 0, 0}, 1e-9);
  check_close(xyz_to_lab(rgb_to_xyz({0, 0, 0})), {0, 0, 0}, 1e-9);
  const auto hsv_gray = rgb_to_hsv({0.3, 0.3, 0.3});
  CHECK(hsv_gray[0] == 0.0);
  CHECK(hsv_gray[1] == 0.0);
}

TEST_CASE("round trips through every colorspace") {
  RngStream rng(31);
  for (int i = 0; i < 20000; ++i) {
    const Triple rgb = random_rgb(rng);
    for (ColorSpace s : kAllColorSpaces) {
      const Triple back = to_rgb_pixel(convert_pixel(rgb, s), s);
      const bool via_xyz = s == ColorSpace::XYZ || s == ColorSpace::Lab;
      for (int c = 0; c < 3; ++c) CHECK(std::abs(back[c] - rgb[c]) <= (via_xyz ? 1e-3 : 1e-4));
    }
  }
}

TEST_CASE("round trip on the full 8-bit cube quantizes back exactly") {
  for (int r = 0; r < 256; r += 5) {
    for (int g = 0; g < 256; g += 3) {
      for (int b = 0; b < 256; b += 7) {
        const Triple rgb{r / 255.0, g / 255.0, b / 255.0};
        for (ColorSpace s : kAllColorSpaces) {
          const Triple back = to_rgb_pixel(convert_pixel(rgb, s), s);
          CHECK(std::lround(back[0] * 255.0) == r);
          CHECK(std::lround(back[1] * 255.0) == g);
          CHECK(std::lround(back[2] * 255.0) == b);
        }
      }
    }
  }
}

TEST_CASE("converted channels stay inside their nominal ranges") {
  RngStream rng(8);
  for (int i = 0; i < 20000; ++i) {
    const Triple rgb = random_rgb(rng);
    for (ColorSpace s : kAllColorSpaces) {
      const auto v = convert_pixel(rgb, s);
      const auto ranges = channel_ranges(s);
      for (int c = 0; c < 3; ++c) {
        CHECK(v[c] >= ranges[c].lo - 1e-9);
        CHECK(v[c] <= ranges[c].hi + 1e-9);
      }
    }
  }
}

TEST_CASE("convert and convert_all") {
  ImageRGB img(4, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 17);
  const auto planar = convert(img, ColorSpace::Lab);
  CHECK(planar.width == 4);
  CHECK(planar.height == 3);
  for (const auto& ch : planar.channels) CHECK(ch.size() == 12);
  const Triple px{img.at(2, 1, 0) / 255.0, img.at(2, 1, 1) / 255.0, img.at(2, 1, 2) / 255.0};
  const Triple want = convert_pixel(px, ColorSpace::Lab);
  for (int c = 0; c < 3; ++c) CHECK(planar.channels[c][1 * 4 + 2] == want[c]);

  const std::vector<ColorSpace> two{ColorSpace::HSV, ColorSpace::RGB};
  const auto all = convert_all(img, two);
  REQUIRE(all.size() == 2);
  CHECK(all[0].space == ColorSpace::HSV);
  CHECK_THROWS_AS(convert_all(img, std::vector<ColorSpace>{}), std::invalid_argument);
  CHECK_THROWS_AS(convert_all(img, std::vector<ColorSpace>{ColorSpace::RGB, ColorSpace::RGB}),
                  std::invalid_argument);
}

TEST_CASE("names parse back") {
  for (ColorSpace s : kAllColorSpaces) CHECK(parse_colorspace(to_string(s)) == s);
  CHECK_THROWS(parse_colorspace("CMYK"));
}

TEST_CASE("gray inputs have no saturation and no Lab chroma") {
  for (int v = 0; v < 256; ++v) {
    const Triple gray{v / 255.0, v / 255.0, v / 255.0};
    CHECK(rgb_to_hsv(gray)[1] == 0.0);
    const auto lab = xyz_to_lab(rgb_to_xyz(gray));
    CHECK(std::abs(lab[1]) <= 1e-3);
    CHECK(std::abs(lab[2]) <= 1e-3);
  }
}
