#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "stegcol/features.hpp"
#include "stegcol/stego.hpp"

using namespace stegcol;

namespace {

constexpr int bin(int r1, int r2) { return (r1 + 2) * 5 + (r2 + 2); }

double block_sum(const std::vector<double>& v, std::size_t offset) {
  return std::accumulate(v.begin() + static_cast<long>(offset),
                         v.begin() + static_cast<long>(offset + kBinsPerHistogram), 0.0);
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace

TEST_CASE("constant plane is a point mass at the center bin") {
  const std::vector<double> plane(25, 0.4);
  const auto f = residual_features({plane, 5, 5});
  REQUIRE(f.size() == 100);
  for (int d = 0; d < kDirections; ++d) {
    for (int k = 0; k < kBinsPerHistogram; ++k) CHECK(f[d * 25 + k] == (k == bin(0, 0) ? 1.0 : 0.0));
  }
}

TEST_CASE("vertical stripe worked example") {
  // Columns alternate 0 / 255 on a 4x4 plane. Horizontal residuals are
  // -255, +255, -255 in every row, truncated to -2, +2, -2: two pairs per row,
  // (-2,+2) and (+2,-2). Vertical residuals vanish. Both diagonals see the
  // same alternation as the horizontal direction.
  std::vector<double> plane(16);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) plane[y * 4 + x] = (x % 2) ? 255.0 : 0.0;
  const auto f = residual_features({plane, 4, 4});
  for (int d : {0, 2, 3}) {
    CHECK(f[d * 25 + bin(-2, 2)] == 0.5);
    CHECK(f[d * 25 + bin(2, -2)] == 0.5);
    CHECK(block_sum(f, d * 25) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(f[25 + bin(0, 0)] == 1.0);
}

TEST_CASE("an explicit range scales before rounding") {
  // Plane values 0 and 1/255 in a [0,1] range map to 0 and 1 gray level.
  std::vector<double> plane(9, 0.0);
  plane[4] = 1.0 / 255.0;
  const auto f = residual_features({plane, 3, 3}, ValueRange{0.0, 1.0});
  // Horizontal pairs: row 1 has residuals (0-1, 1-0) = (-1, +1).
  CHECK(f[bin(-1, 1)] == doctest::Approx(1.0 / 3.0));
  CHECK(f[bin(0, 0)] == doctest::Approx(2.0 / 3.0));
  // Min-max scaling would inflate the step to 255.
  const auto g = residual_features({plane, 3, 3});
  CHECK(g[bin(-2, 2)] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("residual_features rejects small or inconsistent planes") {
  const std::vector<double> small(6, 0.0);
  CHECK_THROWS_AS(residual_features({small, 3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(residual_features({small, 3, 3}), std::invalid_argument);
}

TEST_CASE("extract shapes, histogram normalization and determinism") {
  const ImageRGB img = synth_cover(32, 24, 5);
  const auto f = extract(img, kAllColorSpaces);
  REQUIRE(f.size() == 6);
  for (const auto& v : f) {
    REQUIRE(v.size() == kFeaturesPerSpace);
    for (std::size_t b = 0; b < v.size(); b += kBinsPerHistogram)
      CHECK(block_sum(v, b) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : v) CHECK((std::isfinite(x) && x >= 0.0));
  }
  CHECK(extract(img, kAllColorSpaces) == f);
}

TEST_CASE("gray image gives identical RGB channel blocks") {
  ImageRGB img(20, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>((x * 7 + y * 3) % 256);
  const std::vector<ColorSpace> rgb{ColorSpace::RGB};
  const auto f = extract(img, rgb)[0];
  CHECK(std::equal(f.begin(), f.begin() + 100, f.begin() + 100));
  CHECK(std::equal(f.begin(), f.begin() + 100, f.begin() + 200));
}

TEST_CASE("aggregate concat layout and block sums") {
  const auto per_space = extract(synth_cover(24, 24, 9), kAllColorSpaces);
  AggregationConfig cfg{AggregationMode::concat, {0.1, 0.2, 0.3, 0.1, 0.2, 0.1}};
  const auto fv = aggregate(per_space, kAllColorSpaces, cfg);
  REQUIRE(fv.values.size() == 1800);
  REQUIRE(fv.layout.size() == 6);
  for (std::size_t s = 0; s < 6; ++s) {
    CHECK(fv.layout[s].label == to_string(kAllColorSpaces[s]));
    CHECK(fv.layout[s].offset == s * 300);
    CHECK(fv.layout[s].length == 300);
    for (std::size_t b = 0; b < 300; b += 25)
      CHECK(block_sum(fv.values, s * 300 + b) == doctest::Approx(cfg.weights[s]).epsilon(1e-12));
  }
}

TEST_CASE("weighted average identities") {
  const auto per_space = extract(synth_cover(24, 24, 10), kAllColorSpaces);
  const std::vector<std::vector<double>> same(6, per_space[2]);
  const auto avg = aggregate(same, kAllColorSpaces, AggregationConfig::uniform(AggregationMode::weighted_average, 6));
  REQUIRE(avg.values.size() == 300);
  for (std::size_t i = 0; i < 300; ++i) CHECK(avg.values[i] == doctest::Approx(per_space[2][i]).epsilon(1e-14));

  const auto first = aggregate(per_space, kAllColorSpaces,
                               AggregationConfig{AggregationMode::weighted_average, {1, 0, 0, 0, 0, 0}});
  CHECK(first.values == per_space[0]);
}

TEST_CASE("weighted average is invariant to joint permutation of spaces and weights") {
  const auto per_space = extract(synth_cover(24, 24, 11), kAllColorSpaces);
  const std::vector<double> w{0.05, 0.25, 0.1, 0.3, 0.2, 0.1};
  const auto base = aggregate(per_space, kAllColorSpaces, AggregationConfig{AggregationMode::weighted_average, w});
  std::vector<std::size_t> order{3, 0, 5, 1, 4, 2};
  std::vector<std::vector<double>> ps;
  std::vector<ColorSpace> spaces;
  std::vector<double> pw;
  for (auto i : order) {
    ps.push_back(per_space[i]);
    spaces.push_back(kAllColorSpaces[i]);
    pw.push_back(w[i]);
  }
  const auto perm = aggregate(ps, spaces, AggregationConfig{AggregationMode::weighted_average, pw});
  for (std::size_t i = 0; i < 300; ++i) CHECK(perm.values[i] == doctest::Approx(base.values[i]).epsilon(1e-14));
}

TEST_CASE("aggregation config validation") {
  CHECK_THROWS(AggregationConfig{AggregationMode::concat, {0.5, 0.5}}.validate(3));
  CHECK_THROWS(AggregationConfig{AggregationMode::concat, {0.5, 0.6}}.validate(2));
  CHECK_THROWS(AggregationConfig{AggregationMode::concat, {1.5, -0.5}}.validate(2));
  CHECK_NOTHROW(AggregationConfig::uniform(AggregationMode::concat, 6).validate(6));
  const auto per_space = extract(synth_cover(16, 16, 1), kAllColorSpaces);
  CHECK_THROWS(aggregate(per_space, std::span(kAllColorSpaces).first(5),
                         AggregationConfig::uniform(AggregationMode::concat, 5)));
  CHECK(parse_aggregation("weighted_average") == AggregationMode::weighted_average);
  CHECK_THROWS(parse_aggregation("max"));
}

TEST_CASE("feature names are unique and sized to the output") {
  const auto concat = feature_names(kAllColorSpaces, AggregationMode::concat);
  CHECK(concat.size() == 1800);
  CHECK(std::set<std::string>(concat.begin(), concat.end()).size() == 1800);
  CHECK(std::find(concat.begin(), concat.end(), "Lab.c2.v.-1.+2") != concat.end());
  for (const auto& n : concat) CHECK(n.find(',') == std::string::npos);
  CHECK(feature_names(kAllColorSpaces, AggregationMode::weighted_average).size() == 300);
}

TEST_CASE("stronger payloads move features further") {
  int ordered = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ImageRGB cover = synth_cover(64, 64, 1000 + seed);
    const auto fc = extract(cover, kAllColorSpaces);
    const auto f2 = extract(embed_lsbm(cover, {0.2, seed}), kAllColorSpaces);
    const auto f4 = extract(embed_lsbm(cover, {0.4, seed}), kAllColorSpaces);
    double d2 = 0.0, d4 = 0.0;
    for (std::size_t s = 0; s < 6; ++s) {
      d2 += l1(fc[s], f2[s]);
      d4 += l1(fc[s], f4[s]);
    }
    if (d4 > d2) ++ordered;
  }
  CHECK(ordered >= 40);
}
