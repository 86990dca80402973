#include "stegcol/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace stegcol {
namespace {

struct Offset {
  int dx;
  int dy;
};
constexpr Offset kOffsets[kDirections] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};

}  // namespace

std::vector<double> residual_features(PlaneView plane, std::optional<ValueRange> range) {
  const int w = plane.width;
  const int h = plane.height;
  if (w < 3 || h < 3) throw std::invalid_argument("residual_features: plane must be at least 3x3");
  if (plane.values.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
    throw std::invalid_argument("residual_features: plane size mismatch");
  }

  if (!range) {
    const auto [lo, hi] = std::minmax_element(plane.values.begin(), plane.values.end());
    range = ValueRange{*lo, *hi};
  }
  const double span = range->hi - range->lo;
  const double scale = span > 0.0 ? 255.0 / span : 0.0;
  const double lo = range->lo;
  std::vector<double> x(plane.values.size());
  std::transform(plane.values.begin(), plane.values.end(), x.begin(),
                 [&](double v) { return (v - lo) * scale; });
  auto at = [&](int cx, int cy) { return x[static_cast<std::size_t>(cy) * w + cx]; };
  auto quantize = [](double r) {
    const double q = std::clamp(std::round(r), -double(kResidualTruncation), double(kResidualTruncation));
    return static_cast<int>(q) + kResidualTruncation;
  };

  std::vector<double> out(kFeaturesPerPlane, 0.0);
  for (int d = 0; d < kDirections; ++d) {
    const auto [dx, dy] = kOffsets[d];
    double* hist = out.data() + d * kBinsPerHistogram;
    std::size_t count = 0;
    for (int y = 0; y + 2 * dy < h; ++y) {
      for (int x0 = 0; x0 < w; ++x0) {
        const int x1 = x0 + dx;
        const int x2 = x0 + 2 * dx;
        if (x2 < 0 || x2 >= w) continue;
        const int r1 = quantize(at(x0, y) - at(x1, y + dy));
        const int r2 = quantize(at(x1, y + dy) - at(x2, y + 2 * dy));
        hist[r1 * (2 * kResidualTruncation + 1) + r2] += 1.0;
        ++count;
      }
    }
    for (int b = 0; b < kBinsPerHistogram; ++b) hist[b] /= static_cast<double>(count);
  }
  return out;
}

std::vector<std::vector<double>> extract(const ImageRGB& image, std::span<const ColorSpace> spaces) {
  const auto planes = convert_all(image, spaces);
  std::vector<std::vector<double>> out;
  out.reserve(planes.size());
  for (const auto& p : planes) {
    std::vector<double> v;
    v.reserve(kFeaturesPerSpace);
    const auto ranges = channel_ranges(p.space);
    for (int c = 0; c < 3; ++c) {
      const auto f = residual_features(PlaneView{p.channels[c], p.width, p.height}, ranges[c]);
      v.insert(v.end(), f.begin(), f.end());
    }
    out.push_back(std::move(v));
  }
  return out;
}

const char* to_string(AggregationMode mode) noexcept {
  return mode == AggregationMode::concat ? "concat" : "weighted_average";
}

AggregationMode parse_aggregation(std::string_view name) {
  if (name == "concat") return AggregationMode::concat;
  if (name == "weighted_average") return AggregationMode::weighted_average;
  throw std::invalid_argument("unknown aggregation mode '" + std::string(name) + "'");
}

AggregationConfig AggregationConfig::uniform(AggregationMode mode, std::size_t spaces) {
  return AggregationConfig{mode, std::vector<double>(spaces, 1.0 / static_cast<double>(spaces))};
}

void AggregationConfig::validate(std::size_t spaces) const {
  if (weights.size() != spaces) {
    throw std::invalid_argument(fmt::format("aggregation: {} weights for {} colorspaces",
                                            weights.size(), spaces));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("aggregation: weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("aggregation: weights must sum to 1");
}

FeatureVector aggregate(std::span<const std::vector<double>> per_space,
                        std::span<const ColorSpace> spaces, const AggregationConfig& config) {
  if (per_space.empty()) throw std::invalid_argument("aggregate: no feature vectors");
  if (per_space.size() != spaces.size()) {
    throw std::invalid_argument("aggregate: feature/colorspace count mismatch");
  }
  config.validate(per_space.size());
  const std::size_t len = per_space.front().size();
  for (const auto& v : per_space) {
    if (v.size() != len) throw std::invalid_argument("aggregate: feature vectors differ in length");
  }

  FeatureVector out;
  if (config.mode == AggregationMode::concat) {
    out.values.reserve(len * per_space.size());
    for (std::size_t c = 0; c < per_space.size(); ++c) {
      const double w = config.weights[c];
      out.layout.push_back(FeatureBlock{to_string(spaces[c]), out.values.size(), len, w});
      for (double v : per_space[c]) out.values.push_back(w * v);
    }
  } else {
    out.values.assign(len, 0.0);
    for (std::size_t c = 0; c < per_space.size(); ++c) {
      for (std::size_t i = 0; i < len; ++i) out.values[i] += config.weights[c] * per_space[c][i];
    }
    out.layout.push_back(FeatureBlock{"avg", 0, len, 1.0});
  }
  return out;
}

std::vector<std::string> feature_names(std::span<const ColorSpace> spaces, AggregationMode mode) {
  std::vector<std::string> prefixes;
  if (mode == AggregationMode::concat) {
    for (ColorSpace s : spaces) prefixes.emplace_back(to_string(s));
  } else {
    prefixes.emplace_back("avg");
  }
  std::vector<std::string> names;
  for (const auto& prefix : prefixes) {
    for (int c = 0; c < 3; ++c) {
      for (int d = 0; d < kDirections; ++d) {
        for (int a = -kResidualTruncation; a <= kResidualTruncation; ++a) {
          for (int b = -kResidualTruncation; b <= kResidualTruncation; ++b) {
            names.push_back(fmt::format("{}.c{}.{}.{:+d}.{:+d}", prefix, c, kDirectionNames[d], a, b));
          }
        }
      }
    }
  }
  return names;
}

}  // namespace stegcol
