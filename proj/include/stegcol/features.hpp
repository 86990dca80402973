#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stegcol/colorspace.hpp"

namespace stegcol {

/// Read-only view of one real-valued plane, row-major.
struct PlaneView {
  std::span<const double> values;
  int width = 0;
  int height = 0;
};

inline constexpr int kResidualTruncation = 2;
inline constexpr int kBinsPerHistogram = (2 * kResidualTruncation + 1) * (2 * kResidualTruncation + 1);
inline constexpr int kDirections = 4;
inline constexpr int kFeaturesPerPlane = kDirections * kBinsPerHistogram;  // 100
inline constexpr int kFeaturesPerSpace = 3 * kFeaturesPerPlane;             // 300

/// Short names of the residual directions: right, down, down-right, down-left.
inline constexpr const char* kDirectionNames[kDirections] = {"h", "v", "d", "a"};

/// Truncated first-order residual co-occurrence features of one plane.
///
/// The plane is mapped linearly from `range` to [0,255]; without a range the
/// plane's own min and max are used (a constant plane maps to 0). For
/// each direction d the residual R(p) = X(p) - X(p + d) is rounded and
/// truncated to [-2, 2], and the pairs (R(p), R(p + d)) fill a 5x5 joint
/// histogram normalized to sum 1. Bin index is (r1 + 2) * 5 + (r2 + 2).
/// Returns 4 * 25 values; throws for planes smaller than 3x3.
std::vector<double> residual_features(PlaneView plane, std::optional<ValueRange> range = std::nullopt);

/// 300 values per colorspace: the residual features of its three channels,
/// each scaled by the channel's nominal range.
std::vector<std::vector<double>> extract(const ImageRGB& image, std::span<const ColorSpace> spaces);

enum class AggregationMode { concat, weighted_average };

const char* to_string(AggregationMode mode) noexcept;
AggregationMode parse_aggregation(std::string_view name);

struct AggregationConfig {
  AggregationMode mode = AggregationMode::concat;
  std::vector<double> weights;

  static AggregationConfig uniform(AggregationMode mode, std::size_t spaces);
  void validate(std::size_t spaces) const;
};

struct FeatureBlock {
  std::string label;
  std::size_t offset = 0;
  std::size_t length = 0;
  double weight = 1.0;
};

struct FeatureVector {
  std::vector<double> values;
  std::vector<FeatureBlock> layout;
};

/// concat lays w_c * f_c end to end; weighted_average returns sum_c w_c * f_c.
FeatureVector aggregate(std::span<const std::vector<double>> per_space,
                        std::span<const ColorSpace> spaces, const AggregationConfig& config);

/// Column names matching aggregate()'s output, e.g. "Lab.c2.v.-1.+2".
std::vector<std::string> feature_names(std::span<const ColorSpace> spaces, AggregationMode mode);

}  // namespace stegcol
