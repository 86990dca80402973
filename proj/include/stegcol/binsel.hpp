#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stegcol/classify.hpp"
#include "stegcol/gwo.hpp"
#include "stegcol/rng.hpp"

namespace stegcol {

struct SelectionMask {
  std::vector<std::uint8_t> bits;

  std::size_t count() const noexcept;
  std::vector<std::size_t> indices() const;
  static SelectionMask all(std::size_t d) { return SelectionMask{std::vector<std::uint8_t>(d, 1)}; }
  bool operator==(const SelectionMask&) const = default;
};

struct Dataset {
  Eigen::MatrixXd features;  // one row per sample
  std::vector<int> labels;   // 0 = cover, 1 = stego
};

inline OptimizerConfig default_selection_optimizer() {
  OptimizerConfig c;
  c.variant = GwoVariant::levy;
  c.pack_size = 10;
  c.max_iterations = 30;
  return c;
}

struct SelectionConfig {
  double error_weight = 0.99;
  int folds = 3;
  TrainParams classifier;
  /// Bounds are overwritten with [0,1]^d by select_features.
  OptimizerConfig optimizer = default_selection_optimizer();

  void validate() const;
};

/// S-shaped transfer 1 / (1 + exp(-10 (x - 0.5))).
double transfer(double x);

/// bit_i = uniform < transfer(position_i). An all-zero draw is repaired by
/// setting the bit with the highest transfer probability.
SelectionMask binarize(std::span<const double> position, RngStream& rng);

/// Fold id per row; each class is shuffled and dealt round-robin.
/// Throws if either class has fewer rows than folds.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

/// error_weight * cv_error + (1 - error_weight) * |mask| / d. Lower is better.
/// cv_error is the stratified k-fold error of the logistic classifier on the
/// masked columns; folds are seeded from config.optimizer.seed.
double selection_fitness(const SelectionMask& mask, const Dataset& data, const SelectionConfig& config);

struct SelectionResult {
  SelectionMask mask;
  double fitness = 0.0;
  std::vector<double> fitness_trace;  // best-so-far, max_iterations + 1 values
};

/// Wrapper selection with the grey wolf optimizer over [0,1]^d. One wolf
/// starts at all ones, and the all-ones mask is scored as a baseline, so the
/// result is never worse than keeping every feature.
SelectionResult select_features(const Dataset& data, const SelectionConfig& config);

}  // namespace stegcol
