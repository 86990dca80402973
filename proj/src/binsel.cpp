#include "stegcol/binsel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stegcol {
namespace {

enum Purpose : std::uint64_t { kFoldPurpose = 0x3001, kBinarizePurpose = 0x3002 };

// Cross-validation state shared by every fitness evaluation of one run.
class CrossValidator {
 public:
  CrossValidator(const Dataset& data, const SelectionConfig& config) : data_(data), config_(config) {
    config.validate();
    if (data.labels.size() != static_cast<std::size_t>(data.features.rows())) {
      throw std::invalid_argument("dataset: label count does not match feature rows");
    }
    const long positives = std::count(data.labels.begin(), data.labels.end(), 1);
    if (positives == 0 || positives == static_cast<long>(data.labels.size())) {
      throw std::invalid_argument("dataset: both classes must be present");
    }
    const auto fold_of = stratified_folds(data.labels, config.folds,
                                          mix_key(config.optimizer.seed, {kFoldPurpose}));
    for (int f = 0; f < config.folds; ++f) {
      Fold fold;
      for (std::size_t i = 0; i < fold_of.size(); ++i) {
        auto& rows = fold_of[i] == f ? fold.test_rows : fold.train_rows;
        rows.push_back(static_cast<Eigen::Index>(i));
      }
      for (auto r : fold.train_rows) fold.train_labels.push_back(data.labels[static_cast<std::size_t>(r)]);
      for (auto r : fold.test_rows) fold.test_labels.push_back(data.labels[static_cast<std::size_t>(r)]);
      folds_.push_back(std::move(fold));
    }
  }

  double fitness(const SelectionMask& mask) const {
    const auto d = static_cast<std::size_t>(data_.features.cols());
    if (mask.bits.size() != d) throw std::invalid_argument("selection mask length does not match features");
    const auto cols = mask.indices();
    if (cols.empty()) throw std::invalid_argument("selection mask is empty");

    std::vector<Eigen::Index> col_idx(cols.begin(), cols.end());
    long errors = 0;
    for (const auto& fold : folds_) {
      const Eigen::MatrixXd train_x = data_.features(fold.train_rows, col_idx);
      const Eigen::MatrixXd test_x = data_.features(fold.test_rows, col_idx);
      const auto model = train(train_x, fold.train_labels, config_.classifier);
      const auto report = evaluate(model, test_x, fold.test_labels);
      errors += report.confusion[0][1] + report.confusion[1][0];
    }
    const double cv_error = static_cast<double>(errors) / static_cast<double>(data_.labels.size());
    const double density = static_cast<double>(cols.size()) / static_cast<double>(d);
    return config_.error_weight * cv_error + (1.0 - config_.error_weight) * density;
  }

 private:
  struct Fold {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    std::vector<int> train_labels;
    std::vector<int> test_labels;
  };

  const Dataset& data_;
  const SelectionConfig& config_;
  std::vector<Fold> folds_;
};

// Binarization stream keyed by the position itself, so a position always maps
// to the same mask regardless of which wolf or iteration produced it.
std::uint64_t position_key(std::uint64_t seed, std::span<const double> position) {
  std::uint64_t h = mix_key(seed, {kBinarizePurpose});
  for (double x : position) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(x));
  return h;
}

}  // namespace

std::size_t SelectionMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::vector<std::size_t> SelectionMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

void SelectionConfig::validate() const {
  if (!(error_weight > 0.0 && error_weight <= 1.0)) {
    throw std::invalid_argument("selection: error_weight must lie in (0, 1]");
  }
  if (folds < 2) throw std::invalid_argument("selection: folds must be >= 2");
}

double transfer(double x) { return 1.0 / (1.0 + std::exp(-10.0 * (x - 0.5))); }

SelectionMask binarize(std::span<const double> position, RngStream& rng) {
  SelectionMask mask{std::vector<std::uint8_t>(position.size(), 0)};
  if (position.empty()) return mask;
  std::size_t best = 0;
  for (std::size_t i = 0; i < position.size(); ++i) {
    const double p = transfer(position[i]);
    mask.bits[i] = rng.uniform() < p ? 1 : 0;
    if (p > transfer(position[best])) best = i;
  }
  if (mask.count() == 0) mask.bits[best] = 1;
  return mask;
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("stratified_folds: folds must be >= 2");
  std::vector<int> fold_of(labels.size(), 0);
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) rows.push_back(i);
    }
    if (rows.size() < static_cast<std::size_t>(folds)) {
      throw std::invalid_argument("stratified_folds: a class has fewer rows than folds");
    }
    RngStream rng(mix_key(seed, {static_cast<std::uint64_t>(cls)}));
    for (std::size_t i = rows.size() - 1; i > 0; --i) std::swap(rows[i], rows[rng.below(i + 1)]);
    for (std::size_t k = 0; k < rows.size(); ++k) fold_of[rows[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  }
  return fold_of;
}

double selection_fitness(const SelectionMask& mask, const Dataset& data, const SelectionConfig& config) {
  return CrossValidator(data, config).fitness(mask);
}

SelectionResult select_features(const Dataset& data, const SelectionConfig& config) {
  const auto d = static_cast<std::size_t>(data.features.cols());
  if (d < 2) throw std::invalid_argument("select_features: need at least 2 features");
  const CrossValidator cv(data, config);

  OptimizerConfig opt = config.optimizer;
  opt.bounds = Bounds::box(d, 0.0, 1.0);
  opt.initial_positions = {std::vector<double>(d, 1.0)};
  const std::uint64_t seed = opt.seed;
  auto mask_of = [seed](std::span<const double> position) {
    RngStream rng(position_key(seed, position));
    return binarize(position, rng);
  };

  const auto run = optimize([&](std::span<const double> x) { return cv.fitness(mask_of(x)); }, opt);

  SelectionResult result;
  const double baseline = cv.fitness(SelectionMask::all(d));
  if (baseline < run.best_fitness) {
    result.mask = SelectionMask::all(d);
    result.fitness = baseline;
  } else {
    result.mask = mask_of(run.best_position);
    result.fitness = run.best_fitness;
  }
  result.fitness_trace = run.trace;
  for (double& t : result.fitness_trace) t = std::min(t, baseline);
  return result;
}

}  // namespace stegcol
