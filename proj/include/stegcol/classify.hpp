#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stegcol {

/// Per-column z-score transform fitted on training rows. Constant columns
/// are dropped; mean and stddev are stored for the kept columns only.
struct Standardization {
  std::size_t input_dim = 0;
  std::vector<std::size_t> columns;  // kept input columns, ascending
  std::vector<std::size_t> dropped;  // constant input columns
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;  // population convention, > 0

  /// n x columns.size() standardized matrix.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& features) const;
};

Standardization standardize_fit(const Eigen::MatrixXd& features);

struct TrainParams {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
};

struct LinearModel {
  Standardization standardization;
  Eigen::VectorXd weights;  // one per kept column
  double bias = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd grad_weights;
  double grad_bias = 0.0;
};

/// Mean logistic loss plus (l2 / 2) |w|^2 and its gradient. The bias is not
/// regularized. labels are 0 or 1.
LossGradient logistic_loss(const Eigen::MatrixXd& z, const Eigen::VectorXd& labels,
                           const Eigen::VectorXd& weights, double bias, double l2);

/// Full-batch gradient descent from zero weights. Throws std::invalid_argument
/// unless both classes are present. If loss_trace is given it receives the
/// loss before each epoch and after the last one (epochs + 1 values).
LinearModel train(const Eigen::MatrixXd& features, std::span<const int> labels,
                  const TrainParams& params = {}, std::vector<double>* loss_trace = nullptr);

struct Prediction {
  int label = 0;
  double score = 0.5;  // in (0, 1)
};

Prediction predict(const LinearModel& model, std::span<const double> row);

/// Class 1 (stego) is the positive class.
struct EvalReport {
  double accuracy = 0.0;
  double true_positive_rate = 0.0;
  double true_negative_rate = 0.0;
  /// confusion[actual][predicted]
  std::array<std::array<long, 2>, 2> confusion{};
};

EvalReport evaluate(const LinearModel& model, const Eigen::MatrixXd& features,
                    std::span<const int> labels);

/// Plain-text key=value header followed by one value per line per list.
std::string save_model(const LinearModel& model);
LinearModel load_model(const std::string& text);

}  // namespace stegcol
