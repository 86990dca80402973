#include "stegcol/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace stegcol {
namespace {

// Logits are capped so scores stay strictly inside (0, 1).
constexpr double kLogitCap = 30.0;

double sigmoid(double s) {
  s = std::clamp(s, -kLogitCap, kLogitCap);
  return 1.0 / (1.0 + std::exp(-s));
}

double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))); }

Eigen::VectorXd to_vector(std::span<const int> labels) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("labels must be 0 or 1");
    y[static_cast<Eigen::Index>(i)] = labels[i];
  }
  return y;
}

}  // namespace

Eigen::MatrixXd Standardization::apply(const Eigen::MatrixXd& features) const {
  if (static_cast<std::size_t>(features.cols()) != input_dim) {
    throw std::invalid_argument(fmt::format("standardization: expected {} columns, got {}", input_dim,
                                            features.cols()));
  }
  Eigen::MatrixXd z(features.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(k);
    z.col(j) = (features.col(static_cast<Eigen::Index>(columns[k])).array() - mean[j]) / stddev[j];
  }
  return z;
}

Standardization standardize_fit(const Eigen::MatrixXd& features) {
  if (features.rows() < 2) throw std::invalid_argument("standardize_fit: need at least 2 rows");
  Standardization s;
  s.input_dim = static_cast<std::size_t>(features.cols());
  std::vector<double> means;
  std::vector<double> sds;
  const double n = static_cast<double>(features.rows());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double m = features.col(j).sum() / n;
    const double sd = std::sqrt((features.col(j).array() - m).square().sum() / n);
    if (sd <= 1e-12 * std::max(1.0, std::abs(m))) {
      s.dropped.push_back(static_cast<std::size_t>(j));
      continue;
    }
    s.columns.push_back(static_cast<std::size_t>(j));
    means.push_back(m);
    sds.push_back(sd);
  }
  s.mean = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
  s.stddev = Eigen::Map<Eigen::VectorXd>(sds.data(), static_cast<Eigen::Index>(sds.size()));
  return s;
}

LossGradient logistic_loss(const Eigen::MatrixXd& z, const Eigen::VectorXd& labels,
                           const Eigen::VectorXd& weights, double bias, double l2) {
  const double n = static_cast<double>(z.rows());
  const Eigen::VectorXd s = (z * weights).array() + bias;
  Eigen::VectorXd residual(s.size());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    loss += softplus(s[i]) - labels[i] * s[i];
    residual[i] = 1.0 / (1.0 + std::exp(-s[i])) - labels[i];
  }
  LossGradient out;
  out.loss = loss / n + 0.5 * l2 * weights.squaredNorm();
  out.grad_weights = z.transpose() * residual / n + l2 * weights;
  out.grad_bias = residual.sum() / n;
  return out;
}

LinearModel train(const Eigen::MatrixXd& features, std::span<const int> labels,
                  const TrainParams& params, std::vector<double>* loss_trace) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("train: feature rows and labels differ in count");
  }
  const Eigen::VectorXd y = to_vector(labels);
  const double positives = y.sum();
  if (positives == 0.0 || positives == static_cast<double>(y.size())) {
    throw std::invalid_argument("train: both classes must be present");
  }
  if (params.epochs < 0 || !(params.learning_rate > 0.0) || params.l2 < 0.0) {
    throw std::invalid_argument("train: invalid hyperparameters");
  }

  LinearModel model;
  model.standardization = standardize_fit(features);
  const Eigen::MatrixXd z = model.standardization.apply(features);
  model.weights = Eigen::VectorXd::Zero(z.cols());
  model.bias = 0.0;

  if (loss_trace) loss_trace->clear();
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const auto g = logistic_loss(z, y, model.weights, model.bias, params.l2);
    if (loss_trace) loss_trace->push_back(g.loss);
    model.weights -= params.learning_rate * g.grad_weights;
    model.bias -= params.learning_rate * g.grad_bias;
  }
  if (loss_trace) loss_trace->push_back(logistic_loss(z, y, model.weights, model.bias, params.l2).loss);
  return model;
}

Prediction predict(const LinearModel& model, std::span<const double> row) {
  const auto& st = model.standardization;
  if (row.size() != st.input_dim) {
    throw std::invalid_argument(fmt::format("predict: expected {} features, got {}", st.input_dim, row.size()));
  }
  double s = model.bias;
  for (std::size_t k = 0; k < st.columns.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(k);
    s += model.weights[j] * (row[st.columns[k]] - st.mean[j]) / st.stddev[j];
  }
  const double score = sigmoid(s);
  return Prediction{score >= 0.5 ? 1 : 0, score};
}

EvalReport evaluate(const LinearModel& model, const Eigen::MatrixXd& features,
                    std::span<const int> labels) {
  if (features.rows() == 0) throw std::invalid_argument("evaluate: empty test set");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("evaluate: feature rows and labels differ in count");
  }
  EvalReport r;
  std::vector<double> row(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    Eigen::Map<Eigen::RowVectorXd>(row.data(), features.cols()) = features.row(i);
    const int predicted = predict(model, row).label;
    ++r.confusion[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])][static_cast<std::size_t>(predicted)];
  }
  const long tn = r.confusion[0][0], fp = r.confusion[0][1];
  const long fn = r.confusion[1][0], tp = r.confusion[1][1];
  r.accuracy = static_cast<double>(tp + tn) / static_cast<double>(features.rows());
  r.true_positive_rate = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.true_negative_rate = tn + fp > 0 ? static_cast<double>(tn) / static_cast<double>(tn + fp) : 0.0;
  return r;
}

std::string save_model(const LinearModel& model) {
  const auto& st = model.standardization;
  std::string out = "model=logistic\n";
  out += fmt::format("input_dim={}\nkept={}\nbias={:.17g}\n", st.input_dim, st.columns.size(), model.bias);
  out += "[columns]\n";
  for (std::size_t c : st.columns) out += fmt::format("{}\n", c);
  auto list = [&](const char* name, const Eigen::VectorXd& v) {
    out += fmt::format("[{}]\n", name);
    for (Eigen::Index i = 0; i < v.size(); ++i) out += fmt::format("{:.17g}\n", v[i]);
  };
  list("mean", st.mean);
  list("stddev", st.stddev);
  list("weights", model.weights);
  return out;
}

LinearModel load_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto expect_key = [&](const std::string& key) {
    if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0) {
      throw std::runtime_error("model: expected key '" + key + "'");
    }
    return line.substr(key.size() + 1);
  };
  if (expect_key("model") != "logistic") throw std::runtime_error("model: unsupported model type");
  LinearModel m;
  m.standardization.input_dim = std::stoull(expect_key("input_dim"));
  const std::size_t kept = std::stoull(expect_key("kept"));
  m.bias = std::stod(expect_key("bias"));

  auto read_section = [&](const std::string& name) {
    if (!std::getline(in, line) || line != "[" + name + "]") {
      throw std::runtime_error("model: expected section [" + name + "]");
    }
    std::vector<std::string> values;
    for (std::size_t i = 0; i < kept; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("model: section [" + name + "] is short");
      values.push_back(line);
    }
    return values;
  };
  auto to_eigen = [&](const std::vector<std::string>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = std::stod(v[i]);
    return out;
  };
  for (const auto& c : read_section("columns")) m.standardization.columns.push_back(std::stoull(c));
  m.standardization.mean = to_eigen(read_section("mean"));
  m.standardization.stddev = to_eigen(read_section("stddev"));
  m.weights = to_eigen(read_section("weights"));
  std::vector<bool> kept_mask(m.standardization.input_dim, false);
  for (std::size_t c : m.standardization.columns) {
    if (c >= m.standardization.input_dim) throw std::runtime_error("model: column index out of range");
    kept_mask[c] = true;
  }
  for (std::size_t c = 0; c < kept_mask.size(); ++c) {
    if (!kept_mask[c]) m.standardization.dropped.push_back(c);
  }
  return m;
}

}  // namespace stegcol
