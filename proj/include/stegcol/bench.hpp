#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stegcol/gwo.hpp"

namespace stegcol {

/// Sphere function, sum of squares.
double f1(std::span<const double> x);

/// Piecewise quartic wall: k (|x| - a)^m outside [-a, a], zero inside.
double u_penalty(double x, double a, double k, double m);

/// Penalized benchmark:
///   sin^2(3 pi x_1) + sum_i (x_i - 1)^2 [1 + sin^2(3 pi x_i + 1)]
///   + (x_d - 1)^2 [1 + sin^2(2 pi x_d)] + sum_i u(x_i, 5, 100, 4)
/// Requires d >= 2.
double f9(std::span<const double> x);

struct BenchmarkSpec {
  std::string name;
  std::size_t dimension = 0;
  Bounds bounds;
  double known_optimum = 0.0;
  std::vector<double> optimizer_location;
  Objective objective;
};

/// Builds a spec and checks that the objective hits known_optimum at
/// optimizer_location (within 1e-12).
BenchmarkSpec make_benchmark(const std::string& name, std::size_t dimension);

struct TrialStats {
  std::vector<double> per_seed_finals;
  double mean = 0.0;
  double median = 0.0;
  std::pair<double, double> quartiles{0.0, 0.0};
  double min = 0.0;
  double max = 0.0;
};

/// Linear-interpolation quantile (R type 7) of an unsorted sample.
double quantile(std::vector<double> sample, double q);

TrialStats summarize(std::vector<double> finals);

struct TrialsResult {
  TrialStats stats;
  std::vector<std::vector<double>> traces;  // one row per seed, T + 1 columns
};

/// One optimize run per seed; config.bounds is replaced by the spec's box.
TrialsResult run_trials(const BenchmarkSpec& spec, OptimizerConfig config,
                        std::span<const std::uint64_t> seeds);

enum class RankSumMethod { automatic, exact, normal };

struct RankSumResult {
  double u_statistic = 0.0;
  double p_one_sided = 0.0;
  bool exact = false;
};

/// Wilcoxon-Mann-Whitney rank-sum test with midranks. The alternative is
/// that sample_a is stochastically smaller; U counts pairs with a > b.
/// automatic picks exact enumeration when n_a + n_b <= 12.
RankSumResult rank_sum_test(std::span<const double> sample_a, std::span<const double> sample_b,
                            RankSumMethod method = RankSumMethod::automatic);

}  // namespace stegcol
