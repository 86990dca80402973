#include "stegcol/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace stegcol {
namespace {

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// P(U <= u_obs) over all equally likely group assignments of the pooled ranks.
double exact_lower_tail(const std::vector<double>& ranks, std::size_t n_a, double u_obs) {
  const std::size_t n = ranks.size();
  const double offset = static_cast<double>(n_a * (n_a + 1)) / 2.0;
  std::vector<std::size_t> pick(n_a);
  std::iota(pick.begin(), pick.end(), 0);
  std::size_t hits = 0;
  std::size_t total = 0;
  for (;;) {
    double sum = 0.0;
    for (std::size_t k : pick) sum += ranks[k];
    ++total;
    if (sum - offset <= u_obs + 1e-9) ++hits;

    std::size_t i = n_a;
    while (i > 0 && pick[i - 1] == n - n_a + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n_a; ++k) pick[k] = pick[k - 1] + 1;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double normal_lower_tail(const std::vector<double>& ranks, std::size_t n_a, std::size_t n_b,
                         double u_obs) {
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double n = na + nb;

  // Tie correction: sum over tie groups of (t^3 - t).
  std::vector<double> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double mean = na * nb / 2.0;
  const double var = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  const double z = (u_obs - mean + 0.5) / std::sqrt(var);
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace

double f1(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return sum;
}

double u_penalty(double x, double a, double k, double m) {
  if (x > a) return k * std::pow(x - a, m);
  if (x < -a) return k * std::pow(-x - a, m);
  return 0.0;
}

double f9(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("f9: dimension must be >= 2");
  constexpr double pi = std::numbers::pi;
  const std::size_t d = x.size();
  double sum = sin2(3.0 * pi * x[0]);
  for (std::size_t i = 0; i < d; ++i) {
    const double dx = x[i] - 1.0;
    sum += dx * dx * (1.0 + sin2(3.0 * pi * x[i] + 1.0));
  }
  const double last = x[d - 1] - 1.0;
  sum += last * last * (1.0 + sin2(2.0 * pi * x[d - 1]));
  for (double v : x) sum += u_penalty(v, 5.0, 100.0, 4.0);
  return sum;
}

BenchmarkSpec make_benchmark(const std::string& name, std::size_t dimension) {
  BenchmarkSpec spec;
  spec.name = name;
  spec.dimension = dimension;
  if (name == "F1") {
    if (dimension < 1) throw std::invalid_argument("F1: dimension must be >= 1");
    spec.bounds = Bounds::box(dimension, -100.0, 100.0);
    spec.optimizer_location.assign(dimension, 0.0);
    spec.objective = [](std::span<const double> x) { return f1(x); };
  } else if (name == "F9") {
    if (dimension < 2) throw std::invalid_argument("F9: dimension must be >= 2");
    spec.bounds = Bounds::box(dimension, -50.0, 50.0);
    spec.optimizer_location.assign(dimension, 1.0);
    spec.objective = [](std::span<const double> x) { return f9(x); };
  } else {
    throw std::invalid_argument("unknown benchmark function '" + name + "'");
  }
  spec.known_optimum = 0.0;
  if (std::abs(spec.objective(spec.optimizer_location) - spec.known_optimum) > 1e-12) {
    throw std::logic_error("benchmark " + name + ": optimum does not match its location");
  }
  return spec;
}

double quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(sample.begin(), sample.end());
  const double h = q * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

TrialStats summarize(std::vector<double> finals) {
  if (finals.empty()) throw std::invalid_argument("summarize: no samples");
  TrialStats s;
  s.mean = std::accumulate(finals.begin(), finals.end(), 0.0) / static_cast<double>(finals.size());
  s.median = quantile(finals, 0.5);
  s.quartiles = {quantile(finals, 0.25), quantile(finals, 0.75)};
  const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
  s.min = *lo;
  s.max = *hi;
  s.per_seed_finals = std::move(finals);
  return s;
}

TrialsResult run_trials(const BenchmarkSpec& spec, OptimizerConfig config,
                        std::span<const std::uint64_t> seeds) {
  if (seeds.size() < 2) throw std::invalid_argument("run_trials: need at least 2 seeds");
  config.bounds = spec.bounds;
  TrialsResult out;
  std::vector<double> finals;
  for (std::uint64_t seed : seeds) {
    config.seed = seed;
    auto run = optimize(spec.objective, config);
    finals.push_back(run.best_fitness);
    out.traces.push_back(std::move(run.trace));
  }
  out.stats = summarize(std::move(finals));
  return out;
}

RankSumResult rank_sum_test(std::span<const double> sample_a, std::span<const double> sample_b,
                            RankSumMethod method) {
  const std::size_t n_a = sample_a.size();
  const std::size_t n_b = sample_b.size();
  if (n_a < 3 || n_b < 3) throw std::invalid_argument("rank_sum_test: samples need >= 3 values");

  std::vector<double> pooled(sample_a.begin(), sample_a.end());
  pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
  if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); })) {
    throw std::invalid_argument("rank_sum_test: degenerate samples");
  }

  const auto ranks = midranks(pooled);
  const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n_a), 0.0);
  RankSumResult r;
  r.u_statistic = rank_sum_a - static_cast<double>(n_a * (n_a + 1)) / 2.0;

  r.exact = method == RankSumMethod::exact ||
            (method == RankSumMethod::automatic && n_a + n_b <= 12);
  r.p_one_sided = r.exact ? exact_lower_tail(ranks, n_a, r.u_statistic)
                          : normal_lower_tail(ranks, n_a, n_b, r.u_statistic);
  return r;
}

}  // namespace stegcol
