#include "stegcol/gwo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

namespace stegcol {
namespace {

enum Purpose : std::uint64_t { kInitPurpose = 0x1001, kCoeffPurpose = 0x1002 };

std::string format_point(std::span<const double> x) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ", ";
    out << x[i];
  }
  out << ')';
  return out.str();
}

// Evaluates every position, possibly on several threads. Exceptions are
// collected per index and the lowest-index one is rethrown.
std::vector<double> evaluate_all(const Objective& objective,
                                 const std::vector<std::vector<double>>& positions, int workers) {
  const std::size_t n = positions.size();
  std::vector<double> fitness(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        fitness[i] = objective(positions[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || n < 2) {
    run_range(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(run_range, begin, std::min(n, begin + chunk));
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return fitness;
}

double uniform_draw(const OptimizerConfig& config, RngStream& rng) {
  const double u = rng.uniform();
  return config.forced_uniform ? *config.forced_uniform : u;
}

}  // namespace

Bounds Bounds::box(std::size_t dimension, double lo, double hi) {
  return Bounds{std::vector<double>(dimension, lo), std::vector<double>(dimension, hi)};
}

void Bounds::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("bounds: lower and upper must have equal nonzero length");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("bounds: lower[" + std::to_string(i) + "] must be < upper");
    }
  }
}

void Bounds::clamp(std::span<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

void OptimizerConfig::validate() const {
  if (pack_size < 4) throw std::invalid_argument("optimizer: pack_size must be >= 4");
  if (max_iterations < 1) throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  bounds.validate();
  levy.validate();
  if (!(a_max > 0.0)) throw std::invalid_argument("optimizer: a_max must be > 0");
  if (initial_positions.size() > static_cast<std::size_t>(pack_size)) {
    throw std::invalid_argument("optimizer: more initial positions than wolves");
  }
  for (const auto& p : initial_positions) {
    if (!bounds.contains(p)) throw std::invalid_argument("optimizer: initial position outside bounds");
  }
}

double control_parameter(int iteration, int max_iterations) {
  return 2.0 * (1.0 - static_cast<double>(iteration) / static_cast<double>(max_iterations));
}

std::uint64_t coefficient_key(std::uint64_t seed, int iteration, std::size_t wolf, int leader) {
  return mix_key(seed, {kCoeffPurpose, static_cast<std::uint64_t>(iteration),
                        static_cast<std::uint64_t>(wolf), static_cast<std::uint64_t>(leader)});
}

Pack init_pack(const Objective& objective, const OptimizerConfig& config) {
  config.validate();
  const std::size_t d = config.bounds.dimension();
  const auto n = static_cast<std::size_t>(config.pack_size);

  std::vector<std::vector<double>> positions(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (i < config.initial_positions.size()) {
      positions[i] = config.initial_positions[i];
      continue;
    }
    for (std::size_t j = 0; j < d; ++j) {
      RngStream rng(mix_key(config.seed, {kInitPurpose, i, j}));
      positions[i][j] = rng.uniform(config.bounds.lower[j], config.bounds.upper[j]);
    }
  }

  const auto fitness = evaluate_all(objective, positions, config.workers);
  Pack pack;
  pack.max_iterations = config.max_iterations;
  pack.wolves.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(fitness[i])) {
      throw OptimizerError("objective returned a non-finite value at initial point " +
                           format_point(positions[i]));
    }
    pack.wolves.push_back(Wolf{std::move(positions[i]), fitness[i]});
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pack.wolves[a].fitness < pack.wolves[b].fitness;
  });
  pack.alpha = pack.wolves[order[0]];
  pack.beta = pack.wolves[order[1]];
  pack.delta = pack.wolves[order[2]];
  return pack;
}

Coefficients coefficients(const OptimizerConfig& config, int iteration, const Wolf& wolf,
                          std::uint64_t stream_key) {
  const std::size_t d = config.bounds.dimension();
  Coefficients c;
  c.a = control_parameter(iteration, config.max_iterations);
  c.A.resize(d);
  c.C.resize(d);

  const LevyParams scaled{config.levy.mu, config.levy.gamma * c.a / 2.0};
  for (std::size_t j = 0; j < d; ++j) {
    RngStream rng(mix_key(stream_key, {j}));
    const double r1 = uniform_draw(config, rng);
    const double r2 = uniform_draw(config, rng);
    c.C[j] = 2.0 * r2;

    if (config.variant == GwoVariant::classic) {
      c.A[j] = 2.0 * c.a * r1 - c.a;
      continue;
    }

    double magnitude = 0.0;
    if (config.levy_mode == LevyCoefficientMode::random_step) {
      const double sign = rng.coin() ? 1.0 : -1.0;
      const double step = scaled.gamma > 0.0 ? levy_sample(scaled, rng) : scaled.mu;
      magnitude = sign * step * r1;
    } else {
      const double at = j < wolf.position.size() ? wolf.position[j] : 0.0;
      magnitude = scaled.gamma > 0.0 ? levy_pdf(at, scaled) * r1 : 0.0;
    }
    c.A[j] = std::clamp(magnitude, -config.a_max, config.a_max);
  }
  return c;
}

std::vector<double> step_wolf(const Wolf& wolf, const Pack& pack,
                              std::span<const Coefficients, 3> coeffs, const Bounds& bounds) {
  const std::size_t d = wolf.position.size();
  std::vector<double> next(d, 0.0);
  for (int l = 0; l < 3; ++l) {
    const auto& lead = pack.leader(l).position;
    const auto& k = coeffs[static_cast<std::size_t>(l)];
    for (std::size_t j = 0; j < d; ++j) {
      const double dist = std::abs(k.C[j] * lead[j] - wolf.position[j]);
      next[j] += lead[j] - k.A[j] * dist;
    }
  }
  for (double& x : next) x /= 3.0;
  bounds.clamp(next);
  return next;
}

void update_leaders(Pack& pack) {
  // Incumbent leaders go first so that ties keep them.
  std::vector<const Wolf*> pool{&pack.alpha, &pack.beta, &pack.delta};
  for (const auto& w : pack.wolves) pool.push_back(&w);
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Wolf* a, const Wolf* b) { return a->fitness < b->fitness; });
  Wolf alpha = *pool[0];
  Wolf beta = *pool[1];
  Wolf delta = *pool[2];
  pack.alpha = std::move(alpha);
  pack.beta = std::move(beta);
  pack.delta = std::move(delta);
}

OptimizeResult optimize(const Objective& objective, const OptimizerConfig& config) {
  Pack pack = init_pack(objective, config);
  OptimizeResult result;
  result.trace.reserve(static_cast<std::size_t>(config.max_iterations) + 1);
  result.trace.push_back(pack.alpha.fitness);

  const std::size_t n = pack.wolves.size();
  std::vector<std::vector<double>> next(n);
  for (int t = 0; t < config.max_iterations; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const Wolf& w = pack.wolves[i];
      const std::array<Coefficients, 3> k{
          coefficients(config, t, w, coefficient_key(config.seed, t, i, 0)),
          coefficients(config, t, w, coefficient_key(config.seed, t, i, 1)),
          coefficients(config, t, w, coefficient_key(config.seed, t, i, 2))};
      next[i] = step_wolf(w, pack, k, config.bounds);
    }

    std::vector<double> fitness;
    try {
      fitness = evaluate_all(objective, next, config.workers);
    } catch (const std::exception& e) {
      throw OptimizerError("iteration " + std::to_string(t + 1) + ": " + e.what());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(fitness[i])) {
        throw OptimizerError("iteration " + std::to_string(t + 1) +
                             ": objective returned a non-finite value at " + format_point(next[i]));
      }
      pack.wolves[i].position = next[i];
      pack.wolves[i].fitness = fitness[i];
    }
    pack.iteration = t + 1;
    update_leaders(pack);
    result.trace.push_back(pack.alpha.fitness);
  }

  result.best_position = pack.alpha.position;
  result.best_fitness = pack.alpha.fitness;
  return result;
}

const char* to_string(GwoVariant variant) noexcept {
  return variant == GwoVariant::classic ? "classic" : "levy";
}

GwoVariant parse_variant(std::string_view name) {
  if (name == "classic") return GwoVariant::classic;
  if (name == "levy") return GwoVariant::levy;
  throw std::invalid_argument("unknown optimizer variant '" + std::string(name) + "'");
}

}  // namespace stegcol
