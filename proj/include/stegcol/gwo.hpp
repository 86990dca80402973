#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stegcol/levy.hpp"

namespace stegcol {

/// Axis-aligned search box.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds box(std::size_t dimension, double lo, double hi);

  std::size_t dimension() const noexcept { return lower.size(); }
  void validate() const;
  void clamp(std::span<double> x) const;
  bool contains(std::span<const double> x) const;
};

struct Wolf {
  std::vector<double> position;
  double fitness = 0.0;
};

/// Population plus the three leaders. Leaders remember the best points seen
/// so far, so alpha <= beta <= delta <= every current wolf.
struct Pack {
  std::vector<Wolf> wolves;
  Wolf alpha;
  Wolf beta;
  Wolf delta;
  int iteration = 0;
  int max_iterations = 0;

  const Wolf& leader(int rank) const { return rank == 0 ? alpha : rank == 1 ? beta : delta; }
};

struct Coefficients {
  double a = 0.0;
  std::vector<double> A;
  std::vector<double> C;
};

enum class GwoVariant { classic, levy };

/// How the Levy-flight variant turns the Levy law into the A coefficient.
/// random_step is the production reading; pdf_at_position evaluates the
/// density at the wolf's own coordinate and exists for comparison only.
enum class LevyCoefficientMode { random_step, pdf_at_position };

struct OptimizerConfig {
  GwoVariant variant = GwoVariant::classic;
  int pack_size = 30;
  int max_iterations = 500;
  Bounds bounds;
  LevyParams levy;
  std::uint64_t seed = 1;
  double a_max = 3.0;
  /// Threads used for fitness evaluation. Results do not depend on it.
  int workers = 1;
  /// Positions assigned verbatim to the first wolves; the rest are uniform.
  std::vector<std::vector<double>> initial_positions;

  // Test hooks.
  std::optional<double> forced_uniform;
  LevyCoefficientMode levy_mode = LevyCoefficientMode::random_step;

  void validate() const;
};

using Objective = std::function<double(std::span<const double>)>;

class OptimizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Control parameter a = 2 (1 - t / T).
double control_parameter(int iteration, int max_iterations);

/// Key of the random stream feeding one wolf's coefficients toward one leader.
std::uint64_t coefficient_key(std::uint64_t seed, int iteration, std::size_t wolf, int leader);

Pack init_pack(const Objective& objective, const OptimizerConfig& config);

/// Draws A and C for one wolf and one leader. Each dimension reads its own
/// sub-stream of stream_key, so the result does not depend on call order.
Coefficients coefficients(const OptimizerConfig& config, int iteration, const Wolf& wolf,
                          std::uint64_t stream_key);

/// Leader-averaged encircling move, clamped to bounds.
std::vector<double> step_wolf(const Wolf& wolf, const Pack& pack,
                              std::span<const Coefficients, 3> coeffs, const Bounds& bounds);

/// Re-selects alpha, beta and delta from the current wolves and the previous leaders.
void update_leaders(Pack& pack);

struct OptimizeResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  /// trace[t] is the best-so-far fitness after iteration t; trace[0] is post-init.
  std::vector<double> trace;
};

OptimizeResult optimize(const Objective& objective, const OptimizerConfig& config);

const char* to_string(GwoVariant variant) noexcept;
GwoVariant parse_variant(std::string_view name);

}  // namespace stegcol
