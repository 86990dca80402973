#pragma once

#include "stegcol/rng.hpp"

namespace stegcol {

/// Location and scale of the one-sided Levy law.
struct LevyParams {
  double mu = 0.0;
  double gamma = 1.0;

  /// Throws std::invalid_argument unless gamma is finite and > 0 and mu is finite.
  void validate() const;
};

/// Levy density sqrt(gamma / 2pi) * exp(-gamma / (2 (eta - mu))) / (eta - mu)^{3/2}.
/// Zero for eta <= mu. Throws std::invalid_argument on non-finite eta or bad params.
double levy_pdf(double eta, const LevyParams& params);

/// Upper clamp on draws, in units of gamma above mu.
inline constexpr double kLevyDrawCap = 1e9;

/// Exact draw mu + gamma / Z^2 with Z standard normal, clamped to
/// mu + kLevyDrawCap * gamma.
double levy_sample(const LevyParams& params, RngStream& rng);

}  // namespace stegcol
