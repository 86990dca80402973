#include "stegcol/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stegcol {

void LevyParams::validate() const {
  if (!std::isfinite(mu)) throw std::invalid_argument("levy: mu must be finite");
  if (!std::isfinite(gamma) || gamma <= 0.0) throw std::invalid_argument("levy: gamma must be > 0");
}

double levy_pdf(double eta, const LevyParams& params) {
  params.validate();
  if (!std::isfinite(eta)) throw std::invalid_argument("levy_pdf: eta must be finite");
  const double x = eta - params.mu;
  if (x <= 0.0) return 0.0;
  const double norm = std::sqrt(params.gamma / (2.0 * std::numbers::pi));
  return norm * std::exp(-params.gamma / (2.0 * x)) / (x * std::sqrt(x));
}

double levy_sample(const LevyParams& params, RngStream& rng) {
  params.validate();
  double z = rng.normal();
  while (std::abs(z) < 1e-12) z = rng.normal();
  const double step = params.gamma / (z * z);
  return params.mu + std::min(step, kLevyDrawCap * params.gamma);
}

}  // namespace stegcol
