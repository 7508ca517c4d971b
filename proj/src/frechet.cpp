#include "maxstable/frechet.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace maxstable {

Alpha::Alpha(double value) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError("alpha must be positive and finite, got " + std::to_string(value));
  }
}

FrechetScale::FrechetScale(double sigma) : sigma_(sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw DomainError("Frechet scale must be non-negative and finite, got " +
                      std::to_string(sigma));
  }
}

double frechet_exponent(double x, FrechetScale sigma, Alpha alpha) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("frechet_cdf requires finite x > 0, got " + std::to_string(x));
  }
  if (sigma.degenerate()) return 0.0;
  // Log domain: alpha * log(sigma / x) beyond the double range saturates.
  const double log_exponent = alpha.value() * (std::log(sigma.value()) - std::log(x));
  if (log_exponent > 709.0) return std::numeric_limits<double>::infinity();
  if (log_exponent < -745.0) return 0.0;
  return std::exp(log_exponent);
}

double frechet_cdf(double x, FrechetScale sigma, Alpha alpha) {
  return std::exp(-frechet_exponent(x, sigma, alpha));
}

double frechet_quantile(double p, FrechetScale sigma, Alpha alpha) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("frechet_quantile requires p in (0, 1), got " + std::to_string(p));
  }
  if (sigma.degenerate()) {
    throw DomainError("frechet_quantile is undefined for the degenerate scale");
  }
  return sigma.value() * std::pow(-std::log(p), -alpha.inverse());
}

double standard_frechet_from_uniform(double u, Alpha alpha) {
  return std::pow(-std::log(u), -alpha.inverse());
}

FrechetScale max_scale(std::span<const ScaledTerm> terms, Alpha alpha) {
  // Factor out the largest term so (a sigma)^alpha cannot overflow.
  double largest = 0.0;
  for (const auto& term : terms) {
    if (!(term.coefficient >= 0.0) || !std::isfinite(term.coefficient)) {
      throw DomainError("max_scale coefficients must be finite and non-negative");
    }
    largest = std::max(largest, term.coefficient * term.scale.value());
  }
  if (largest == 0.0) return FrechetScale(0.0);
  double sum = 0.0;
  for (const auto& term : terms) {
    sum += std::pow(term.coefficient * term.scale.value() / largest, alpha.value());
  }
  return FrechetScale(largest * std::pow(sum, alpha.inverse()));
}

}  // namespace maxstable
