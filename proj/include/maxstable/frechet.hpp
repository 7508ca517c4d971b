#pragma once

#include <span>
#include <utility>

#include "maxstable/errors.hpp"

namespace maxstable {

// Tail index of an alpha-Frechet law.
class Alpha {
 public:
  explicit Alpha(double value);

  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] double inverse() const { return 1.0 / value_; }

  friend bool operator==(Alpha a, Alpha b) { return a.value_ == b.value_; }

 private:
  double value_;
};

// Scale coefficient ||Z||_alpha. Zero encodes the variable degenerate at 0,
// which is the unit of the max operation.
class FrechetScale {
 public:
  FrechetScale() = default;
  explicit FrechetScale(double sigma);

  [[nodiscard]] double value() const { return sigma_; }
  [[nodiscard]] bool degenerate() const { return sigma_ == 0.0; }

 private:
  double sigma_ = 0.0;
};

struct ScaledTerm {
  double coefficient;
  FrechetScale scale;
};

// P(Z <= x) = exp(-sigma^alpha x^-alpha). Exponents that overflow saturate
// to the limiting probability 0 or 1 instead of producing NaN.
[[nodiscard]] double frechet_cdf(double x, FrechetScale sigma, Alpha alpha);

// The exponent sigma^alpha x^-alpha itself; +inf when it overflows.
[[nodiscard]] double frechet_exponent(double x, FrechetScale sigma, Alpha alpha);

// Inverse of frechet_cdf on (0, 1).
[[nodiscard]] double frechet_quantile(double p, FrechetScale sigma, Alpha alpha);

// Inverse-CDF transform of an open-interval uniform: (-log u)^(-1/alpha).
[[nodiscard]] double standard_frechet_from_uniform(double u, Alpha alpha);

template <class Rng>
[[nodiscard]] double sample_standard_frechet(Alpha alpha, Rng& rng) {
  return standard_frechet_from_uniform(rng.uniform_open(), alpha);
}

// Scale of max_i a_i Z_i for independent Z_i with scales sigma_i:
// (sum (a_i sigma_i)^alpha)^(1/alpha). Empty input gives scale 0.
[[nodiscard]] FrechetScale max_scale(std::span<const ScaledTerm> terms, Alpha alpha);

}  // namespace maxstable
