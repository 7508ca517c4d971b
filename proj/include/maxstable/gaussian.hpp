#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxstable/random.hpp"
#include "maxstable/table.hpp"

namespace maxstable {

struct FbmParams {
  double hurst;
  double sigma;
};

/// Zero-mean Gaussian process with stationary increments, W_0 = 0, given by
/// its variance function v(t) = Var W_t. Covariances follow from
/// Cov(W_t, W_s) = (v(t) + v(s) - v(t - s)) / 2.
class GaussianIncrementModel {
 public:
  // Fractional Brownian motion, H in (0, 1], sigma > 0.
  static GaussianIncrementModel fbm(double hurst, double sigma = 1.0);

  // Arbitrary variogram; v must be even with v(0) = 0.
  static GaussianIncrementModel from_variance(std::function<double(double)> variance,
                                              std::string name);

  [[nodiscard]] double variance(double t) const;
  [[nodiscard]] double covariance(double t, double s) const;
  [[nodiscard]] Table covariance_matrix(std::span<const double> times) const;
  [[nodiscard]] const std::optional<FbmParams>& fbm_params() const { return fbm_; }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  GaussianIncrementModel() = default;

  std::function<double(double)> variance_;
  std::optional<FbmParams> fbm_;
  std::string name_;
};

/// Lower Cholesky factor of the covariance on a fixed grid. Coordinates with
/// zero variance are deterministic zeros and are left out of the factor.
class GaussianSampler {
 public:
  GaussianSampler(const GaussianIncrementModel& model, std::span<const double> times);

  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<double>& variances() const { return variances_; }
  // Absolute diagonal jitter that was needed (0 if none).
  [[nodiscard]] double jitter() const { return jitter_; }

  void draw(RandomStream& rng, std::span<double> out) const;

 private:
  std::vector<double> times_;
  std::vector<double> variances_;
  std::vector<std::size_t> active_;
  Table lower_;
  double jitter_ = 0.0;
};

// Relative diagonal jitter applied when the plain factorization fails.
inline constexpr double kCovarianceJitter = 1e-12;

struct GaussianPathEnsemble {
  std::vector<double> times;
  Table paths;  // paths(path, time)
  std::uint64_t seed = 0;
  double jitter = 0.0;
};

struct SimulationOptions {
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

[[nodiscard]] GaussianPathEnsemble simulate_fbm(const GaussianIncrementModel& model,
                                                std::span<const double> grid,
                                                const SimulationOptions& options);

}  // namespace maxstable
