#include "maxstable/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxstable/errors.hpp"
#include "maxstable/parallel.hpp"

namespace maxstable {

namespace {
constexpr std::uint64_t kFbmPurpose = 0x46424DULL;
}

GaussianIncrementModel GaussianIncrementModel::fbm(double hurst, double sigma) {
  if (!(hurst > 0.0 && hurst <= 1.0)) throw UsageError("fBm requires H in (0, 1]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw UsageError("fBm requires sigma > 0");
  GaussianIncrementModel m;
  m.fbm_ = FbmParams{hurst, sigma};
  m.variance_ = [hurst, sigma](double t) {
    return t == 0.0 ? 0.0 : sigma * sigma * std::pow(std::abs(t), 2.0 * hurst);
  };
  std::ostringstream name;
  name << "fbm(H=" << hurst << ",sigma=" << sigma << ")";
  m.name_ = name.str();
  return m;
}

GaussianIncrementModel GaussianIncrementModel::from_variance(
    std::function<double(double)> variance, std::string name) {
  if (!variance) throw UsageError("variance function is empty");
  if (variance(0.0) != 0.0) throw UsageError("variance function must vanish at t = 0");
  GaussianIncrementModel m;
  m.variance_ = std::move(variance);
  m.name_ = std::move(name);
  return m;
}

double GaussianIncrementModel::variance(double t) const { return variance_(t); }

double GaussianIncrementModel::covariance(double t, double s) const {
  return 0.5 * (variance_(t) + variance_(s) - variance_(t - s));
}

Table GaussianIncrementModel::covariance_matrix(std::span<const double> times) const {
  Table c(times.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      c(i, j) = c(j, i) = covariance(times[i], times[j]);
    }
  }
  return c;
}

GaussianSampler::GaussianSampler(const GaussianIncrementModel& model,
                                 std::span<const double> times)
    : times_(times.begin(), times.end()) {
  for (double t : times_) {
    if (!std::isfinite(t)) throw UsageError("Gaussian grid must be finite");
    const double v = model.variance(t);
    if (!std::isfinite(v) || v < 0.0) {
      throw NumericError("variance function is negative or non-finite at t = " +
                         std::to_string(t));
    }
    variances_.push_back(v);
    if (v > 0.0) active_.push_back(variances_.size() - 1);
  }
  const auto n = static_cast<Eigen::Index>(active_.size());
  if (model.fbm_params() && model.fbm_params()->hurst == 1.0) {
    // W_t = sigma t Z exactly; the covariance has rank one.
    lower_ = Table(active_.size(), 1);
    for (std::size_t i = 0; i < active_.size(); ++i) {
      lower_(i, 0) = model.fbm_params()->sigma * times_[active_[i]];
    }
    return;
  }
  Eigen::MatrixXd cov(n, n);
  double max_diag = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      cov(i, j) = cov(j, i) = model.covariance(times_[active_[i]], times_[active_[j]]);
    }
    max_diag = std::max(max_diag, cov(i, i));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    jitter_ = kCovarianceJitter * max_diag;
    cov.diagonal().array() += jitter_;
    llt.compute(cov);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "covariance factorization failed after jitter: model=" << model.name()
          << " grid_size=" << times_.size() << " active=" << n << " max_diag=" << max_diag
          << " jitter=" << jitter_;
      throw NumericError(msg.str());
    }
  }
  const Eigen::MatrixXd l = llt.matrixL();
  lower_ = Table(active_.size(), active_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) lower_(i, j) = l(i, j);
  }
}

void GaussianSampler::draw(RandomStream& rng, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = active_.size();
  const std::size_t rank = lower_.cols();
  thread_local std::vector<double> z;
  z.resize(rank);
  for (auto& v : z) v = rng.standard_normal();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = lower_.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j <= std::min(i, rank - 1); ++j) acc += row[j] * z[j];
    out[active_[i]] = acc;
  }
}

GaussianPathEnsemble simulate_fbm(const GaussianIncrementModel& model,
                                  std::span<const double> grid,
                                  const SimulationOptions& options) {
  if (grid.empty()) throw UsageError("fBm grid is empty");
  const GaussianSampler sampler(model, grid);
  GaussianPathEnsemble out;
  out.times.assign(grid.begin(), grid.end());
  out.paths = Table(options.n_paths, grid.size());
  out.seed = options.seed;
  out.jitter = sampler.jitter();
  parallel_for(options.n_paths, options.workers, [&](std::size_t p) {
    RandomStream rng = derive_stream(options.seed, p, kFbmPurpose);
    sampler.draw(rng, out.paths.row(p));
  });
  return out;
}

}  // namespace maxstable
