#pragma once

#include <cstdint>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxstable/gaussian.hpp"
#include "maxstable/spectral_rep.hpp"

namespace maxstable {

/// Stopping rule for Poisson-series simulation
/// X_t = max_i Gamma_i^(-1/alpha) c f_t(U_i).
///
/// ExactBounded stops once Gamma_k^(-1/alpha) c B falls below the smallest
/// running maximum on the grid; no omitted term can then change the path.
/// Epsilon stops once the expected number of omitted points that would
/// exceed the running maximum at some grid time is at most epsilon, which
/// bounds the probability that truncation altered the path.
struct TruncationSpec {
  enum class Mode { ExactBounded, Epsilon };

  Mode mode = Mode::ExactBounded;
  // Sup bound B for ExactBounded; NaN means "use the rep's declared bound or
  // the maximum over the grid".
  double bound = std::numeric_limits<double>::quiet_NaN();
  double epsilon = 1e-6;
  std::size_t max_terms = 100000;

  static TruncationSpec exact(double bound = std::numeric_limits<double>::quiet_NaN()) {
    return {Mode::ExactBounded, bound};
  }
  static TruncationSpec relative(double epsilon = 1e-6) {
    TruncationSpec spec;
    spec.mode = Mode::Epsilon;
    spec.epsilon = epsilon;
    return spec;
  }
};

struct TruncationReport {
  std::string mode;       // "exact-bounded" | "epsilon" | "none"
  double bound = 0.0;     // B (exact-bounded)
  double epsilon = 0.0;   // requested epsilon
  std::size_t max_terms_used = 0;
  double mean_terms_used = 0.0;
  // Largest per-path bound on the expected number of omitted exceedances
  // (0 for exact-bounded).
  double worst_omission_bound = 0.0;
  std::size_t capped_paths = 0;  // paths that hit max_terms
};

/// Simulated paths on a time grid. paths(p, k) is X_{times[k]} on path p.
struct PathEnsemble {
  std::vector<double> times;
  Table paths;
  std::uint64_t seed = 0;
  std::string representation;
  bool exact_in_law = true;
  TruncationReport truncation;
  std::map<std::string, std::string> meta;

  [[nodiscard]] std::size_t n_paths() const { return paths.rows(); }
  [[nodiscard]] std::vector<double> marginal(std::size_t time_index) const {
    return paths.column(time_index);
  }
};

// X_t = max_i mass_i^(1/alpha) f_t(i) Z_i, exact. grid must be a subset of
// rep.times().
[[nodiscard]] PathEnsemble simulate_atomic(const AtomicRep& rep, std::span<const double> grid,
                                           const SimulationOptions& options);

// Poisson-series simulation over the grid cells.
[[nodiscard]] PathEnsemble simulate_series(const GridRep& rep, std::span<const double> grid,
                                           const SimulationOptions& options,
                                           const TruncationSpec& truncation = {});

// Exact independent max-increments on 0 < t_1 < ... < t_m.
[[nodiscard]] PathEnsemble simulate_extremal_process(Alpha alpha, std::span<const double> grid,
                                                     const SimulationOptions& options);

// X_t = max_i Gamma_i^-1 exp(W_t^(i) - sigma_t^2 / 2); epsilon truncation only.
[[nodiscard]] PathEnsemble simulate_brown_resnick(const GaussianIncrementModel& model,
                                                  std::span<const double> grid,
                                                  const SimulationOptions& options,
                                                  const TruncationSpec& truncation =
                                                      TruncationSpec::relative());

// CSV with header path_id,t,value; doubles with 17 significant digits.
[[nodiscard]] std::string to_csv(const PathEnsemble& ensemble);

// Envelope with seed, representation id, truncation report and metadata.
[[nodiscard]] nlohmann::json ensemble_envelope(const PathEnsemble& ensemble);

}  // namespace maxstable
