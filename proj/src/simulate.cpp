#include "maxstable/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "maxstable/parallel.hpp"

namespace maxstable {

namespace {

constexpr std::uint64_t kAtomicPurpose = 0xA7011CULL;
constexpr std::uint64_t kSeriesPurpose = 0x5E41E5ULL;
constexpr std::uint64_t kExtremalPurpose = 0xE7E3ULL;
constexpr std::uint64_t kBrownResnickPurpose = 0xB12ULL;

void require_paths(const SimulationOptions& options) {
  if (options.n_paths == 0) throw UsageError("n_paths must be positive");
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw UsageError("simulation grid is empty");
  for (double t : grid) {
    if (!std::isfinite(t)) throw UsageError("simulation grid must be finite");
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E[(Y - K)^+] for Y = exp(s N - s^2 / 2), N standard normal.
double lognormal_call(double s, double k) {
  if (s == 0.0) return std::max(0.0, 1.0 - k);
  if (k <= 0.0) return 1.0 - k;
  const double d1 = (-std::log(k) + 0.5 * s * s) / s;
  const double d2 = d1 - s;
  return std::max(0.0, normal_cdf(d1) - k * normal_cdf(d2));
}

// Per-time summary of the location distribution for the epsilon rule:
// values v_j = f_t(s_j)^alpha sorted ascending with suffix sums of p_j and
// p_j v_j.
struct TailTable {
  std::vector<double> v;
  std::vector<double> suffix_p;
  std::vector<double> suffix_pv;

  // sum_j p_j (scale v_j - gamma)^+
  [[nodiscard]] double expected_excess(double scale, double gamma) const {
    const double threshold = gamma / scale;
    const auto it = std::upper_bound(v.begin(), v.end(), threshold);
    const std::size_t j = static_cast<std::size_t>(it - v.begin());
    if (j == v.size()) return 0.0;
    return std::max(0.0, scale * suffix_pv[j] - gamma * suffix_p[j]);
  }
};

void finish_report(TruncationReport& report, const std::vector<std::size_t>& terms,
                   const std::vector<double>& omission, const std::vector<char>& capped) {
  report.max_terms_used = *std::max_element(terms.begin(), terms.end());
  report.mean_terms_used =
      std::accumulate(terms.begin(), terms.end(), 0.0) / static_cast<double>(terms.size());
  report.worst_omission_bound = *std::max_element(omission.begin(), omission.end());
  report.capped_paths = static_cast<std::size_t>(std::count(capped.begin(), capped.end(), 1));
}

}  // namespace

PathEnsemble simulate_atomic(const AtomicRep& rep, std::span<const double> grid,
                             const SimulationOptions& options) {
  if (rep.atom_count() == 0) throw UsageError("simulate_atomic needs at least one atom");
  require_grid(grid);
  require_paths(options);
  std::vector<std::size_t> rows;
  for (double t : grid) rows.push_back(rep.time_index(t));
  const Alpha alpha = rep.alpha();
  std::vector<double> amplitude(rep.atom_count());
  for (std::size_t i = 0; i < amplitude.size(); ++i) {
    amplitude[i] = std::pow(rep.masses()[i], alpha.inverse());
  }

  PathEnsemble out;
  out.times.assign(grid.begin(), grid.end());
  out.paths = Table(options.n_paths, grid.size());
  out.seed = options.seed;
  out.representation = "atomic";
  out.truncation.mode = "none";
  parallel_for(options.n_paths, options.workers, [&](std::size_t p) {
    RandomStream rng = derive_stream(options.seed, p, kAtomicPurpose);
    auto row = out.paths.row(p);
    for (std::size_t i = 0; i < rep.atom_count(); ++i) {
      const double z = amplitude[i] * sample_standard_frechet(alpha, rng);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        row[k] = std::max(row[k], rep.value(rows[k], i) * z);
      }
    }
  });
  return out;
}

PathEnsemble simulate_series(const GridRep& rep, std::span<const double> grid,
                             const SimulationOptions& options, const TruncationSpec& truncation) {
  require_grid(grid);
  require_paths(options);
  if (rep.empty()) throw UsageError("simulate_series needs a non-empty grid rep");
  const double mass = rep.total_mass();
  if (!std::isfinite(mass) || mass <= 0.0) {
    throw UsageError("simulate_series needs a finite, positive control mass");
  }
  const Alpha alpha = rep.alpha();
  const double a = alpha.value();
  const double c = std::pow(mass, alpha.inverse());
  const std::size_t m = grid.size();
  const std::size_t cells = rep.cell_count();

  Table f(m, cells);
  double grid_sup = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double v = rep.value(grid[k], j);
      if (!std::isfinite(v) || v < 0.0) {
        throw UsageError("spectral function is not finite at t = " + std::to_string(grid[k]));
      }
      f(k, j) = v;
      if (rep.weights()[j] > 0.0) row_max = std::max(row_max, v);
    }
    if (row_max == 0.0) {
      throw UsageError("X_t is degenerate at t = " + std::to_string(grid[k]) +
                       "; series stopping rule cannot terminate");
    }
    grid_sup = std::max(grid_sup, row_max);
  }

  std::vector<double> cumulative(cells);
  std::partial_sum(rep.weights().begin(), rep.weights().end(), cumulative.begin());

  PathEnsemble out;
  out.times.assign(grid.begin(), grid.end());
  out.paths = Table(options.n_paths, m);
  out.seed = options.seed;
  out.representation = "grid-series";

  const bool exact = truncation.mode == TruncationSpec::Mode::ExactBounded;
  double bound = 0.0;
  std::vector<TailTable> tails;
  if (exact) {
    bound = truncation.bound;
    if (std::isnan(bound)) bound = rep.sup_bound().value_or(grid_sup);
    if (!std::isfinite(bound)) {
      throw UsageError("exact-bounded series needs a finite sup bound; the kernel is unbounded");
    }
    if (bound < grid_sup) {
      throw UsageError("declared sup bound " + std::to_string(bound) +
                       " is below the grid maximum " + std::to_string(grid_sup));
    }
    out.truncation.mode = "exact-bounded";
    out.truncation.bound = bound;
  } else {
    if (!(truncation.epsilon > 0.0)) throw UsageError("epsilon must be positive");
    out.truncation.mode = "epsilon";
    out.truncation.epsilon = truncation.epsilon;
    out.exact_in_law = false;
    tails.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<std::pair<double, double>> vp;
      for (std::size_t j = 0; j < cells; ++j) {
        if (rep.weights()[j] > 0.0) vp.emplace_back(std::pow(f(k, j), a), rep.weights()[j] / mass);
      }
      std::sort(vp.begin(), vp.end());
      auto& tail = tails[k];
      tail.v.resize(vp.size());
      tail.suffix_p.assign(vp.size() + 1, 0.0);
      tail.suffix_pv.assign(vp.size() + 1, 0.0);
      for (std::size_t j = vp.size(); j-- > 0;) {
        tail.v[j] = vp[j].first;
        tail.suffix_p[j] = tail.suffix_p[j + 1] + vp[j].second;
        tail.suffix_pv[j] = tail.suffix_pv[j + 1] + vp[j].second * vp[j].first;
      }
    }
  }

  std::vector<std::size_t> terms(options.n_paths, 0);
  std::vector<double> omission(options.n_paths, 0.0);
  std::vector<char> capped(options.n_paths, 0);
  parallel_for(options.n_paths, options.workers, [&](std::size_t p) {
    RandomStream rng = derive_stream(options.seed, p, kSeriesPurpose);
    auto row = out.paths.row(p);
    double gamma = 0.0;
    double min_max = 0.0;
    std::size_t used = 0;
    while (true) {
      gamma += rng.exponential();
      const double level = std::pow(gamma, -alpha.inverse()) * c;
      if (exact && used > 0 && level * bound < min_max) break;
      if (used == truncation.max_terms) {
        if (exact) {
          throw NumericError("exact-bounded series exceeded max_terms = " +
                             std::to_string(truncation.max_terms));
        }
        capped[p] = 1;
        break;
      }
      const double u = rng.uniform_open() * mass;
      const std::size_t cell = std::min<std::size_t>(
          cells - 1,
          static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                   cumulative.begin()));
      min_max = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m; ++k) {
        row[k] = std::max(row[k], level * f(k, cell));
        min_max = std::min(min_max, row[k]);
      }
      ++used;
      if (!exact && min_max > 0.0) {
        double expected = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          expected += tails[k].expected_excess(mass / std::pow(row[k], a), gamma);
        }
        omission[p] = expected;
        if (expected <= truncation.epsilon) break;
      } else if (!exact) {
        omission[p] = std::numeric_limits<double>::infinity();
      }
    }
    terms[p] = used;
  });
  finish_report(out.truncation, terms, omission, capped);
  return out;
}

PathEnsemble simulate_extremal_process(Alpha alpha, std::span<const double> grid,
                                       const SimulationOptions& options) {
  require_grid(grid);
  require_paths(options);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > (k == 0 ? 0.0 : grid[k - 1]))) {
      throw UsageError("extremal process grid must be positive and strictly increasing");
    }
  }
  std::vector<double> increment_scale(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    increment_scale[k] = std::pow(grid[k] - (k == 0 ? 0.0 : grid[k - 1]), alpha.inverse());
  }
  PathEnsemble out;
  out.times.assign(grid.begin(), grid.end());
  out.paths = Table(options.n_paths, grid.size());
  out.seed = options.seed;
  out.representation = "extremal-process";
  out.truncation.mode = "none";
  parallel_for(options.n_paths, options.workers, [&](std::size_t p) {
    RandomStream rng = derive_stream(options.seed, p, kExtremalPurpose);
    auto row = out.paths.row(p);
    double running = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      running = std::max(running, increment_scale[k] * sample_standard_frechet(alpha, rng));
      row[k] = running;
    }
  });
  return out;
}

PathEnsemble simulate_brown_resnick(const GaussianIncrementModel& model,
                                    std::span<const double> grid,
                                    const SimulationOptions& options,
                                    const TruncationSpec& truncation) {
  require_grid(grid);
  require_paths(options);
  if (truncation.mode == TruncationSpec::Mode::ExactBounded) {
    throw UsageError("Brown-Resnick kernels are unbounded; exact-bounded truncation is invalid");
  }
  if (!(truncation.epsilon > 0.0)) throw UsageError("epsilon must be positive");
  const GaussianSampler sampler(model, grid);
  const std::size_t m = grid.size();
  std::vector<double> half_var(m);
  std::vector<double> sd(m);
  for (std::size_t k = 0; k < m; ++k) {
    half_var[k] = 0.5 * sampler.variances()[k];
    sd[k] = std::sqrt(sampler.variances()[k]);
  }

  PathEnsemble out;
  out.times.assign(grid.begin(), grid.end());
  out.paths = Table(options.n_paths, m);
  out.seed = options.seed;
  out.representation = "brown-resnick:" + model.name();
  out.exact_in_law = false;
  out.truncation.mode = "epsilon";
  out.truncation.epsilon = truncation.epsilon;
  std::ostringstream jitter;
  jitter << sampler.jitter();
  out.meta["covariance_jitter"] = jitter.str();

  std::vector<std::size_t> terms(options.n_paths, 0);
  std::vector<double> omission(options.n_paths, 0.0);
  std::vector<char> capped(options.n_paths, 0);
  parallel_for(options.n_paths, options.workers, [&](std::size_t p) {
    RandomStream rng = derive_stream(options.seed, p, kBrownResnickPurpose);
    auto row = out.paths.row(p);
    std::vector<double> w(m);
    double gamma = 0.0;
    std::size_t used = 0;
    while (true) {
      if (used == truncation.max_terms) {
        capped[p] = 1;
        break;
      }
      gamma += rng.exponential();
      sampler.draw(rng, w);
      for (std::size_t k = 0; k < m; ++k) {
        row[k] = std::max(row[k], std::exp(w[k] - half_var[k]) / gamma);
      }
      ++used;
      // Expected number of later points exceeding the running maximum at
      // some grid time: sum_t E[(Y_t / M_t - Gamma)^+].
      double expected = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        expected += lognormal_call(sd[k], gamma * row[k]) / row[k];
      }
      omission[p] = expected;
      if (expected <= truncation.epsilon) break;
    }
    terms[p] = used;
  });
  finish_report(out.truncation, terms, omission, capped);
  return out;
}

std::string to_csv(const PathEnsemble& ensemble) {
  std::string out = "path_id,t,value\n";
  char buf[96];
  for (std::size_t p = 0; p < ensemble.n_paths(); ++p) {
    for (std::size_t k = 0; k < ensemble.times.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", p, ensemble.times[k],
                    ensemble.paths(p, k));
      out += buf;
    }
  }
  return out;
}

nlohmann::json ensemble_envelope(const PathEnsemble& ensemble) {
  nlohmann::json doc;
  doc["seed"] = ensemble.seed;
  doc["representation"] = ensemble.representation;
  doc["n_paths"] = ensemble.n_paths();
  doc["times"] = ensemble.times;
  doc["exact_in_law"] = ensemble.exact_in_law;
  const auto& tr = ensemble.truncation;
  doc["truncation"] = {{"mode", tr.mode},
                       {"bound", tr.bound},
                       {"epsilon", tr.epsilon},
                       {"max_terms_used", tr.max_terms_used},
                       {"mean_terms_used", tr.mean_terms_used},
                       {"worst_omission_bound", tr.worst_omission_bound},
                       {"capped_paths", tr.capped_paths}};
  doc["meta"] = ensemble.meta;
  return doc;
}

}  // namespace maxstable
