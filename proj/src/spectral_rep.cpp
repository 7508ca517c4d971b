#include "maxstable/spectral_rep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "maxstable/parallel.hpp"

namespace maxstable {

namespace {

constexpr double kTimeMatchTolerance = 1e-9;
constexpr std::size_t kMonteCarloBlock = 4096;
constexpr std::uint64_t kMonteCarloPurpose = 0x4D43ULL;

void require_sorted_unique(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw UsageError(std::string(what) + " must be finite");
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw UsageError(std::string(what) + " must be strictly increasing");
    }
  }
}

std::optional<std::size_t> find_sorted(const std::vector<double>& sorted, double t) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(),
                             t - kTimeMatchTolerance * std::max(1.0, std::abs(t)));
  if (it == sorted.end()) return std::nullopt;
  if (std::abs(*it - t) > kTimeMatchTolerance * std::max(1.0, std::abs(t))) return std::nullopt;
  return static_cast<std::size_t>(it - sorted.begin());
}

void check_constraint(const Constraint& c) {
  if (!std::isfinite(c.x) || c.x <= 0.0) {
    throw DomainError("constraint level x must be finite and positive, got " +
                      std::to_string(c.x));
  }
  if (!std::isfinite(c.t)) throw DomainError("constraint time must be finite");
}

std::string time_error(double t) { return "time " + std::to_string(t) + " is not resolvable"; }

}  // namespace

const char* to_string(TimeAxis axis) { return axis == TimeAxis::Integer ? "integer" : "real"; }

// ---------------------------------------------------------------------------
// AtomicRep

AtomicRep::AtomicRep(Alpha alpha, std::vector<double> times, std::vector<double> masses,
                     Table values, TimeAxis axis, bool unpruned)
    : alpha_(alpha),
      times_(std::move(times)),
      masses_(std::move(masses)),
      values_(std::move(values)),
      axis_(axis),
      unpruned_(unpruned) {
  require_sorted_unique(times_, "atomic times");
  if (values_.rows() != times_.size() || values_.cols() != masses_.size()) {
    if (!(masses_.empty() && values_.empty())) {
      throw UsageError("atomic values must be a times x atoms table");
    }
  }
  for (double m : masses_) {
    if (!std::isfinite(m) || m <= 0.0) throw UsageError("atom masses must be finite and > 0");
  }
  for (double v : values_.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw UsageError("atomic spectral values must be finite and >= 0");
    }
  }
  if (!unpruned_) {
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      bool any = false;
      for (std::size_t k = 0; k < times_.size() && !any; ++k) any = values_(k, i) > 0.0;
      if (!any && !times_.empty()) {
        throw UsageError("atom " + std::to_string(i) +
                         " vanishes at every time; flag the rep as unpruned to keep it");
      }
    }
  }
}

AtomicRep::AtomicRep(Alpha alpha, std::vector<double> times, Table values, TimeAxis axis,
                     bool unpruned)
    : AtomicRep(alpha, std::move(times), std::vector<double>(values.cols(), 1.0),
                std::move(values), axis, unpruned) {}

std::optional<std::size_t> AtomicRep::find_time(double t) const { return find_sorted(times_, t); }

std::size_t AtomicRep::time_index(double t) const {
  auto k = find_time(t);
  if (!k) throw UsageError(time_error(t));
  return *k;
}

AtomicRep AtomicRep::select_atoms(std::span<const std::size_t> atoms) const {
  std::vector<double> masses;
  Table values(times_.size(), atoms.size());
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j] >= atom_count()) throw UsageError("atom index out of range");
    masses.push_back(masses_[atoms[j]]);
    for (std::size_t k = 0; k < times_.size(); ++k) values(k, j) = values_(k, atoms[j]);
  }
  return AtomicRep(alpha_, times_, std::move(masses), std::move(values), axis_, unpruned_);
}

AtomicRep empty_atomic(Alpha alpha, TimeAxis axis) {
  return AtomicRep(alpha, {}, {}, Table(), axis);
}

// ---------------------------------------------------------------------------
// GridRep

GridRep::GridRep(Alpha alpha, std::vector<double> s_grid, std::vector<double> weights,
                 Evaluator evaluator, TimeAxis axis, Quadrature quadrature)
    : alpha_(alpha),
      axis_(axis),
      s_grid_(std::move(s_grid)),
      weights_(std::move(weights)),
      evaluator_(std::move(evaluator)),
      quadrature_(std::move(quadrature)) {
  if (!evaluator_) throw UsageError("closed-form GridRep needs an evaluator");
  validate_grid();
}

GridRep::GridRep(Alpha alpha, std::vector<double> s_grid, std::vector<double> weights,
                 std::vector<double> times, Table values, TimeAxis axis, Quadrature quadrature)
    : alpha_(alpha),
      axis_(axis),
      s_grid_(std::move(s_grid)),
      weights_(std::move(weights)),
      times_(std::move(times)),
      table_(std::move(values)),
      quadrature_(std::move(quadrature)) {
  validate_grid();
  require_sorted_unique(times_, "tabulated times");
  if (table_.rows() != times_.size() || table_.cols() != s_grid_.size()) {
    throw UsageError("tabulated values must be a times x cells table");
  }
  for (double v : table_.data()) {
    if (!std::isfinite(v) || v < 0.0) throw UsageError("tabulated values must be finite, >= 0");
  }
}

GridRep GridRep::empty(Alpha alpha) {
  GridRep rep(alpha, TimeAxis::Real);
  rep.evaluator_ = [](double, std::size_t) -> double {
    throw UsageError("empty grid has no cells");
  };
  return rep;
}

void GridRep::validate_grid() const {
  if (s_grid_.size() != weights_.size()) throw UsageError("s_grid and weights differ in length");
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw UsageError("quadrature weights must be finite, >= 0");
  }
  for (double s : s_grid_) {
    if (!std::isfinite(s)) throw UsageError("s_grid must be finite");
  }
}

double GridRep::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool GridRep::resolvable(double t) const {
  if (evaluator_) return std::isfinite(t);
  return find_sorted(times_, t).has_value();
}

double GridRep::value(double t, std::size_t cell) const {
  if (evaluator_) return evaluator_(t, cell);
  auto k = find_sorted(times_, t);
  if (!k) throw UsageError(time_error(t));
  return table_(*k, cell);
}

std::vector<double> GridRep::breaks(std::size_t cell) const {
  if (!breaks_) return {};
  return breaks_(cell);
}

GridRep GridRep::with_breaks(BreakFinder finder) const {
  GridRep copy = *this;
  copy.breaks_ = std::move(finder);
  return copy;
}

GridRep GridRep::with_sup_bound(double bound) const {
  GridRep copy = *this;
  copy.sup_bound_ = bound;
  return copy;
}

GridRep GridRep::with_metadata(std::string key, std::string value) const {
  GridRep copy = *this;
  copy.metadata_[std::move(key)] = std::move(value);
  return copy;
}

GridRep GridRep::select_cells(std::span<const std::size_t> cells) const {
  GridRep copy(alpha_, axis_);
  copy.quadrature_ = quadrature_;
  copy.sup_bound_ = sup_bound_;
  copy.metadata_ = metadata_;
  std::vector<std::size_t> index(cells.begin(), cells.end());
  for (std::size_t c : index) {
    if (c >= cell_count()) throw UsageError("cell index out of range");
    copy.s_grid_.push_back(s_grid_[c]);
    copy.weights_.push_back(weights_[c]);
  }
  if (evaluator_) {
    copy.evaluator_ = [eval = evaluator_, index](double t, std::size_t cell) {
      return eval(t, index.at(cell));
    };
    if (breaks_) {
      copy.breaks_ = [finder = breaks_, index](std::size_t cell) { return finder(index.at(cell)); };
    }
  } else {
    copy.times_ = times_;
    copy.table_ = Table(times_.size(), index.size());
    for (std::size_t k = 0; k < times_.size(); ++k) {
      for (std::size_t j = 0; j < index.size(); ++j) copy.table_(k, j) = table_(k, index[j]);
    }
  }
  return copy;
}

// ---------------------------------------------------------------------------
// DoublyStochasticRep / HybridRep

DoublyStochasticRep::DoublyStochasticRep(Alpha alpha, std::string name, SamplerFactory factory,
                                         double total_mass)
    : alpha_(alpha), name_(std::move(name)), factory_(std::move(factory)), total_mass_(total_mass) {
  if (!factory_) throw UsageError("doubly stochastic rep needs a sampler");
  if (!std::isfinite(total_mass_) || total_mass_ <= 0.0) {
    throw UsageError("doubly stochastic control mass must be finite and > 0");
  }
}

HybridRep make_hybrid(GridRep continuous, AtomicRep discrete) {
  if (!(continuous.alpha() == discrete.alpha())) {
    throw UsageError("hybrid parts must share alpha");
  }
  return HybridRep{std::move(continuous), std::move(discrete)};
}

// ---------------------------------------------------------------------------
// Exponents

ExponentEstimate fdd_exponent(const AtomicRep& rep, std::span<const Constraint> constraints) {
  ExponentEstimate out;
  if (constraints.empty() || rep.empty()) return out;
  std::vector<std::size_t> rows;
  for (const auto& c : constraints) {
    check_constraint(c);
    rows.push_back(rep.time_index(c.t));
  }
  const double a = rep.alpha().value();
  double sum = 0.0;
  for (std::size_t i = 0; i < rep.atom_count(); ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      m = std::max(m, rep.value(rows[j], i) / constraints[j].x);
    }
    if (m > 0.0) sum += rep.masses()[i] * std::pow(m, a);
  }
  out.value = sum;
  return out;
}

ExponentEstimate fdd_exponent(const GridRep& rep, std::span<const Constraint> constraints) {
  ExponentEstimate out;
  out.method = rep.quadrature().rule;
  out.quadrature_tolerance = rep.quadrature().tolerance;
  if (constraints.empty() || rep.empty()) return out;
  for (const auto& c : constraints) {
    check_constraint(c);
    if (!rep.resolvable(c.t)) throw UsageError(time_error(c.t));
  }
  const double a = rep.alpha().value();
  const auto& w = rep.weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < rep.cell_count(); ++j) {
    if (w[j] == 0.0) continue;
    double m = 0.0;
    for (const auto& c : constraints) m = std::max(m, rep.value(c.t, j) / c.x);
    if (m > 0.0) sum += w[j] * std::pow(m, a);
  }
  out.value = sum;
  return out;
}

ExponentEstimate fdd_exponent(const DoublyStochasticRep& rep,
                              std::span<const Constraint> constraints,
                              const MonteCarloOptions& mc) {
  ExponentEstimate out;
  out.method = "monte-carlo";
  if (constraints.empty()) return out;
  if (mc.samples < 2) throw UsageError("Monte-Carlo exponent needs at least 2 samples");
  std::vector<double> times;
  for (const auto& c : constraints) {
    check_constraint(c);
    times.push_back(c.t);
  }
  const TrajectorySampler sampler = rep.prepare(times);
  const double a = rep.alpha().value();
  const std::size_t blocks = (mc.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<double> sums(blocks, 0.0);
  std::vector<double> squares(blocks, 0.0);
  parallel_for(blocks, mc.workers, [&](std::size_t b) {
    RandomStream rng = derive_stream(mc.seed, b, kMonteCarloPurpose);
    std::vector<double> y(times.size());
    const std::size_t begin = b * kMonteCarloBlock;
    const std::size_t end = std::min(mc.samples, begin + kMonteCarloBlock);
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t n = begin; n < end; ++n) {
      sampler(rng, y);
      double m = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) m = std::max(m, y[j] / constraints[j].x);
      const double v = std::pow(m, a);
      s += v;
      s2 += v * v;
    }
    sums[b] = s;
    squares[b] = s2;
  });
  const double n = static_cast<double>(mc.samples);
  const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
  const double total2 = std::accumulate(squares.begin(), squares.end(), 0.0);
  const double mean = total / n;
  const double var = std::max(0.0, (total2 - n * mean * mean) / (n - 1.0));
  out.value = rep.total_mass() * mean;
  out.std_error = rep.total_mass() * std::sqrt(var / n);
  out.samples = mc.samples;
  if (!std::isfinite(out.value) || !std::isfinite(out.std_error)) {
    throw NumericError("Monte-Carlo exponent is not finite");
  }
  return out;
}

ExponentEstimate fdd_exponent(const HybridRep& rep, std::span<const Constraint> constraints) {
  ExponentEstimate cont = fdd_exponent(rep.continuous_part, constraints);
  ExponentEstimate disc = fdd_exponent(rep.discrete_part, constraints);
  ExponentEstimate out;
  out.value = cont.value + disc.value;
  out.method = rep.continuous_part.empty() ? disc.method : cont.method + "+exact";
  out.quadrature_tolerance =
      out.value > 0.0 ? cont.quadrature_tolerance * cont.value / out.value : 0.0;
  return out;
}

ExponentEstimate fdd_exponent(const SpectralRepresentation& rep,
                              std::span<const Constraint> constraints,
                              const MonteCarloOptions& mc) {
  return std::visit(
      [&](const auto& r) -> ExponentEstimate {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, DoublyStochasticRep>) {
          return fdd_exponent(r, constraints, mc);
        } else {
          return fdd_exponent(r, constraints);
        }
      },
      rep);
}

double fdd_probability(const SpectralRepresentation& rep, std::span<const Constraint> constraints,
                       const MonteCarloOptions& mc) {
  return std::exp(-fdd_exponent(rep, constraints, mc).value);
}

FrechetScale scale_coefficient(const SpectralRepresentation& rep,
                               std::span<const ComboTerm> combo, const MonteCarloOptions& mc) {
  std::vector<Constraint> constraints;
  for (const auto& term : combo) {
    if (!std::isfinite(term.c) || term.c < 0.0) {
      throw DomainError("combination coefficients must be finite and >= 0");
    }
    if (term.c > 0.0) constraints.push_back({term.t, 1.0 / term.c});
  }
  if (constraints.empty()) return FrechetScale(0.0);
  const double alpha = std::visit([](const auto& r) { return r.alpha().value(); }, rep);
  const double e = fdd_exponent(rep, constraints, mc).value;
  return FrechetScale(std::pow(e, 1.0 / alpha));
}

// ---------------------------------------------------------------------------
// Metric

SpectralFunction spectral_function(const AtomicRep& rep, double t) {
  const std::size_t k = rep.time_index(t);
  auto row = rep.values().row(k);
  return {rep.alpha(), SpectralFunction::Encoding::Atomic, rep.masses(),
          std::vector<double>(row.begin(), row.end())};
}

SpectralFunction spectral_function(const GridRep& rep, double t) {
  std::vector<double> values(rep.cell_count());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = rep.value(t, j);
  return {rep.alpha(), SpectralFunction::Encoding::Grid, rep.weights(), std::move(values)};
}

double rho_metric(const SpectralFunction& f, const SpectralFunction& g) {
  if (f.encoding != g.encoding || !(f.alpha == g.alpha) || f.measure != g.measure ||
      f.values.size() != g.values.size() || f.values.size() != f.measure.size()) {
    throw UsageError("rho_metric needs two functions on the same encoded support");
  }
  const double a = f.alpha.value();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    sum += f.measure[i] * std::abs(std::pow(f.values[i], a) - std::pow(g.values[i], a));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Stationarity and independence

StationarityReport check_stationarity(const SpectralRepresentation& rep,
                                      std::span<const double> shifts,
                                      const std::vector<std::vector<Constraint>>& probes,
                                      double tol, const MonteCarloOptions& mc,
                                      double z_threshold) {
  StationarityReport report;
  report.monte_carlo = std::holds_alternative<DoublyStochasticRep>(rep);
  std::uint64_t stream = 0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (double tau : shifts) {
      std::vector<Constraint> moved = probes[p];
      for (auto& c : moved) c.t += tau;
      MonteCarloOptions first = mc;
      MonteCarloOptions second = mc;
      first.seed = splitmix64(mc.seed + 2 * stream);
      second.seed = splitmix64(mc.seed + 2 * stream + 1);
      ++stream;
      StationarityProbe entry{tau, probes[p], fdd_exponent(rep, probes[p], first),
                              fdd_exponent(rep, moved, second), 0.0};
      const double diff = std::abs(entry.original.value - entry.shifted.value);
      if (report.monte_carlo) {
        const double se = std::hypot(entry.original.std_error, entry.shifted.std_error);
        entry.deviation = se > 0.0 ? diff / se : (diff > 0.0 ? 1e300 : 0.0);
        if (entry.deviation > z_threshold) report.stationary = false;
      } else {
        entry.deviation = diff;
        if (diff > tol) report.stationary = false;
      }
      report.max_deviation = std::max(report.max_deviation, entry.deviation);
      report.probes.push_back(std::move(entry));
    }
  }
  return report;
}

bool independent_blocks(const AtomicRep& rep, const std::vector<std::vector<double>>& blocks) {
  std::vector<std::vector<bool>> support(blocks.size(),
                                         std::vector<bool>(rep.atom_count(), false));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (double t : blocks[b]) {
      const std::size_t k = rep.time_index(t);
      for (std::size_t i = 0; i < rep.atom_count(); ++i) {
        if (rep.value(k, i) > 0.0) support[b][i] = true;
      }
    }
  }
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < blocks.size(); ++b) {
      for (std::size_t i = 0; i < rep.atom_count(); ++i) {
        if (support[a][i] && support[b][i]) return false;
      }
    }
  }
  return true;
}

}  // namespace maxstable
