#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "maxstable/frechet.hpp"
#include "maxstable/random.hpp"
#include "maxstable/table.hpp"

namespace maxstable {

// Index set of the process: the lattice Z (counting measure) or the line R
// (Lebesgue measure).
enum class TimeAxis { Integer, Real };

[[nodiscard]] const char* to_string(TimeAxis axis);

// Event {X_t <= x}.
struct Constraint {
  double t;
  double x;
};

// Term c * X_t of a max-linear combination.
struct ComboTerm {
  double t;
  double c;
};

/// Spectral family on a finite set of atoms {1..N} with point masses.
///
/// values(k, i) holds f_{t_k}(i) for the k-th entry of times(). The process
/// is X_t = max_i masses[i]^(1/alpha) f_t(i) Z_i.
class AtomicRep {
 public:
  AtomicRep(Alpha alpha, std::vector<double> times, std::vector<double> masses, Table values,
            TimeAxis axis = TimeAxis::Integer, bool unpruned = false);

  // Unit (counting) masses.
  AtomicRep(Alpha alpha, std::vector<double> times, Table values,
            TimeAxis axis = TimeAxis::Integer, bool unpruned = false);

  [[nodiscard]] Alpha alpha() const { return alpha_; }
  [[nodiscard]] TimeAxis axis() const { return axis_; }
  [[nodiscard]] bool unpruned() const { return unpruned_; }
  [[nodiscard]] std::size_t atom_count() const { return masses_.size(); }
  [[nodiscard]] std::size_t time_count() const { return times_.size(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<double>& masses() const { return masses_; }
  [[nodiscard]] const Table& values() const { return values_; }

  [[nodiscard]] std::optional<std::size_t> find_time(double t) const;
  // Throws UsageError when t is not one of times().
  [[nodiscard]] std::size_t time_index(double t) const;
  [[nodiscard]] double value(std::size_t time_index, std::size_t atom) const {
    return values_(time_index, atom);
  }
  // Co-spectral vector t -> f_t(atom) over times().
  [[nodiscard]] std::vector<double> cospectral(std::size_t atom) const {
    return values_.column(atom);
  }

  // Sub-representation on the given atoms (in the given order).
  [[nodiscard]] AtomicRep select_atoms(std::span<const std::size_t> atoms) const;

  [[nodiscard]] bool empty() const { return masses_.empty(); }

 private:
  Alpha alpha_;
  std::vector<double> times_;
  std::vector<double> masses_;
  Table values_;
  TimeAxis axis_;
  bool unpruned_;
};

struct GridQuadrature {
  std::string rule = "trapezoid";
  // Declared bound on the relative quadrature error of exponents.
  double tolerance = 0.0;
};

/// Spectral family on a quadrature grid {s_j} with weights w_j approximating
/// the control measure. f_t(s_j) comes either from a closed-form evaluator
/// (any t) or from a table over a fixed list of times.
class GridRep {
 public:
  using Evaluator = std::function<double(double t, std::size_t cell)>;
  // Points in t where t -> f_t(s_cell) is not smooth; used to split
  // co-spectral quadrature.
  using BreakFinder = std::function<std::vector<double>(std::size_t cell)>;

  using Quadrature = GridQuadrature;

  GridRep(Alpha alpha, std::vector<double> s_grid, std::vector<double> weights,
          Evaluator evaluator, TimeAxis axis = TimeAxis::Real, Quadrature quadrature = {});

  GridRep(Alpha alpha, std::vector<double> s_grid, std::vector<double> weights,
          std::vector<double> times, Table values, TimeAxis axis = TimeAxis::Real,
          Quadrature quadrature = {});

  // Empty continuous part.
  static GridRep empty(Alpha alpha);

  [[nodiscard]] Alpha alpha() const { return alpha_; }
  [[nodiscard]] TimeAxis axis() const { return axis_; }
  [[nodiscard]] std::size_t cell_count() const { return s_grid_.size(); }
  [[nodiscard]] const std::vector<double>& s_grid() const { return s_grid_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double total_mass() const;
  [[nodiscard]] const Quadrature& quadrature() const { return quadrature_; }
  [[nodiscard]] bool tabulated() const { return !evaluator_; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const Table& table() const { return table_; }
  [[nodiscard]] bool empty() const { return s_grid_.empty(); }

  // f_t(s_cell). Throws UsageError if t is not resolvable.
  [[nodiscard]] double value(double t, std::size_t cell) const;
  [[nodiscard]] bool resolvable(double t) const;

  [[nodiscard]] std::vector<double> breaks(std::size_t cell) const;
  [[nodiscard]] GridRep with_breaks(BreakFinder finder) const;

  // Declared sup of f over cells and any t; required for exact-bounded
  // series simulation of closed-form reps.
  [[nodiscard]] std::optional<double> sup_bound() const { return sup_bound_; }
  [[nodiscard]] GridRep with_sup_bound(double bound) const;

  [[nodiscard]] const std::map<std::string, std::string>& metadata() const { return metadata_; }
  [[nodiscard]] GridRep with_metadata(std::string key, std::string value) const;

  [[nodiscard]] GridRep select_cells(std::span<const std::size_t> cells) const;

 private:
  GridRep(Alpha alpha, TimeAxis axis) : alpha_(alpha), axis_(axis) {}
  void validate_grid() const;

  Alpha alpha_;
  TimeAxis axis_;
  std::vector<double> s_grid_;
  std::vector<double> weights_;
  Evaluator evaluator_;
  BreakFinder breaks_;
  std::vector<double> times_;
  Table table_;
  Quadrature quadrature_;
  std::optional<double> sup_bound_;
  std::map<std::string, std::string> metadata_;
};

// Draws one trajectory of the positive integrand process at the times it was
// prepared for.
using TrajectorySampler = std::function<void(RandomStream& rng, std::span<double> out)>;
using SamplerFactory = std::function<TrajectorySampler(std::span<const double> times)>;

/// Extremal integral over a probability space whose integrand is itself a
/// positive random process Y_t(u).
class DoublyStochasticRep {
 public:
  DoublyStochasticRep(Alpha alpha, std::string name, SamplerFactory factory,
                      double total_mass = 1.0);

  [[nodiscard]] Alpha alpha() const { return alpha_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double total_mass() const { return total_mass_; }
  [[nodiscard]] TrajectorySampler prepare(std::span<const double> times) const {
    return factory_(times);
  }

 private:
  Alpha alpha_;
  std::string name_;
  SamplerFactory factory_;
  double total_mass_;
};

/// Continuous part on a grid plus discrete part on atoms, carried on
/// disjoint supports.
struct HybridRep {
  GridRep continuous_part;
  AtomicRep discrete_part;

  [[nodiscard]] Alpha alpha() const { return continuous_part.alpha(); }
};

using SpectralRepresentation = std::variant<AtomicRep, GridRep, DoublyStochasticRep, HybridRep>;

// Empty atomic rep (N = 0).
[[nodiscard]] AtomicRep empty_atomic(Alpha alpha, TimeAxis axis = TimeAxis::Integer);

[[nodiscard]] HybridRep make_hybrid(GridRep continuous, AtomicRep discrete);

struct MonteCarloOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency
};

// Value of the integral in the fdd exponent, with its error attribution.
struct ExponentEstimate {
  double value = 0.0;
  double std_error = 0.0;        // Monte-Carlo only
  double quadrature_tolerance = 0.0;  // relative, grid only
  std::string method = "exact";
  std::size_t samples = 0;
};

[[nodiscard]] ExponentEstimate fdd_exponent(const AtomicRep& rep,
                                            std::span<const Constraint> constraints);
[[nodiscard]] ExponentEstimate fdd_exponent(const GridRep& rep,
                                            std::span<const Constraint> constraints);
[[nodiscard]] ExponentEstimate fdd_exponent(const DoublyStochasticRep& rep,
                                            std::span<const Constraint> constraints,
                                            const MonteCarloOptions& mc = {});
[[nodiscard]] ExponentEstimate fdd_exponent(const HybridRep& rep,
                                            std::span<const Constraint> constraints);
[[nodiscard]] ExponentEstimate fdd_exponent(const SpectralRepresentation& rep,
                                            std::span<const Constraint> constraints,
                                            const MonteCarloOptions& mc = {});

[[nodiscard]] double fdd_probability(const SpectralRepresentation& rep,
                                     std::span<const Constraint> constraints,
                                     const MonteCarloOptions& mc = {});

// Scale of max_j c_j X_{t_j}. Zero coefficients are dropped.
[[nodiscard]] FrechetScale scale_coefficient(const SpectralRepresentation& rep,
                                             std::span<const ComboTerm> combo,
                                             const MonteCarloOptions& mc = {});

// Single function of L^alpha_+ on an encoded support.
struct SpectralFunction {
  enum class Encoding { Atomic, Grid };
  Alpha alpha;
  Encoding encoding;
  std::vector<double> measure;  // atom masses or quadrature weights
  std::vector<double> values;
};

[[nodiscard]] SpectralFunction spectral_function(const AtomicRep& rep, double t);
[[nodiscard]] SpectralFunction spectral_function(const GridRep& rep, double t);

// integral |f^alpha - g^alpha| d mu.
[[nodiscard]] double rho_metric(const SpectralFunction& f, const SpectralFunction& g);

struct StationarityProbe {
  double shift;
  std::vector<Constraint> constraints;
  ExponentEstimate original;
  ExponentEstimate shifted;
  double deviation;  // absolute, or z-score for Monte-Carlo
};

struct StationarityReport {
  bool stationary = true;
  double max_deviation = 0.0;
  bool monte_carlo = false;
  std::vector<StationarityProbe> probes;
};

/// Compares fdd exponents of every probe against the same probe shifted by
/// each tau. Deterministic encodings use |difference| <= tol; Monte-Carlo
/// encodings use a z-score against `z_threshold`.
[[nodiscard]] StationarityReport check_stationarity(
    const SpectralRepresentation& rep, std::span<const double> shifts,
    const std::vector<std::vector<Constraint>>& probes, double tol,
    const MonteCarloOptions& mc = {}, double z_threshold = 4.0);

// True iff the atoms carrying each block of times are pairwise disjoint.
[[nodiscard]] bool independent_blocks(const AtomicRep& rep,
                                      const std::vector<std::vector<double>>& blocks);

}  // namespace maxstable
