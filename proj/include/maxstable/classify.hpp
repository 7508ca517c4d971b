#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxstable/gallery.hpp"
#include "maxstable/gaussian.hpp"
#include "maxstable/spectral_rep.hpp"

namespace maxstable {

enum class Verdict { Finite, Divergent, Undetermined };

[[nodiscard]] const char* to_string(Verdict v);

// Thresholds turning a partial-integral trajectory I_{L_1} <= ... <= I_{L_n}
// into a verdict:
//   finite      I_n - I_{n-1} <= atol + rtol * I_n
//   divergent   each of the last `trailing` increments is at least
//               growth_floor * log(L_k / L_{k-1})
//   otherwise   undetermined
struct DivergenceRules {
  double atol = 1e-8;
  double rtol = 0.05;
  double growth_floor = 1.0;
  std::size_t trailing = 3;
};

[[nodiscard]] Verdict judge_trajectory(std::span<const double> windows,
                                       std::span<const double> trajectory,
                                       const DivergenceRules& rules);

[[nodiscard]] std::vector<double> default_windows();  // {10, 100, 1000, 10000}

/// Weight w(t) >= 0 with infinite integral over the time axis.
struct WeightFunction {
  enum class Profile { Constant, NonIncreasing, NonDecreasing };

  std::string family = "constant";  // or "power"
  double exponent = 0;  // w(t) = (1 + |t|)^exponent
  bool integral_infinite = true;
  Profile profile = Profile::Constant;

  static WeightFunction constant();
  // Declares integral_infinite from the family: exponent >= -1.
  static WeightFunction power(double exponent);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] std::string label() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

// w = 1 and (1 + |t|)^-theta for theta in {1/4, 1/2, 1}; with strict,
// the non-decreasing profiles (1 + |t|)^theta instead.
[[nodiscard]] std::vector<WeightFunction> default_battery(bool strict = false);

// I_L(s) = int_{|t| <= L} w(t) f_t^alpha(s) lambda(dt) for every window L.
// Integer axis: exact sums over the integers; real axis: adaptive quadrature
// (closed-form GridRep) or the trapezoid rule on tabulated times.
[[nodiscard]] std::vector<double> cospectral_partial_integrals(
    const AtomicRep& rep, std::size_t atom, std::span<const double> windows,
    const WeightFunction& weight = WeightFunction::constant());
[[nodiscard]] std::vector<double> cospectral_partial_integrals(
    const GridRep& rep, std::size_t cell, std::span<const double> windows,
    const WeightFunction& weight = WeightFunction::constant());

struct ClassificationOptions {
  std::vector<double> windows = default_windows();
  DivergenceRules rules;
  unsigned workers = 0;
};

struct PointClassification {
  std::size_t index = 0;
  double location = 0.0;  // atom index or grid point s
  double mass = 0.0;
  std::vector<double> trajectory;  // unweighted
  Verdict hopf = Verdict::Undetermined;
  // Positive/null only.
  std::vector<std::vector<double>> weighted;
  std::vector<Verdict> member_verdicts;
  std::vector<std::size_t> witnesses;     // battery indices with finite integral
  std::optional<std::size_t> witness;     // first witness in battery order
  std::string label;  // dissipative|conservative|undetermined or null|positive|undetermined
};

struct ClassificationReport {
  std::string kind;  // "hopf" | "positive-null"
  std::string encoding;
  std::vector<double> windows;
  DivergenceRules rules;
  std::vector<WeightFunction> battery;
  std::vector<PointClassification> points;
  double total_mass = 0.0;
  // Hopf: dissipative_mass, conservative_mass, undetermined_mass.
  // Positive/null: null_mass, positive_mass, undetermined_mass.
  std::vector<std::pair<std::string, double>> aggregate;
  std::string overall;
  std::string note;

  [[nodiscard]] double mass_of(const std::string& key) const;
  [[nodiscard]] std::size_t count_label(const std::string& label) const;
};

template <class Rep>
struct HopfSplit {
  ClassificationReport report;
  Rep conservative;
  Rep dissipative;
  Rep undetermined;
};

template <class Rep>
struct PositiveNullSplit {
  ClassificationReport report;
  Rep positive;
  Rep null;
  Rep undetermined;
};

// Real-axis atomic reps with more than one non-proportional atom are
// rejected: a stationary continuous-time process cannot be spectrally
// discrete unless it is the random constant process.
[[nodiscard]] HopfSplit<AtomicRep> hopf_classify(const AtomicRep& rep,
                                                 const ClassificationOptions& options = {});
[[nodiscard]] HopfSplit<GridRep> hopf_classify(const GridRep& rep,
                                               const ClassificationOptions& options = {});

[[nodiscard]] PositiveNullSplit<AtomicRep> positive_null_classify(
    const AtomicRep& rep, const std::vector<WeightFunction>& battery,
    const ClassificationOptions& options = {});
[[nodiscard]] PositiveNullSplit<GridRep> positive_null_classify(
    const GridRep& rep, const std::vector<WeightFunction>& battery,
    const ClassificationOptions& options = {});

[[nodiscard]] nlohmann::json to_json(const ClassificationReport& report);

struct AtomMerge {
  std::size_t kept;     // original index of the surviving atom
  std::size_t removed;  // original index of the merged atom
  double factor;        // f(removed) = factor * f(kept)
};

struct ReductionResult {
  AtomicRep reduced;
  std::vector<std::size_t> kept;          // original indices, in order
  std::vector<std::size_t> dropped_zero;  // all-zero atoms removed
  std::vector<AtomMerge> merges;
  bool minimal = true;
};

// Removes zero atoms and merges proportional co-spectral vectors into the
// lower-index atom, carrying mass so every fdd exponent is unchanged.
[[nodiscard]] ReductionResult minimal_discrete_reduce(const AtomicRep& rep,
                                                      double tolerance = 1e-10);

[[nodiscard]] nlohmann::json to_json(const ReductionResult& result);

struct Orbit {
  std::vector<std::size_t> atoms;
  std::optional<std::size_t> period;  // nullopt: infinite orbit
  std::string label;  // "positive-conservative" | "dissipative-null"
};

struct OrbitDecomposition {
  std::string flow;
  std::vector<Orbit> orbits;
  bool spectrally_discrete = true;
};

// The flow acts by f_{t+1}(i) = f_t(perm[i]); this is verified on every
// consecutive pair of integer times of rep.
[[nodiscard]] OrbitDecomposition orbit_decompose(std::span<const std::size_t> perm,
                                                 const AtomicRep& rep);

// Shift on the integers acting on atoms i in Z, f_t(i) = g(t - i).
struct ShiftOnZ {
  KernelSpec kernel;
  Alpha alpha;
};

[[nodiscard]] OrbitDecomposition orbit_decompose(const ShiftOnZ& shift);

[[nodiscard]] nlohmann::json to_json(const OrbitDecomposition& decomposition);

struct BrTestOptions {
  std::vector<double> windows{10.0, 100.0, 1000.0};
  std::size_t n_paths = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  DivergenceRules rules;
  // Integration grid: uniform step on [-fine_extent, fine_extent], then
  // points_per_decade log-spaced points out to the last window.
  double fine_step = 0.05;
  double fine_extent = 20.0;
  std::size_t points_per_decade = 60;
};

struct BrTailBound {
  std::vector<double> t0;  // per path
  std::vector<double> bound;  // per path, both sides
  std::size_t fallback_paths = 0;
  double median = 0.0;
  double max = 0.0;
};

struct BrClosedFormCheck {
  double median_relative_error = 0.0;
  double max_relative_error = 0.0;
};

struct BrTestResult {
  std::string verdict;  // "convergent" | "divergent" | "undetermined"
  std::string model;
  std::vector<double> windows;
  std::vector<double> grid;
  Table integrals;  // integrals(path, window)
  std::vector<std::size_t> verdict_counts;  // finite, divergent, undetermined
  std::vector<double> median_integral;
  std::vector<double> median_increment;
  double median_relative_last_increment = 0.0;
  std::optional<BrTailBound> tail;
  std::optional<BrClosedFormCheck> closed_form;
  std::uint64_t seed = 0;
  double jitter = 0.0;
};

[[nodiscard]] BrTestResult br_dissipativity_test(const GaussianIncrementModel& model,
                                                 const BrTestOptions& options);

[[nodiscard]] nlohmann::json to_json(const BrTestResult& result);

}  // namespace maxstable
