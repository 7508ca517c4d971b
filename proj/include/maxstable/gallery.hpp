#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxstable/gaussian.hpp"
#include "maxstable/spectral_rep.hpp"

namespace maxstable {

/// Non-negative kernel g on the line used by moving-maxima constructions.
///
///   indicator     height * 1_[a, b)(x)
///   gaussian      amplitude * exp(-x^2 / (2 scale^2))
///   exponential   amplitude * exp(-|x| / scale)
///   power         amplitude * (1 + |x|)^-exponent
///   table         piecewise-linear through (x_i, y_i), zero outside
class KernelSpec {
 public:
  enum class Kind { Indicator, Gaussian, Exponential, Power, Table };

  static KernelSpec indicator(double a, double b, double height = 1.0);
  static KernelSpec gaussian(double scale = 1.0, double amplitude = 1.0);
  static KernelSpec exponential(double scale = 1.0, double amplitude = 1.0);
  static KernelSpec power(double exponent, double amplitude = 1.0);
  static KernelSpec table(std::vector<double> x, std::vector<double> y);

  static KernelSpec from_json(const nlohmann::json& j);
  [[nodiscard]] nlohmann::json to_json() const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double sup() const;
  // Points where g is not smooth or where its mass concentrates.
  [[nodiscard]] std::vector<double> breaks() const;
  // Interval outside which g^alpha is below `tail` relative to its sup
  // (infinite for the power family).
  [[nodiscard]] std::pair<double, double> effective_support(Alpha alpha, double tail = 1e-17) const;

  // int g^alpha dx in closed form; nullopt when divergent.
  [[nodiscard]] std::optional<double> alpha_integral(Alpha alpha) const;
  // int_{|x| > r} g^alpha dx for the power family; 0 for the others, whose
  // effective support is compact.
  [[nodiscard]] double alpha_tail(Alpha alpha, double r) const;

 private:
  Kind kind_ = Kind::Gaussian;
  double p1_ = 0.0;
  double p2_ = 0.0;
  double amplitude_ = 1.0;
  std::vector<double> x_;
  std::vector<double> y_;
};

struct IntegrabilityCheck {
  bool integrable = false;
  double analytic = 0.0;    // inf when divergent
  double quadrature = 0.0;  // over the effective support
  double relative_gap = 0.0;
};

// Closed-form and quadrature evaluation of int g^alpha; they must agree to
// 1e-8 relative for an integrable kernel.
[[nodiscard]] IntegrabilityCheck check_integrability(const KernelSpec& kernel, Alpha alpha);

// Discretization of the spectral variable s for moving-maxima grids: midpoint
// cells of width `step` covering [-radius, radius] beyond the kernel's
// effective support.
struct MovingMaximaLayout {
  double step = 0.02;
  double radius = 40.0;
  // Integer axis only: atoms at integers |i| <= atom_radius, times at
  // integers |t| <= time_radius.
  long atom_radius = 20;
  long time_radius = 10000;
  bool integer_as_grid = false;
};

struct ExtremalProcessReps {
  GridRep halfline;      // f_t(u) = 1_(0,t](u) on (0, horizon]
  GridRep standardized;  // f_t(s) = s^(-1/alpha) 1_(0,t](log(1/s)) on (0, 1)
};

// Both encodings use `cells` uniform cells in u = log(1/s) over (0, horizon];
// times that are multiples of horizon / cells are represented exactly.
[[nodiscard]] ExtremalProcessReps extremal_process_rep(Alpha alpha, double horizon,
                                                       std::size_t cells = 10000);

// f_t(s) = g(t - s). Real axis: GridRep over midpoint cells. Integer axis:
// AtomicRep with counting measure on the integers (or an integer-cell GridRep
// when layout.integer_as_grid).
[[nodiscard]] SpectralRepresentation moving_maxima_rep(const KernelSpec& kernel, Alpha alpha,
                                                       TimeAxis axis = TimeAxis::Real,
                                                       const MovingMaximaLayout& layout = {});

struct MixtureComponent {
  KernelSpec kernel;
  double weight;  // nu({x})
};

// f_t(x, s) = g_x(t - s) over the finite space W times a grid in s.
[[nodiscard]] GridRep mixed_moving_maxima_rep(const std::vector<MixtureComponent>& components,
                                              Alpha alpha, const MovingMaximaLayout& layout = {});

// Doubly stochastic 1-Frechet process with kernel exp(W_t - sigma_t^2 / 2).
[[nodiscard]] DoublyStochasticRep brown_resnick_rep(const GaussianIncrementModel& model);

// Moving maxima with kernel (2 pi)^(-1/2) exp(-x^2 / 2), alpha = 1.
[[nodiscard]] GridRep gaussian_moving_maxima_rep(const MovingMaximaLayout& layout = {});

// Single co-spectral function on the real line: one cell of unit mass with
// f_t = (1 + |t|)^(-decay / alpha). decay = 0 is the constant process.
[[nodiscard]] GridRep single_point_rep(Alpha alpha, double decay);

struct ContinuousDiscreteParts {
  GridRep continuous;
  AtomicRep discrete;
  bool independent = true;
};

[[nodiscard]] ContinuousDiscreteParts continuous_discrete_split(const HybridRep& rep);
[[nodiscard]] ContinuousDiscreteParts continuous_discrete_split(const SpectralRepresentation& rep);

struct GalleryEntry {
  std::string name;
  std::string summary;
  nlohmann::json defaults;
};

[[nodiscard]] const std::vector<GalleryEntry>& gallery_entries();

// Builds a named gallery process; params override the entry's defaults.
[[nodiscard]] SpectralRepresentation build_gallery(const std::string& name,
                                                   const nlohmann::json& params);

}  // namespace maxstable
