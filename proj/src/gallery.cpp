#include "maxstable/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "maxstable/quadrature.hpp"

namespace maxstable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Power kernels have no compact effective support; grids stop here.
constexpr double kPowerCutoff = 1000.0;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) throw UsageError(std::string(what) + " must be finite and > 0");
}

}  // namespace

KernelSpec KernelSpec::indicator(double a, double b, double height) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw UsageError("indicator kernel needs finite a < b");
  }
  require_positive(height, "indicator height");
  KernelSpec k;
  k.kind_ = Kind::Indicator;
  k.p1_ = a;
  k.p2_ = b;
  k.amplitude_ = height;
  return k;
}

KernelSpec KernelSpec::gaussian(double scale, double amplitude) {
  require_positive(scale, "gaussian scale");
  require_positive(amplitude, "gaussian amplitude");
  KernelSpec k;
  k.kind_ = Kind::Gaussian;
  k.p1_ = scale;
  k.amplitude_ = amplitude;
  return k;
}

KernelSpec KernelSpec::exponential(double scale, double amplitude) {
  require_positive(scale, "exponential scale");
  require_positive(amplitude, "exponential amplitude");
  KernelSpec k;
  k.kind_ = Kind::Exponential;
  k.p1_ = scale;
  k.amplitude_ = amplitude;
  return k;
}

KernelSpec KernelSpec::power(double exponent, double amplitude) {
  require_positive(exponent, "power exponent");
  require_positive(amplitude, "power amplitude");
  KernelSpec k;
  k.kind_ = Kind::Power;
  k.p1_ = exponent;
  k.amplitude_ = amplitude;
  return k;
}

KernelSpec KernelSpec::table(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 2 || x.size() != y.size()) {
    throw UsageError("table kernel needs at least two (x, y) pairs of equal length");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || y[i] < 0.0) {
      throw UsageError("table kernel values must be finite and >= 0");
    }
    if (i > 0 && !(x[i] > x[i - 1])) throw UsageError("table kernel x must increase strictly");
  }
  KernelSpec k;
  k.kind_ = Kind::Table;
  k.x_ = std::move(x);
  k.y_ = std::move(y);
  return k;
}

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "indicator") {
    return indicator(j.value("a", 0.0), j.value("b", 1.0), j.value("height", 1.0));
  }
  if (type == "gaussian") return gaussian(j.value("scale", 1.0), j.value("amplitude", 1.0));
  if (type == "exponential") return exponential(j.value("scale", 1.0), j.value("amplitude", 1.0));
  if (type == "power") return power(j.at("exponent").get<double>(), j.value("amplitude", 1.0));
  if (type == "table") {
    return table(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>());
  }
  throw UsageError("unknown kernel type '" + type + "'");
}

nlohmann::json KernelSpec::to_json() const {
  switch (kind_) {
    case Kind::Indicator:
      return {{"type", "indicator"}, {"a", p1_}, {"b", p2_}, {"height", amplitude_}};
    case Kind::Gaussian:
      return {{"type", "gaussian"}, {"scale", p1_}, {"amplitude", amplitude_}};
    case Kind::Exponential:
      return {{"type", "exponential"}, {"scale", p1_}, {"amplitude", amplitude_}};
    case Kind::Power:
      return {{"type", "power"}, {"exponent", p1_}, {"amplitude", amplitude_}};
    case Kind::Table:
      return {{"type", "table"}, {"x", x_}, {"y", y_}};
  }
  return {};
}

std::string KernelSpec::name() const { return to_json().dump(); }

double KernelSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::Indicator:
      return (x >= p1_ && x < p2_) ? amplitude_ : 0.0;
    case Kind::Gaussian:
      return amplitude_ * std::exp(-0.5 * (x / p1_) * (x / p1_));
    case Kind::Exponential:
      return amplitude_ * std::exp(-std::abs(x) / p1_);
    case Kind::Power:
      return amplitude_ * std::pow(1.0 + std::abs(x), -p1_);
    case Kind::Table: {
      if (x < x_.front() || x > x_.back()) return 0.0;
      const auto it = std::upper_bound(x_.begin(), x_.end(), x);
      if (it == x_.end()) return y_.back();
      const std::size_t i = static_cast<std::size_t>(it - x_.begin());
      const double w = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
      return (1.0 - w) * y_[i - 1] + w * y_[i];
    }
  }
  return 0.0;
}

double KernelSpec::sup() const {
  if (kind_ == Kind::Table) return *std::max_element(y_.begin(), y_.end());
  return amplitude_;
}

std::vector<double> KernelSpec::breaks() const {
  switch (kind_) {
    case Kind::Indicator:
      return {p1_, p2_};
    case Kind::Gaussian:
      return {-8 * p1_, -4 * p1_, -2 * p1_, 0.0, 2 * p1_, 4 * p1_, 8 * p1_};
    case Kind::Exponential:
      return {-20 * p1_, -5 * p1_, 0.0, 5 * p1_, 20 * p1_};
    case Kind::Power:
      return {-10.0, -1.0, 0.0, 1.0, 10.0};
    case Kind::Table:
      return x_;
  }
  return {};
}

std::pair<double, double> KernelSpec::effective_support(Alpha alpha, double tail) const {
  const double a = alpha.value();
  switch (kind_) {
    case Kind::Indicator:
      return {p1_, p2_};
    case Kind::Gaussian: {
      const double r = p1_ * std::sqrt(2.0 * std::log(1.0 / tail) / a);
      return {-r, r};
    }
    case Kind::Exponential: {
      const double r = p1_ * std::log(1.0 / tail) / a;
      return {-r, r};
    }
    case Kind::Power:
      return {-kInf, kInf};
    case Kind::Table:
      return {x_.front(), x_.back()};
  }
  return {0.0, 0.0};
}

std::optional<double> KernelSpec::alpha_integral(Alpha alpha) const {
  const double a = alpha.value();
  const double amp = std::pow(amplitude_, a);
  switch (kind_) {
    case Kind::Indicator:
      return amp * (p2_ - p1_);
    case Kind::Gaussian:
      return amp * p1_ * std::sqrt(2.0 * std::numbers::pi / a);
    case Kind::Exponential:
      return amp * 2.0 * p1_ / a;
    case Kind::Power: {
      const double q = p1_ * a;
      if (q <= 1.0) return std::nullopt;
      return amp * 2.0 / (q - 1.0);
    }
    case Kind::Table: {
      double sum = 0.0;
      for (std::size_t i = 1; i < x_.size(); ++i) {
        const double y0 = y_[i - 1];
        const double y1 = y_[i];
        const double dx = x_[i] - x_[i - 1];
        // int over a linear segment of y^alpha
        if (std::abs(y1 - y0) < 1e-300) {
          sum += dx * std::pow(y0, a);
        } else {
          sum += dx * (std::pow(y1, a + 1) - std::pow(y0, a + 1)) / ((a + 1) * (y1 - y0));
        }
      }
      return sum;
    }
  }
  return std::nullopt;
}

double KernelSpec::alpha_tail(Alpha alpha, double r) const {
  if (kind_ != Kind::Power) return 0.0;
  const double q = p1_ * alpha.value();
  if (q <= 1.0) return kInf;
  return std::pow(amplitude_, alpha.value()) * 2.0 * std::pow(1.0 + r, 1.0 - q) / (q - 1.0);
}

IntegrabilityCheck check_integrability(const KernelSpec& kernel, Alpha alpha) {
  IntegrabilityCheck out;
  const auto analytic = kernel.alpha_integral(alpha);
  out.analytic = analytic.value_or(kInf);
  auto [lo, hi] = kernel.effective_support(alpha);
  lo = std::max(lo, -kPowerCutoff);
  hi = std::min(hi, kPowerCutoff);
  const double a = alpha.value();
  const auto breaks = kernel.breaks();
  out.quadrature =
      integrate([&](double x) { return std::pow(kernel(x), a); }, lo, hi, breaks).value;
  if (!analytic) return out;
  out.quadrature += kernel.alpha_tail(alpha, kPowerCutoff);
  out.relative_gap = std::abs(out.quadrature - out.analytic) / out.analytic;
  out.integrable = std::isfinite(out.analytic) && out.relative_gap <= 1e-8;
  return out;
}

ExtremalProcessReps extremal_process_rep(Alpha alpha, double horizon, std::size_t cells) {
  require_positive(horizon, "horizon");
  if (cells == 0) throw UsageError("extremal process grid needs at least one cell");
  const double h = horizon / static_cast<double>(cells);
  std::vector<double> u(cells);
  std::vector<double> halfline_w(cells, h);
  std::vector<double> s(cells);
  std::vector<double> standard_w(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    const double left = h * static_cast<double>(j);
    u[j] = left + 0.5 * h;
    // Lebesgue mass of {s : log(1/s) in [left, left + h)}.
    standard_w[j] = std::exp(-left) * -std::expm1(-h);
    // Representative point with w_j s_j^-1 = h, so each cell integrates exactly.
    s[j] = standard_w[j] / h;
  }
  const double inv_alpha = alpha.inverse();
  auto check_t = [horizon](double t) {
    if (t > horizon * (1.0 + 1e-12)) {
      throw UsageError("t = " + format_double(t) + " is beyond the encoded horizon " +
                       format_double(horizon));
    }
  };
  GridRep::Quadrature quad{"midpoint-in-log(1/s)", h};
  GridRep halfline(
      alpha, u, halfline_w,
      [u, check_t](double t, std::size_t cell) {
        check_t(t);
        return u[cell] <= t ? 1.0 : 0.0;
      },
      TimeAxis::Real, quad);
  std::vector<double> amplitude(cells);
  for (std::size_t j = 0; j < cells; ++j) amplitude[j] = std::pow(s[j], -inv_alpha);
  GridRep standardized(
      alpha, s, standard_w,
      [u, amplitude, check_t](double t, std::size_t cell) {
        check_t(t);
        return u[cell] <= t ? amplitude[cell] : 0.0;
      },
      TimeAxis::Real, quad);
  const std::string process = "extremal(alpha=" + format_double(alpha.value()) + ")";
  const std::string policy = "uniform in u=log(1/s) on (0," + format_double(horizon) +
                             "], cells=" + std::to_string(cells) + ", exact at multiples of " +
                             format_double(h);
  auto breaks = [u](std::size_t cell) { return std::vector<double>{u[cell]}; };
  return {halfline.with_breaks(breaks)
              .with_sup_bound(1.0)
              .with_metadata("process", process)
              .with_metadata("encoding", "halfline")
              .with_metadata("grid_policy", policy),
          standardized.with_breaks(breaks)
              .with_sup_bound(amplitude.front() > amplitude.back() ? amplitude.front()
                                                                   : amplitude.back())
              .with_metadata("process", process)
              .with_metadata("encoding", "standardized")
              .with_metadata("grid_policy", policy)};
}

namespace {

struct CellGrid {
  std::vector<double> s;
  std::vector<double> w;
  double declared_tolerance = 0.0;
};

// Midpoint cells in s such that g(t - s) is fully resolved for |t| <= radius.
CellGrid moving_maxima_cells(const KernelSpec& kernel, Alpha alpha,
                             const MovingMaximaLayout& layout) {
  require_positive(layout.step, "layout step");
  if (!(layout.radius >= 0.0)) throw UsageError("layout radius must be >= 0");
  auto [lo, hi] = kernel.effective_support(alpha);
  lo = std::max(lo, -kPowerCutoff);
  hi = std::min(hi, kPowerCutoff);
  const double s_min = -layout.radius - hi;
  const double s_max = layout.radius - lo;
  const auto n = static_cast<std::size_t>(std::ceil((s_max - s_min) / layout.step));
  CellGrid grid;
  grid.s.resize(n);
  grid.w.assign(n, layout.step);
  for (std::size_t j = 0; j < n; ++j) {
    grid.s[j] = s_min + (static_cast<double>(j) + 0.5) * layout.step;
  }
  // Declared tolerance: worst relative error of the marginal mass over a
  // lattice-aligned and a half-step-shifted time, against the closed form.
  const double exact = *kernel.alpha_integral(alpha);
  double worst = 0.0;
  for (double t : {0.0, 0.5 * layout.step, 0.25 * layout.step}) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += layout.step * std::pow(kernel(t - grid.s[j]), alpha.value());
    worst = std::max(worst, std::abs(sum - exact) / exact);
  }
  // Kinks of a two-kernel upper envelope: step^2 / 4 times the slope jump,
  // relative to int g^alpha.
  double kink = 0.0;
  if (kernel.kind() != KernelSpec::Kind::Indicator) {
    const std::size_t samples = 20000;
    const double a = std::max(lo, -50.0);
    const double b = std::min(hi, 50.0);
    const double dx = (b - a) / static_cast<double>(samples);
    double slope = 0.0;
    double prev = std::pow(kernel(a), alpha.value());
    for (std::size_t i = 1; i <= samples; ++i) {
      const double next = std::pow(kernel(a + static_cast<double>(i) * dx), alpha.value());
      slope = std::max(slope, std::abs(next - prev) / dx);
      prev = next;
    }
    kink = layout.step * layout.step * 2.0 * slope / (4.0 * exact);
  }
  grid.declared_tolerance = std::max({2.0 * worst, kink, 1e-12});
  return grid;
}

void require_integrable(const KernelSpec& kernel, Alpha alpha) {
  const auto check = check_integrability(kernel, alpha);
  if (!check.integrable) {
    throw UsageError("kernel " + kernel.name() + " is not alpha-integrable (int g^alpha = " +
                     format_double(check.analytic) + ", quadrature " +
                     format_double(check.quadrature) + ")");
  }
}

}  // namespace

SpectralRepresentation moving_maxima_rep(const KernelSpec& kernel, Alpha alpha, TimeAxis axis,
                                         const MovingMaximaLayout& layout) {
  require_integrable(kernel, alpha);
  const std::string process = "moving_maxima(" + kernel.name() + ")";
  if (axis == TimeAxis::Integer) {
    if (layout.atom_radius < 0 || layout.time_radius < 0) {
      throw UsageError("integer layout radii must be >= 0");
    }
    std::vector<double> atoms;
    for (long i = -layout.atom_radius; i <= layout.atom_radius; ++i) {
      atoms.push_back(static_cast<double>(i));
    }
    if (layout.integer_as_grid) {
      GridRep rep(
          alpha, atoms, std::vector<double>(atoms.size(), 1.0),
          [kernel, atoms](double t, std::size_t cell) { return kernel(t - atoms[cell]); },
          TimeAxis::Integer, GridRep::Quadrature{"counting", 0.0});
      return rep.with_sup_bound(kernel.sup())
          .with_metadata("process", process)
          .with_metadata("encoding", "integer-grid");
    }
    std::vector<double> times;
    for (long t = -layout.time_radius; t <= layout.time_radius; ++t) {
      times.push_back(static_cast<double>(t));
    }
    Table values(times.size(), atoms.size());
    std::vector<char> nonzero(atoms.size(), 0);
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        values(k, i) = kernel(times[k] - atoms[i]);
        if (values(k, i) > 0.0) nonzero[i] = 1;
      }
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (nonzero[i]) keep.push_back(i);
    }
    AtomicRep full(alpha, times, values, TimeAxis::Integer, true);
    AtomicRep pruned = full.select_atoms(keep);
    return AtomicRep(alpha, pruned.times(), pruned.masses(), pruned.values(), TimeAxis::Integer);
  }
  CellGrid cells = moving_maxima_cells(kernel, alpha, layout);
  const std::vector<double> s = cells.s;
  const std::vector<double> kernel_breaks = kernel.breaks();
  GridRep rep(
      alpha, cells.s, cells.w,
      [kernel, s](double t, std::size_t cell) { return kernel(t - s[cell]); }, TimeAxis::Real,
      GridRep::Quadrature{"midpoint", cells.declared_tolerance});
  return rep
      .with_breaks([s, kernel_breaks](std::size_t cell) {
        std::vector<double> out;
        for (double b : kernel_breaks) out.push_back(s[cell] + b);
        return out;
      })
      .with_sup_bound(kernel.sup())
      .with_metadata("process", process)
      .with_metadata("stationary_window", "|t| <= " + format_double(layout.radius))
      .with_metadata("grid_policy", "midpoint cells, step " + format_double(layout.step));
}

GridRep mixed_moving_maxima_rep(const std::vector<MixtureComponent>& components, Alpha alpha,
                                const MovingMaximaLayout& layout) {
  if (components.empty()) throw UsageError("mixed moving maxima needs at least one component");
  std::vector<double> s_all;
  std::vector<double> w_all;
  std::vector<std::size_t> owner;
  std::vector<KernelSpec> kernels;
  double tolerance = 0.0;
  double sup = 0.0;
  for (std::size_t x = 0; x < components.size(); ++x) {
    const auto& c = components[x];
    require_positive(c.weight, "mixing weight");
    require_integrable(c.kernel, alpha);
    CellGrid cells = moving_maxima_cells(c.kernel, alpha, layout);
    for (std::size_t j = 0; j < cells.s.size(); ++j) {
      s_all.push_back(cells.s[j]);
      w_all.push_back(c.weight * cells.w[j]);
      owner.push_back(x);
    }
    kernels.push_back(c.kernel);
    tolerance = std::max(tolerance, cells.declared_tolerance);
    sup = std::max(sup, c.kernel.sup());
  }
  const std::vector<double> s = s_all;
  GridRep rep(
      alpha, std::move(s_all), std::move(w_all),
      [kernels, owner, s](double t, std::size_t cell) {
        return kernels[owner[cell]](t - s[cell]);
      },
      TimeAxis::Real, GridRep::Quadrature{"midpoint", tolerance});
  std::string process = "mixed_moving_maxima(";
  for (std::size_t x = 0; x < components.size(); ++x) {
    if (x > 0) process += ",";
    process += format_double(components[x].weight) + "*" + components[x].kernel.name();
  }
  process += ")";
  return rep
      .with_breaks([kernels, owner, s](std::size_t cell) {
        std::vector<double> out;
        for (double b : kernels[owner[cell]].breaks()) out.push_back(s[cell] + b);
        return out;
      })
      .with_sup_bound(sup)
      .with_metadata("process", process)
      .with_metadata("mixture_components", std::to_string(components.size()))
      .with_metadata("stationary_window", "|t| <= " + format_double(layout.radius));
}

DoublyStochasticRep brown_resnick_rep(const GaussianIncrementModel& model) {
  return DoublyStochasticRep(
      Alpha(1.0), "brown_resnick:" + model.name(), [model](std::span<const double> times) {
        auto sampler = std::make_shared<const GaussianSampler>(model, times);
        std::vector<double> half(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) half[k] = 0.5 * sampler->variances()[k];
        return TrajectorySampler([sampler, half](RandomStream& rng, std::span<double> out) {
          sampler->draw(rng, out);
          for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::exp(out[k] - half[k]);
        });
      });
}

GridRep gaussian_moving_maxima_rep(const MovingMaximaLayout& layout) {
  const auto kernel = KernelSpec::gaussian(1.0, 1.0 / std::sqrt(2.0 * std::numbers::pi));
  return std::get<GridRep>(moving_maxima_rep(kernel, Alpha(1.0), TimeAxis::Real, layout));
}

GridRep single_point_rep(Alpha alpha, double decay) {
  if (!std::isfinite(decay) || decay < 0.0) throw UsageError("decay must be finite and >= 0");
  const double exponent = -decay / alpha.value();
  GridRep rep(
      alpha, {0.0}, {1.0},
      [exponent](double t, std::size_t) { return std::pow(1.0 + std::abs(t), exponent); },
      TimeAxis::Real, GridRep::Quadrature{"exact", 0.0});
  return rep.with_breaks([](std::size_t) { return std::vector<double>{0.0}; })
      .with_sup_bound(1.0)
      .with_metadata("process", decay == 0.0 ? "constant" : "power_cospectral(decay=" +
                                                                format_double(decay) + ")");
}

ContinuousDiscreteParts continuous_discrete_split(const HybridRep& rep) {
  return {rep.continuous_part, rep.discrete_part, true};
}

ContinuousDiscreteParts continuous_discrete_split(const SpectralRepresentation& rep) {
  if (const auto* a = std::get_if<AtomicRep>(&rep)) {
    return {GridRep::empty(a->alpha()), *a, true};
  }
  if (const auto* g = std::get_if<GridRep>(&rep)) {
    return {*g, empty_atomic(g->alpha(), g->axis()), true};
  }
  if (const auto* h = std::get_if<HybridRep>(&rep)) return continuous_discrete_split(*h);
  throw UsageError("doubly stochastic reps have no continuous/discrete encoding split");
}

const std::vector<GalleryEntry>& gallery_entries() {
  static const std::vector<GalleryEntry> entries = {
      {"extremal_process", "independent max-increments, 1_(0,t](u) on (0, horizon]",
       {{"alpha", 1.0}, {"horizon", 10.0}, {"cells", 10000}, {"encoding", "halfline"}}},
      {"moving_maxima", "f_t(s) = g(t - s) for a kernel g",
       {{"alpha", 1.0},
        {"axis", "real"},
        {"kernel", {{"type", "gaussian"}, {"scale", 1.0}, {"amplitude", 1.0}}},
        {"step", 0.02},
        {"radius", 40.0},
        {"atom_radius", 20},
        {"time_radius", 10000},
        {"integer_as_grid", false}}},
      {"mixed_moving_maxima", "finite mixture of moving maxima kernels",
       {{"alpha", 1.0},
        {"components",
         {{{"kernel", {{"type", "gaussian"}, {"scale", 1.0}}}, {"weight", 0.5}},
          {{"kernel", {{"type", "exponential"}, {"scale", 2.0}}}, {"weight", 0.5}}}},
        {"step", 0.02},
        {"radius", 40.0}}},
      {"gaussian_moving_maxima", "moving maxima with the standard normal density, alpha = 1",
       {{"step", 0.02}, {"radius", 40.0}}},
      {"brown_resnick", "exp(W_t - sigma_t^2 / 2) over fractional Brownian motion, alpha = 1",
       {{"hurst", 0.5}, {"sigma", 1.0}}},
      {"constant", "f_t = 1: the random constant process", {{"alpha", 1.0}}},
      {"power_cospectral", "single point with f_t^alpha = (1 + |t|)^-decay",
       {{"alpha", 1.0}, {"decay", 1.0}}},
  };
  return entries;
}

SpectralRepresentation build_gallery(const std::string& name, const nlohmann::json& params) {
  const auto& entries = gallery_entries();
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const GalleryEntry& e) { return e.name == name; });
  if (it == entries.end()) throw UsageError("unknown gallery process '" + name + "'");
  nlohmann::json p = it->defaults;
  if (!params.is_null()) {
    if (!params.is_object()) throw UsageError("gallery params must be an object");
    for (const auto& [key, value] : params.items()) {
      if (!p.contains(key)) {
        throw UsageError("gallery process '" + name + "' has no parameter '" + key + "'");
      }
      p[key] = value;
    }
  }
  try {
    auto layout = [&p] {
      MovingMaximaLayout l;
      l.step = p.value("step", l.step);
      l.radius = p.value("radius", l.radius);
      l.atom_radius = p.value("atom_radius", l.atom_radius);
      l.time_radius = p.value("time_radius", l.time_radius);
      l.integer_as_grid = p.value("integer_as_grid", l.integer_as_grid);
      return l;
    };
    if (name == "extremal_process") {
      auto reps = extremal_process_rep(Alpha(p.at("alpha").get<double>()),
                                       p.at("horizon").get<double>(),
                                       p.at("cells").get<std::size_t>());
      const auto encoding = p.at("encoding").get<std::string>();
      if (encoding == "halfline") return reps.halfline;
      if (encoding == "standardized") return reps.standardized;
      throw UsageError("extremal_process encoding must be halfline or standardized");
    }
    if (name == "moving_maxima") {
      const auto axis = p.at("axis").get<std::string>();
      if (axis != "real" && axis != "integer") throw UsageError("axis must be real or integer");
      return moving_maxima_rep(KernelSpec::from_json(p.at("kernel")),
                               Alpha(p.at("alpha").get<double>()),
                               axis == "real" ? TimeAxis::Real : TimeAxis::Integer, layout());
    }
    if (name == "mixed_moving_maxima") {
      std::vector<MixtureComponent> components;
      for (const auto& c : p.at("components")) {
        components.push_back({KernelSpec::from_json(c.at("kernel")), c.at("weight").get<double>()});
      }
      return mixed_moving_maxima_rep(components, Alpha(p.at("alpha").get<double>()), layout());
    }
    if (name == "gaussian_moving_maxima") return gaussian_moving_maxima_rep(layout());
    if (name == "brown_resnick") {
      return brown_resnick_rep(
          GaussianIncrementModel::fbm(p.at("hurst").get<double>(), p.at("sigma").get<double>()));
    }
    if (name == "constant") return single_point_rep(Alpha(p.at("alpha").get<double>()), 0.0);
    return single_point_rep(Alpha(p.at("alpha").get<double>()), p.at("decay").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("gallery parameters for '" + name + "': " + e.what());
  }
}

}  // namespace maxstable
