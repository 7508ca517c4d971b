#include "maxstable/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maxstable/parallel.hpp"
#include "maxstable/quadrature.hpp"

namespace maxstable {

namespace {

std::string window_name(double L) {
  std::ostringstream os;
  os.precision(17);
  os << "window |t| <= " << L;
  return os.str();
}

void require_windows(std::span<const double> windows, std::size_t minimum) {
  if (windows.size() < minimum) {
    throw UsageError("window schedule needs at least " + std::to_string(minimum) + " windows");
  }
  for (std::size_t k = 0; k < windows.size(); ++k) {
    if (!std::isfinite(windows[k]) || windows[k] <= 0.0 || (k > 0 && windows[k] <= windows[k - 1])) {
      throw UsageError("windows must be finite, positive and strictly increasing");
    }
  }
}

// Linear interpolation of tabulated (x, y) at x0 inside the table range.
double interpolate(std::span<const double> x, std::span<const double> y, double x0) {
  const auto it = std::lower_bound(x.begin(), x.end(), x0);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (i < x.size() && x[i] == x0) return y[i];
  const double w = (x0 - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

// int_{-L}^{L} of tabulated values by the trapezoid rule, for every window.
std::vector<double> tabulated_real_integrals(std::span<const double> times,
                                             std::span<const double> integrand,
                                             std::span<const double> windows) {
  std::vector<double> out;
  for (double L : windows) {
    if (times.empty() || times.front() > -L || times.back() < L) {
      throw UsageError(window_name(L) + " is not covered by the tabulated times");
    }
    std::vector<double> x{-L};
    std::vector<double> y{interpolate(times, integrand, -L)};
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] > -L && times[k] < L) {
        x.push_back(times[k]);
        y.push_back(integrand[k]);
      }
    }
    x.push_back(L);
    y.push_back(interpolate(times, integrand, L));
    out.push_back(trapezoid(x, y));
  }
  return out;
}

// Running sums over the integers in [-L, L] of g(t).
template <class G>
std::vector<double> integer_sums(std::span<const double> windows, G&& g) {
  std::vector<double> out;
  double total = 0.0;
  long reached = -1;
  for (double L : windows) {
    const long n = static_cast<long>(std::floor(L));
    for (long t = reached + 1; t <= n; ++t) {
      try {
        total += t == 0 ? g(0.0) : g(static_cast<double>(t)) + g(-static_cast<double>(t));
      } catch (const UsageError& e) {
        throw UsageError(window_name(L) + ": " + e.what());
      }
    }
    reached = std::max(reached, n);
    out.push_back(total);
  }
  return out;
}

std::string hopf_label(Verdict v) {
  switch (v) {
    case Verdict::Finite:
      return "dissipative";
    case Verdict::Divergent:
      return "conservative";
    case Verdict::Undetermined:
      break;
  }
  return "undetermined";
}

struct PointSource {
  std::size_t count;
  std::function<double(std::size_t)> mass;
  std::function<double(std::size_t)> location;
  std::function<std::vector<double>(std::size_t, const WeightFunction&)> integrals;
};

void summarize(ClassificationReport& report, const std::vector<std::string>& keys) {
  report.total_mass = 0.0;
  report.aggregate.clear();
  for (const auto& key : keys) report.aggregate.emplace_back(key + "_mass", 0.0);
  std::vector<std::size_t> counts(keys.size(), 0);
  for (const auto& p : report.points) {
    report.total_mass += p.mass;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (p.label == keys[k]) {
        report.aggregate[k].second += p.mass;
        ++counts[k];
      }
    }
  }
  std::vector<std::string> present;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (counts[k] > 0) present.push_back(keys[k]);
  }
  if (present.empty()) {
    report.overall = "empty";
  } else if (present.size() == 1) {
    report.overall = present.front();
  } else {
    report.overall = "mixed";
  }
}

std::vector<std::size_t> indices_with(const ClassificationReport& report, const std::string& label) {
  std::vector<std::size_t> out;
  for (const auto& p : report.points) {
    if (p.label == label) out.push_back(p.index);
  }
  return out;
}

ClassificationReport run_hopf(const PointSource& source, const ClassificationOptions& options,
                              std::string encoding) {
  require_windows(options.windows, 3);
  ClassificationReport report;
  report.kind = "hopf";
  report.encoding = std::move(encoding);
  report.windows = options.windows;
  report.rules = options.rules;
  report.points.resize(source.count);
  const auto unit = WeightFunction::constant();
  parallel_for(source.count, options.workers, [&](std::size_t i) {
    auto& p = report.points[i];
    p.index = i;
    p.location = source.location(i);
    p.mass = source.mass(i);
    p.trajectory = source.integrals(i, unit);
    p.hopf = judge_trajectory(options.windows, p.trajectory, options.rules);
    p.label = hopf_label(p.hopf);
  });
  summarize(report, {"dissipative", "conservative", "undetermined"});
  report.note =
      "finite: last increment <= atol + rtol * I; divergent: trailing increments >= "
      "growth_floor * log(window ratio); undetermined otherwise";
  return report;
}

ClassificationReport run_positive_null(const PointSource& source,
                                       std::vector<WeightFunction> battery,
                                       const ClassificationOptions& options, std::string encoding) {
  require_windows(options.windows, 3);
  if (battery.empty()) throw UsageError("weight battery is empty");
  for (const auto& w : battery) {
    if (!w.integral_infinite) {
      throw UsageError("battery member " + w.label() +
                       " has a finite integral; weights must integrate to infinity");
    }
  }
  auto is_constant = [](const WeightFunction& w) { return w.family == "constant"; };
  if (std::none_of(battery.begin(), battery.end(), is_constant)) {
    battery.push_back(WeightFunction::constant());
  }
  const std::size_t constant_index = static_cast<std::size_t>(
      std::find_if(battery.begin(), battery.end(), is_constant) - battery.begin());

  ClassificationReport report;
  report.kind = "positive-null";
  report.encoding = std::move(encoding);
  report.windows = options.windows;
  report.rules = options.rules;
  report.battery = battery;
  report.points.resize(source.count);
  parallel_for(source.count, options.workers, [&](std::size_t i) {
    auto& p = report.points[i];
    p.index = i;
    p.location = source.location(i);
    p.mass = source.mass(i);
    for (std::size_t m = 0; m < battery.size(); ++m) {
      p.weighted.push_back(source.integrals(i, battery[m]));
      p.member_verdicts.push_back(judge_trajectory(options.windows, p.weighted.back(), options.rules));
      if (p.member_verdicts.back() == Verdict::Finite) p.witnesses.push_back(m);
    }
    p.trajectory = p.weighted[constant_index];
    p.hopf = p.member_verdicts[constant_index];
    if (p.hopf == Verdict::Finite) {
      p.witness = constant_index;
    } else if (!p.witnesses.empty()) {
      p.witness = p.witnesses.front();
    }
    const bool all_divergent =
        std::all_of(p.member_verdicts.begin(), p.member_verdicts.end(),
                    [](Verdict v) { return v == Verdict::Divergent; });
    if (p.witness) {
      p.label = "null";
    } else if (all_divergent) {
      p.label = "positive";
    } else {
      p.label = "undetermined";
    }
  });
  summarize(report, {"null", "positive", "undetermined"});
  report.note =
      "null: some battery weight gives a finite weighted integral (witness); positive: every "
      "battery weight diverges, i.e. no witness found in the battery. Positivity quantifies over "
      "all admissible weights and is not decided numerically.";
  return report;
}

PointSource atomic_source(const AtomicRep& rep, std::span<const double> windows) {
  if (rep.axis() == TimeAxis::Real && rep.atom_count() > 1) {
    const auto reduced = minimal_discrete_reduce(rep);
    if (reduced.reduced.atom_count() > 1) {
      throw UsageError(
          "an atomic rep on the real line with " + std::to_string(reduced.reduced.atom_count()) +
          " non-proportional atoms cannot describe a stationary continuous-time process: the only "
          "spectrally discrete stationary process on the real line is the random constant process");
    }
  }
  PointSource source;
  source.count = rep.atom_count();
  source.mass = [&rep](std::size_t i) { return rep.masses()[i]; };
  source.location = [](std::size_t i) { return static_cast<double>(i); };
  std::vector<double> w(windows.begin(), windows.end());
  source.integrals = [&rep, w](std::size_t i, const WeightFunction& weight) {
    return cospectral_partial_integrals(rep, i, w, weight);
  };
  return source;
}

PointSource grid_source(const GridRep& rep, std::span<const double> windows) {
  PointSource source;
  source.count = rep.cell_count();
  source.mass = [&rep](std::size_t j) { return rep.weights()[j]; };
  source.location = [&rep](std::size_t j) { return rep.s_grid()[j]; };
  std::vector<double> w(windows.begin(), windows.end());
  source.integrals = [&rep, w](std::size_t j, const WeightFunction& weight) {
    return cospectral_partial_integrals(rep, j, w, weight);
  };
  return source;
}

nlohmann::json rules_json(const DivergenceRules& r) {
  return {{"atol", r.atol},
          {"rtol", r.rtol},
          {"growth_floor", r.growth_floor},
          {"trailing", r.trailing}};
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite:
      return "finite";
    case Verdict::Divergent:
      return "divergent";
    case Verdict::Undetermined:
      break;
  }
  return "undetermined";
}

Verdict judge_trajectory(std::span<const double> windows, std::span<const double> trajectory,
                         const DivergenceRules& rules) {
  if (trajectory.size() != windows.size() || trajectory.size() < 2) {
    throw UsageError("trajectory and window schedule must match and have >= 2 entries");
  }
  const std::size_t n = trajectory.size();
  if (!std::isfinite(trajectory[n - 1])) return Verdict::Divergent;
  const double last = trajectory[n - 1] - trajectory[n - 2];
  if (last <= rules.atol + rules.rtol * trajectory[n - 1]) return Verdict::Finite;
  const std::size_t k = std::min(std::max<std::size_t>(rules.trailing, 1), n - 1);
  for (std::size_t i = n - k; i < n; ++i) {
    const double increment = trajectory[i] - trajectory[i - 1];
    if (increment < rules.growth_floor * std::log(windows[i] / windows[i - 1])) {
      return Verdict::Undetermined;
    }
  }
  return Verdict::Divergent;
}

std::vector<double> default_windows() { return {10.0, 100.0, 1000.0, 10000.0}; }

WeightFunction WeightFunction::constant() { return WeightFunction{}; }

WeightFunction WeightFunction::power(double exponent) {
  if (!std::isfinite(exponent)) throw UsageError("weight exponent must be finite");
  WeightFunction w;
  w.family = "power";
  w.exponent = exponent;
  w.integral_infinite = exponent >= -1.0;
  w.profile = exponent < 0.0   ? Profile::NonIncreasing
              : exponent > 0.0 ? Profile::NonDecreasing
                               : Profile::Constant;
  return w;
}

double WeightFunction::operator()(double t) const {
  if (family == "constant") return 1.0;
  return std::pow(1.0 + std::abs(t), exponent);
}

std::string WeightFunction::label() const {
  if (family == "constant") return "w=1";
  std::ostringstream os;
  os << "w=(1+|t|)^" << exponent;
  return os.str();
}

nlohmann::json WeightFunction::to_json() const {
  const char* profile_name = profile == Profile::Constant        ? "constant"
                             : profile == Profile::NonIncreasing ? "non-increasing"
                                                                 : "non-decreasing";
  return {{"family", family},
          {"exponent", exponent},
          {"integral_infinite", integral_infinite},
          {"profile", profile_name}};
}

std::vector<WeightFunction> default_battery(bool strict) {
  std::vector<WeightFunction> out{WeightFunction::constant()};
  for (double theta : {0.25, 0.5, 1.0}) {
    out.push_back(WeightFunction::power(strict ? theta : -theta));
  }
  return out;
}

std::vector<double> cospectral_partial_integrals(const AtomicRep& rep, std::size_t atom,
                                                 std::span<const double> windows,
                                                 const WeightFunction& weight) {
  if (atom >= rep.atom_count()) throw UsageError("atom index out of range");
  const double a = rep.alpha().value();
  if (rep.axis() == TimeAxis::Integer) {
    return integer_sums(windows, [&](double t) {
      const auto k = rep.find_time(t);
      if (!k) throw UsageError("integer time " + std::to_string(static_cast<long>(t)) + " is not in the rep");
      return weight(t) * std::pow(rep.value(*k, atom), a);
    });
  }
  std::vector<double> integrand(rep.time_count());
  for (std::size_t k = 0; k < integrand.size(); ++k) {
    integrand[k] = weight(rep.times()[k]) * std::pow(rep.value(k, atom), a);
  }
  return tabulated_real_integrals(rep.times(), integrand, windows);
}

std::vector<double> cospectral_partial_integrals(const GridRep& rep, std::size_t cell,
                                                 std::span<const double> windows,
                                                 const WeightFunction& weight) {
  if (cell >= rep.cell_count()) throw UsageError("cell index out of range");
  const double a = rep.alpha().value();
  auto integrand = [&](double t) { return weight(t) * std::pow(rep.value(t, cell), a); };
  if (rep.axis() == TimeAxis::Integer) return integer_sums(windows, integrand);
  if (rep.tabulated()) {
    std::vector<double> values(rep.times().size());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = integrand(rep.times()[k]);
    return tabulated_real_integrals(rep.times(), values, windows);
  }
  std::vector<double> breaks = rep.breaks(cell);
  breaks.push_back(0.0);
  std::vector<double> out;
  double total = 0.0;
  double previous = 0.0;
  for (double L : windows) {
    try {
      if (previous == 0.0) {
        total += integrate(integrand, -L, L, breaks).value;
      } else {
        total += integrate(integrand, -L, -previous, breaks).value;
        total += integrate(integrand, previous, L, breaks).value;
      }
    } catch (const std::exception& e) {
      throw UsageError(window_name(L) + ": " + e.what());
    }
    previous = L;
    out.push_back(total);
  }
  return out;
}

double ClassificationReport::mass_of(const std::string& key) const {
  for (const auto& [k, v] : aggregate) {
    if (k == key) return v;
  }
  throw UsageError("report has no aggregate '" + key + "'");
}

std::size_t ClassificationReport::count_label(const std::string& label) const {
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [&](const PointClassification& p) { return p.label == label; }));
}

HopfSplit<AtomicRep> hopf_classify(const AtomicRep& rep, const ClassificationOptions& options) {
  auto report = run_hopf(atomic_source(rep, options.windows), options, "atomic");
  const auto c = indices_with(report, "conservative");
  const auto d = indices_with(report, "dissipative");
  const auto u = indices_with(report, "undetermined");
  return {std::move(report), rep.select_atoms(c), rep.select_atoms(d), rep.select_atoms(u)};
}

HopfSplit<GridRep> hopf_classify(const GridRep& rep, const ClassificationOptions& options) {
  auto report = run_hopf(grid_source(rep, options.windows), options, "grid");
  const auto c = indices_with(report, "conservative");
  const auto d = indices_with(report, "dissipative");
  const auto u = indices_with(report, "undetermined");
  return {std::move(report), rep.select_cells(c), rep.select_cells(d), rep.select_cells(u)};
}

PositiveNullSplit<AtomicRep> positive_null_classify(const AtomicRep& rep,
                                                    const std::vector<WeightFunction>& battery,
                                                    const ClassificationOptions& options) {
  auto report =
      run_positive_null(atomic_source(rep, options.windows), battery, options, "atomic");
  const auto p = indices_with(report, "positive");
  const auto n = indices_with(report, "null");
  const auto u = indices_with(report, "undetermined");
  return {std::move(report), rep.select_atoms(p), rep.select_atoms(n), rep.select_atoms(u)};
}

PositiveNullSplit<GridRep> positive_null_classify(const GridRep& rep,
                                                  const std::vector<WeightFunction>& battery,
                                                  const ClassificationOptions& options) {
  auto report = run_positive_null(grid_source(rep, options.windows), battery, options, "grid");
  const auto p = indices_with(report, "positive");
  const auto n = indices_with(report, "null");
  const auto u = indices_with(report, "undetermined");
  return {std::move(report), rep.select_cells(p), rep.select_cells(n), rep.select_cells(u)};
}

nlohmann::json to_json(const ClassificationReport& report) {
  nlohmann::json doc;
  doc["kind"] = report.kind;
  doc["encoding"] = report.encoding;
  doc["windows"] = report.windows;
  doc["rules"] = rules_json(report.rules);
  doc["overall"] = report.overall;
  doc["total_mass"] = report.total_mass;
  nlohmann::json aggregate = nlohmann::json::object();
  for (const auto& [k, v] : report.aggregate) aggregate[k] = v;
  doc["aggregate"] = aggregate;
  if (!report.battery.empty()) {
    nlohmann::json battery = nlohmann::json::array();
    for (const auto& w : report.battery) battery.push_back(w.to_json());
    doc["battery"] = battery;
  }
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.points) {
    nlohmann::json jp{{"index", p.index},
                      {"location", p.location},
                      {"mass", p.mass},
                      {"trajectory", p.trajectory},
                      {"hopf", to_string(p.hopf)},
                      {"label", p.label}};
    if (report.kind == "positive-null") {
      nlohmann::json members = nlohmann::json::array();
      for (std::size_t m = 0; m < p.weighted.size(); ++m) {
        members.push_back({{"weight", report.battery[m].label()},
                           {"trajectory", p.weighted[m]},
                           {"verdict", to_string(p.member_verdicts[m])}});
      }
      jp["members"] = members;
      nlohmann::json witnesses = nlohmann::json::array();
      for (std::size_t m : p.witnesses) witnesses.push_back(report.battery[m].to_json());
      jp["witnesses"] = witnesses;
      jp["witness"] = p.witness ? report.battery[*p.witness].to_json() : nlohmann::json();
    }
    points.push_back(jp);
  }
  doc["points"] = points;
  doc["note"] = report.note;
  return doc;
}

}  // namespace maxstable
