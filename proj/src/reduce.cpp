#include <algorithm>
#include <cmath>

#include "maxstable/classify.hpp"

namespace maxstable {

namespace {

// l^alpha norm of a non-negative vector, scaled to avoid overflow.
double alpha_norm(const std::vector<double>& u, double a) {
  const double top = *std::max_element(u.begin(), u.end());
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : u) sum += std::pow(v / top, a);
  return top * std::pow(sum, 1.0 / a);
}

}  // namespace

ReductionResult minimal_discrete_reduce(const AtomicRep& rep, double tolerance) {
  const double a = rep.alpha().value();
  ReductionResult result{empty_atomic(rep.alpha(), rep.axis()), {}, {}, {}, true};
  std::vector<std::vector<double>> normalized;
  std::vector<double> norms;
  std::vector<double> masses;
  for (std::size_t i = 0; i < rep.atom_count(); ++i) {
    const auto u = rep.cospectral(i);
    const double norm = rep.time_count() == 0 ? 0.0 : alpha_norm(u, a);
    if (norm == 0.0 || rep.masses()[i] == 0.0) {
      result.dropped_zero.push_back(i);
      continue;
    }
    std::vector<double> n(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) n[k] = u[k] / norm;
    bool merged = false;
    for (std::size_t r = 0; r < normalized.size(); ++r) {
      double gap = 0.0;
      for (std::size_t k = 0; k < n.size(); ++k) gap = std::max(gap, std::abs(n[k] - normalized[r][k]));
      if (gap <= tolerance) {
        const double c = norm / norms[r];
        masses[r] += rep.masses()[i] * std::pow(c, a);
        result.merges.push_back({result.kept[r], i, c});
        merged = true;
        break;
      }
    }
    if (merged) continue;
    normalized.push_back(std::move(n));
    norms.push_back(norm);
    masses.push_back(rep.masses()[i]);
    result.kept.push_back(i);
  }
  result.minimal = result.dropped_zero.empty() && result.merges.empty();
  const AtomicRep selected = rep.select_atoms(result.kept);
  result.reduced = AtomicRep(rep.alpha(), rep.times(), masses, selected.values(), rep.axis());
  return result;
}

nlohmann::json to_json(const ReductionResult& result) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : result.merges) {
    merges.push_back({{"kept", m.kept}, {"removed", m.removed}, {"factor", m.factor}});
  }
  return {{"minimal", result.minimal},
          {"kept", result.kept},
          {"dropped_zero", result.dropped_zero},
          {"merges", merges},
          {"atoms_before", result.kept.size() + result.dropped_zero.size() + result.merges.size()},
          {"atoms_after", result.reduced.atom_count()},
          {"masses_after", result.reduced.masses()}};
}

}  // namespace maxstable
