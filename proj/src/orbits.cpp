#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxstable/classify.hpp"

namespace maxstable {

OrbitDecomposition orbit_decompose(std::span<const std::size_t> perm, const AtomicRep& rep) {
  const std::size_t n = rep.atom_count();
  if (perm.size() != n) {
    throw UsageError("permutation has " + std::to_string(perm.size()) + " entries for " +
                     std::to_string(n) + " atoms");
  }
  std::vector<char> seen(n, 0);
  for (std::size_t target : perm) {
    if (target >= n || seen[target]) throw UsageError("flow map is not a permutation of the atoms");
    seen[target] = 1;
  }
  if (rep.axis() != TimeAxis::Integer) {
    throw UsageError("permutation flows act on integer time; the rep is on the real line");
  }
  for (std::size_t k = 0; k < rep.time_count(); ++k) {
    const double t = rep.times()[k];
    const auto next = rep.find_time(t + 1.0);
    if (!next) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double lhs = rep.value(*next, i);
      const double rhs = rep.value(k, perm[i]);
      if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "permutation is inconsistent with the rep: f_{t+1}(i) != f_t(perm(i)) at t = " << t
            << ", i = " << i << " (" << lhs << " vs " << rhs << ")";
        throw UsageError(msg.str());
      }
    }
  }
  OrbitDecomposition out;
  out.flow = "permutation";
  std::fill(seen.begin(), seen.end(), 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    Orbit orbit;
    for (std::size_t i = start; !seen[i]; i = perm[i]) {
      seen[i] = 1;
      orbit.atoms.push_back(i);
    }
    orbit.period = orbit.atoms.size();
    orbit.label = "positive-conservative";
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

OrbitDecomposition orbit_decompose(const ShiftOnZ& shift) {
  const auto check = check_integrability(shift.kernel, shift.alpha);
  if (!check.integrable) {
    throw UsageError("shift kernel " + shift.kernel.name() +
                     " is not alpha-summable; the shift has no finite-mass representation");
  }
  OrbitDecomposition out;
  out.flow = "shift-on-Z";
  Orbit orbit;
  orbit.label = "dissipative-null";
  out.orbits.push_back(orbit);
  return out;
}

nlohmann::json to_json(const OrbitDecomposition& decomposition) {
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : decomposition.orbits) {
    orbits.push_back({{"atoms", o.atoms},
                      {"size", o.period ? nlohmann::json(*o.period) : nlohmann::json("infinite")},
                      {"label", o.label}});
  }
  return {{"flow", decomposition.flow},
          {"spectrally_discrete", decomposition.spectrally_discrete},
          {"orbits", orbits}};
}

}  // namespace maxstable
