#pragma once

#include <json.hpp>
#include <span>
#include <string>

#include "maxstable/spectral_rep.hpp"

namespace maxstable {

// {"alpha", "axis", "times", "atoms": {"masses", "values"}}; values are
// indexed [time][atom]. Doubles round-trip exactly.
[[nodiscard]] nlohmann::json atomic_to_json(const AtomicRep& rep);
[[nodiscard]] AtomicRep atomic_from_json(const nlohmann::json& doc);

// {"alpha", "axis", "times", "s_grid", "weights", "values"}; values are
// indexed [time][cell]. Closed-form reps must be tabulated first.
[[nodiscard]] nlohmann::json grid_to_json(const GridRep& rep);
[[nodiscard]] GridRep grid_from_json(const nlohmann::json& doc);

// Evaluates a closed-form rep on the given times.
[[nodiscard]] GridRep tabulate(const GridRep& rep, std::span<const double> times);

// Dispatches on the presence of "atoms" vs "s_grid".
[[nodiscard]] SpectralRepresentation representation_from_json(const nlohmann::json& doc);

}  // namespace maxstable
