#include "maxstable/rep_io.hpp"

#include <string>
#include <vector>

namespace maxstable {

using nlohmann::json;

namespace {

TimeAxis axis_from(const json& doc, TimeAxis fallback) {
  if (!doc.contains("axis")) return fallback;
  const auto s = doc.at("axis").get<std::string>();
  if (s == "integer") return TimeAxis::Integer;
  if (s == "real") return TimeAxis::Real;
  throw UsageError("unknown axis '" + s + "'");
}

Table table_from(const json& rows) {
  return Table::from_rows(rows.get<std::vector<std::vector<double>>>());
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed representation JSON: ") + e.what());
  }
}

}  // namespace

json atomic_to_json(const AtomicRep& rep) {
  json doc;
  doc["alpha"] = rep.alpha().value();
  doc["axis"] = to_string(rep.axis());
  doc["times"] = rep.times();
  doc["atoms"]["masses"] = rep.masses();
  doc["atoms"]["values"] = rep.values().to_rows();
  if (rep.unpruned()) doc["unpruned"] = true;
  return doc;
}

AtomicRep atomic_from_json(const json& doc) {
  return guarded([&] {
    const auto& atoms = doc.at("atoms");
    Table values = table_from(atoms.at("values"));
    auto times = doc.at("times").get<std::vector<double>>();
    std::vector<double> masses = atoms.contains("masses")
                                     ? atoms.at("masses").get<std::vector<double>>()
                                     : std::vector<double>(values.cols(), 1.0);
    if (values.empty() && !times.empty()) values = Table(times.size(), masses.size());
    return AtomicRep(Alpha(doc.at("alpha").get<double>()), std::move(times), std::move(masses),
                     std::move(values), axis_from(doc, TimeAxis::Integer),
                     doc.value("unpruned", false));
  });
}

json grid_to_json(const GridRep& rep) {
  if (!rep.tabulated()) throw UsageError("closed-form GridRep must be tabulated to serialize");
  json doc;
  doc["alpha"] = rep.alpha().value();
  doc["axis"] = to_string(rep.axis());
  doc["times"] = rep.times();
  doc["s_grid"] = rep.s_grid();
  doc["weights"] = rep.weights();
  doc["values"] = rep.table().to_rows();
  doc["quadrature"] = {{"rule", rep.quadrature().rule},
                       {"tolerance", rep.quadrature().tolerance}};
  if (!rep.metadata().empty()) doc["metadata"] = rep.metadata();
  return doc;
}

GridRep grid_from_json(const json& doc) {
  return guarded([&] {
    GridRep::Quadrature quad;
    if (doc.contains("quadrature")) {
      quad.rule = doc["quadrature"].value("rule", quad.rule);
      quad.tolerance = doc["quadrature"].value("tolerance", quad.tolerance);
    }
    auto s_grid = doc.at("s_grid").get<std::vector<double>>();
    GridRep rep(Alpha(doc.at("alpha").get<double>()), std::move(s_grid),
                doc.at("weights").get<std::vector<double>>(),
                doc.at("times").get<std::vector<double>>(), table_from(doc.at("values")),
                axis_from(doc, TimeAxis::Real), quad);
    if (doc.contains("metadata")) {
      for (const auto& [k, v] : doc["metadata"].items()) {
        rep = rep.with_metadata(k, v.get<std::string>());
      }
    }
    return rep;
  });
}

GridRep tabulate(const GridRep& rep, std::span<const double> times) {
  Table values(times.size(), rep.cell_count());
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t j = 0; j < rep.cell_count(); ++j) values(k, j) = rep.value(times[k], j);
  }
  GridRep out(rep.alpha(), rep.s_grid(), rep.weights(),
              std::vector<double>(times.begin(), times.end()), std::move(values), rep.axis(),
              rep.quadrature());
  for (const auto& [k, v] : rep.metadata()) out = out.with_metadata(k, v);
  return out;
}

SpectralRepresentation representation_from_json(const json& doc) {
  if (doc.contains("atoms")) return atomic_from_json(doc);
  if (doc.contains("s_grid")) return grid_from_json(doc);
  throw UsageError("representation JSON needs either \"atoms\" or \"s_grid\"");
}

}  // namespace maxstable
