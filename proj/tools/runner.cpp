#include "runner.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "maxstable/classify.hpp"
#include "maxstable/gallery.hpp"
#include "maxstable/rep_io.hpp"
#include "maxstable/simulate.hpp"

namespace maxstable::cli {

namespace {

using json = nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "action", "representation", "grid",     "n_paths", "seed",    "workers",
    "out",    "tolerances",     "method",   "truncation", "probes", "mc_samples",
    "band_z", "windows",        "battery",  "rules",   "model",   "br_grid"};

struct Loaded {
  SpectralRepresentation rep = empty_atomic(Alpha(1.0));
  std::string gallery;
  json params = json::object();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << content;
}

Loaded load_representation(json& config) {
  if (!config.contains("representation")) {
    throw UsageError("config needs a representation (gallery name or file)");
  }
  json& spec = config["representation"];
  Loaded loaded;
  if (spec.contains("file")) {
    const auto path = spec.at("file").get<std::string>();
    const std::string text = read_file(path);
    spec["file_fnv1a"] = fnv1a_hex(text);
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw UsageError("representation file '" + path + "' is not valid JSON: " + e.what());
    }
    loaded.rep = representation_from_json(doc);
    return loaded;
  }
  if (!spec.contains("gallery")) throw UsageError("representation needs 'gallery' or 'file'");
  loaded.gallery = spec.at("gallery").get<std::string>();
  if (spec.contains("params")) loaded.params = spec.at("params");
  loaded.rep = build_gallery(loaded.gallery, loaded.params);
  return loaded;
}

double gallery_param(const Loaded& loaded, const std::string& key) {
  for (const auto& e : gallery_entries()) {
    if (e.name != loaded.gallery) continue;
    return loaded.params.value(key, e.defaults.at(key).get<double>());
  }
  throw UsageError("representation is not from the gallery");
}

std::vector<double> grid_from(const json& g) {
  std::vector<double> grid;
  if (g.contains("times")) {
    grid = g.at("times").get<std::vector<double>>();
  } else {
    const double start = g.at("start").get<double>();
    const double stop = g.at("stop").get<double>();
    const double step = g.at("step").get<double>();
    if (!(step > 0.0) || !(stop >= start)) throw UsageError("grid needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  }
  if (grid.empty()) throw UsageError("grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw UsageError("grid must be strictly increasing");
  }
  return grid;
}

TruncationSpec truncation_from(const json& config, bool epsilon_default) {
  TruncationSpec spec = epsilon_default ? TruncationSpec::relative() : TruncationSpec::exact();
  if (!config.contains("truncation")) return spec;
  const json& t = config.at("truncation");
  const auto mode = t.value("mode", epsilon_default ? "epsilon" : "exact");
  if (mode == "exact") {
    spec.mode = TruncationSpec::Mode::ExactBounded;
  } else if (mode == "epsilon") {
    spec.mode = TruncationSpec::Mode::Epsilon;
  } else {
    throw UsageError("truncation mode must be exact or epsilon");
  }
  if (t.contains("bound")) spec.bound = t.at("bound").get<double>();
  spec.epsilon = t.value("epsilon", spec.epsilon);
  spec.max_terms = t.value("max_terms", spec.max_terms);
  return spec;
}

SimulationOptions simulation_options(const json& config) {
  SimulationOptions o;
  o.n_paths = config.value("n_paths", o.n_paths);
  o.seed = config.value("seed", o.seed);
  o.workers = config.value("workers", o.workers);
  return o;
}

std::string resolve_method(const Loaded& loaded, const json& config) {
  const auto method = config.value("method", std::string("auto"));
  if (method != "auto") return method;
  if (loaded.gallery == "extremal_process") return "extremal";
  if (std::holds_alternative<DoublyStochasticRep>(loaded.rep)) return "brown_resnick";
  if (std::holds_alternative<AtomicRep>(loaded.rep)) return "atomic";
  if (std::holds_alternative<HybridRep>(loaded.rep)) return "hybrid";
  return "series";
}

PathEnsemble simulate_with(const Loaded& loaded, const json& config, std::vector<double> grid) {
  const auto options = simulation_options(config);
  const auto method = resolve_method(loaded, config);
  if (method == "extremal") {
    if (loaded.gallery != "extremal_process") {
      throw UsageError("method 'extremal' needs the extremal_process gallery entry");
    }
    return simulate_extremal_process(Alpha(gallery_param(loaded, "alpha")), grid, options);
  }
  if (method == "brown_resnick") {
    if (loaded.gallery != "brown_resnick") {
      throw UsageError("method 'brown_resnick' needs the brown_resnick gallery entry");
    }
    const auto model = GaussianIncrementModel::fbm(gallery_param(loaded, "hurst"),
                                                   gallery_param(loaded, "sigma"));
    return simulate_brown_resnick(model, grid, options, truncation_from(config, true));
  }
  if (method == "atomic") {
    const auto* rep = std::get_if<AtomicRep>(&loaded.rep);
    if (!rep) throw UsageError("method 'atomic' needs an atomic representation");
    return simulate_atomic(*rep, grid, options);
  }
  if (method == "series") {
    const auto* rep = std::get_if<GridRep>(&loaded.rep);
    if (!rep) throw UsageError("method 'series' needs a grid representation");
    return simulate_series(*rep, grid, options, truncation_from(config, false));
  }
  if (method == "hybrid") {
    const auto* rep = std::get_if<HybridRep>(&loaded.rep);
    if (!rep) throw UsageError("method 'hybrid' needs a hybrid representation");
    auto continuous = simulate_series(rep->continuous_part, grid, options, truncation_from(config, false));
    const auto discrete = simulate_atomic(rep->discrete_part, grid, options);
    for (std::size_t p = 0; p < continuous.n_paths(); ++p) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        continuous.paths(p, k) = std::max(continuous.paths(p, k), discrete.paths(p, k));
      }
    }
    continuous.representation = "hybrid";
    return continuous;
  }
  throw UsageError("unknown simulation method '" + method + "'");
}

std::vector<double> default_grid(const Loaded& loaded, const json& config) {
  if (config.contains("grid")) return grid_from(config.at("grid"));
  if (const auto* a = std::get_if<AtomicRep>(&loaded.rep)) return a->times();
  throw UsageError("config needs a grid for this representation");
}

std::size_t grid_index(std::span<const double> grid, double t) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid[k] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return k;
  }
  throw UsageError("probe time " + std::to_string(t) + " is not on the simulation grid");
}

std::vector<std::vector<Constraint>> probes_from(const json& config) {
  if (!config.contains("probes")) throw UsageError("verify-fdd needs 'probes'");
  std::vector<std::vector<Constraint>> probes;
  for (const auto& probe : config.at("probes")) {
    std::vector<Constraint> constraints;
    for (const auto& c : probe) constraints.push_back({c.at("t").get<double>(), c.at("x").get<double>()});
    if (constraints.empty()) throw UsageError("empty probe");
    probes.push_back(std::move(constraints));
  }
  if (probes.empty()) throw UsageError("verify-fdd needs at least one probe");
  return probes;
}

ClassificationOptions classification_options(const json& config) {
  ClassificationOptions o;
  if (config.contains("windows")) o.windows = config.at("windows").get<std::vector<double>>();
  if (config.contains("rules")) {
    const json& r = config.at("rules");
    o.rules.atol = r.value("atol", o.rules.atol);
    o.rules.rtol = r.value("rtol", o.rules.rtol);
    o.rules.growth_floor = r.value("growth_floor", o.rules.growth_floor);
    o.rules.trailing = r.value("trailing", o.rules.trailing);
  }
  if (config.contains("tolerances")) {
    const json& t = config.at("tolerances");
    o.rules.atol = t.value("abs", o.rules.atol);
    o.rules.rtol = t.value("rel", o.rules.rtol);
  }
  o.workers = config.value("workers", 0u);
  return o;
}

std::vector<WeightFunction> battery_from(const json& config) {
  const auto name = config.value("battery", std::string("default"));
  if (name == "default") return default_battery(false);
  if (name == "strict") return default_battery(true);
  throw UsageError("battery must be 'default' or 'strict'");
}

json classify_rep(const SpectralRepresentation& rep, const json& config, std::ostream& out,
                  const std::string& part) {
  const auto options = classification_options(config);
  const auto battery = battery_from(config);
  auto run = [&](const auto& r) {
    const auto hopf = hopf_classify(r, options);
    const auto pn = positive_null_classify(r, battery, options);
    out << part << "hopf: " << hopf.report.overall << " (dissipative mass "
        << hopf.report.mass_of("dissipative_mass") << ", conservative mass "
        << hopf.report.mass_of("conservative_mass") << ", undetermined mass "
        << hopf.report.mass_of("undetermined_mass") << ")\n";
    out << part << "positive/null: " << pn.report.overall << "\n";
    return json{{"verdict", hopf.report.overall},
                {"positive_null_verdict", pn.report.overall},
                {"hopf", to_json(hopf.report)},
                {"positive_null", to_json(pn.report)}};
  };
  if (const auto* a = std::get_if<AtomicRep>(&rep)) return run(*a);
  if (const auto* g = std::get_if<GridRep>(&rep)) return run(*g);
  if (const auto* h = std::get_if<HybridRep>(&rep)) {
    json doc;
    if (!h->continuous_part.empty()) {
      doc["continuous"] = classify_rep(h->continuous_part, config, out, "continuous ");
    }
    if (!h->discrete_part.empty()) {
      doc["discrete"] = classify_rep(h->discrete_part, config, out, "discrete ");
    }
    std::set<std::string> verdicts;
    for (const auto& [k, v] : doc.items()) verdicts.insert(v.at("verdict").get<std::string>());
    doc["verdict"] = verdicts.size() == 1 ? *verdicts.begin() : "mixed";
    return doc;
  }
  throw UsageError("doubly stochastic reps are classified with br-test");
}

json hash_view(const json& config) {
  json view = config;
  view.erase("workers");
  view.erase("out");
  return view;
}

json envelope(const json& config, const std::string& hash, json result) {
  return {{"tool", "maxstable"},
          {"version", kVersion},
          {"action", config.at("action")},
          {"config_hash", hash},
          {"seed", config.value("seed", std::uint64_t{0})},
          {"config", hash_view(config)},
          {"result", std::move(result)}};
}

void parse_param(json& params, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("--param expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;
  }
  params[key] = parsed;
}

json grid_flag(const std::string& text) {
  double a = 0.0;
  double b = 0.0;
  double h = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &h, &tail) != 3) {
    throw UsageError("--grid expects start:stop:step, got '" + text + "'");
  }
  return {{"start", a}, {"stop", b}, {"step", h}};
}

void error_json(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump()
      << "\n";
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int run_config(const json& input, std::ostream& out) {
  json config = input;
  if (!config.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (!kKnownKeys.count(key)) throw UsageError("unknown config key '" + key + "'");
  }
  const auto action = config.at("action").get<std::string>();
  const std::filesystem::path out_dir = config.value("out", std::string("out"));

  if (action == "gallery-list") {
    for (const auto& e : gallery_entries()) {
      out << e.name << "  " << e.summary << "\n    defaults: " << e.defaults.dump() << "\n";
    }
    return kOk;
  }

  json result;
  std::vector<std::pair<std::string, std::string>> artifacts;
  if (action == "br-test") {
    BrTestOptions options;
    json model = config.value("model", json::object());
    if (config.contains("representation") && !model.contains("hurst")) {
      Loaded loaded = load_representation(config);
      if (loaded.gallery != "brown_resnick") {
        throw UsageError("br-test needs a model or the brown_resnick gallery entry");
      }
      model = {{"hurst", gallery_param(loaded, "hurst")}, {"sigma", gallery_param(loaded, "sigma")}};
    }
    if (!model.contains("hurst")) throw UsageError("br-test needs model.hurst");
    const auto m = GaussianIncrementModel::fbm(model.at("hurst").get<double>(), model.value("sigma", 1.0));
    if (config.contains("windows")) options.windows = config.at("windows").get<std::vector<double>>();
    options.n_paths = config.value("n_paths", options.n_paths);
    options.seed = config.value("seed", options.seed);
    options.workers = config.value("workers", 0u);
    if (config.contains("tolerances")) {
      options.rules.atol = config["tolerances"].value("abs", options.rules.atol);
      options.rules.rtol = config["tolerances"].value("rel", options.rules.rtol);
    }
    if (config.contains("br_grid")) {
      const json& g = config.at("br_grid");
      options.fine_step = g.value("fine_step", options.fine_step);
      options.fine_extent = g.value("fine_extent", options.fine_extent);
      options.points_per_decade = g.value("points_per_decade", options.points_per_decade);
    }
    const auto r = br_dissipativity_test(m, options);
    result = to_json(r);
    out << "br-test " << r.model << ": " << r.verdict << " (median relative last increment "
        << r.median_relative_last_increment << ")\n";
    artifacts.emplace_back("br_test.json", "");
  } else {
    Loaded loaded = load_representation(config);
    if (action == "simulate") {
      const auto grid = default_grid(loaded, config);
      const auto ensemble = simulate_with(loaded, config, grid);
      result = ensemble_envelope(ensemble);
      std::filesystem::create_directories(out_dir);
      write_file(out_dir / "paths.csv", to_csv(ensemble));
      out << "simulated " << ensemble.n_paths() << " paths on " << grid.size()
          << " times (" << ensemble.representation << ", truncation " << ensemble.truncation.mode
          << ") -> " << (out_dir / "paths.csv").string() << "\n";
      artifacts.emplace_back("simulate.json", "");
    } else if (action == "verify-fdd") {
      const auto probes = probes_from(config);
      std::vector<double> grid;
      if (config.contains("grid")) {
        grid = grid_from(config.at("grid"));
      } else {
        std::set<double> times;
        for (const auto& p : probes) {
          for (const auto& c : p) times.insert(c.t);
        }
        grid.assign(times.begin(), times.end());
      }
      const auto ensemble = simulate_with(loaded, config, grid);
      MonteCarloOptions mc;
      mc.samples = config.value("mc_samples", mc.samples);
      mc.seed = config.value("seed", std::uint64_t{0}) + 1;
      mc.workers = config.value("workers", 0u);
      const double z = config.value("band_z", 3.0);
      double tol_abs = 0.0;
      double tol_rel = 0.0;
      if (config.contains("tolerances")) {
        tol_abs = config["tolerances"].value("abs", 0.0);
        tol_rel = config["tolerances"].value("rel", 0.0);
      }
      const auto n = static_cast<double>(ensemble.n_paths());
      json rows = json::array();
      std::size_t passed = 0;
      for (const auto& probe : probes) {
        std::vector<std::size_t> cols;
        for (const auto& c : probe) cols.push_back(grid_index(grid, c.t));
        std::size_t hits = 0;
        for (std::size_t p = 0; p < ensemble.n_paths(); ++p) {
          bool inside = true;
          for (std::size_t i = 0; i < probe.size(); ++i) {
            if (ensemble.paths(p, cols[i]) > probe[i].x) {
              inside = false;
              break;
            }
          }
          hits += inside ? 1 : 0;
        }
        const auto estimate = fdd_exponent(loaded.rep, probe, mc);
        const double prob = std::exp(-estimate.value);
        const double empirical = static_cast<double>(hits) / n;
        const double se_mc = prob * estimate.std_error;
        const double band =
            z * std::sqrt(prob * (1.0 - prob) / n + se_mc * se_mc) + tol_abs + tol_rel * prob;
        const bool pass = std::abs(empirical - prob) <= band;
        passed += pass ? 1 : 0;
        json constraints = json::array();
        for (const auto& c : probe) constraints.push_back({{"t", c.t}, {"x", c.x}});
        rows.push_back({{"constraints", constraints},
                        {"empirical", empirical},
                        {"theoretical", prob},
                        {"exponent", estimate.value},
                        {"exponent_std_error", estimate.std_error},
                        {"exponent_method", estimate.method},
                        {"band", band},
                        {"band_z", z},
                        {"pass", pass}});
        out << "probe " << constraints.dump() << ": empirical " << empirical << " vs "
            << prob << " +- " << band << (pass ? "  PASS" : "  FAIL") << "\n";
      }
      result = {{"probes", rows},
                {"passed", passed},
                {"total", probes.size()},
                {"n_paths", ensemble.n_paths()},
                {"simulation", ensemble_envelope(ensemble)}};
      artifacts.emplace_back("verify_fdd.json", "");
    } else if (action == "classify") {
      result = classify_rep(loaded.rep, config, out, "");
      artifacts.emplace_back("classify.json", "");
    } else if (action == "reduce") {
      const auto* rep = std::get_if<AtomicRep>(&loaded.rep);
      if (!rep) throw UsageError("reduce needs an atomic representation");
      const auto reduction = minimal_discrete_reduce(*rep);
      result = to_json(reduction);
      result["reduced"] = atomic_to_json(reduction.reduced);
      out << "reduce: " << rep->atom_count() << " -> " << reduction.reduced.atom_count()
          << " atoms, minimal=" << (reduction.minimal ? "true" : "false") << "\n";
      artifacts.emplace_back("reduce.json", "");
    } else {
      throw UsageError("unknown action '" + action + "'");
    }
  }
  const std::string hash = fnv1a_hex(hash_view(config).dump());
  std::filesystem::create_directories(out_dir);
  for (auto& [name, content] : artifacts) {
    content = envelope(config, hash, result).dump(2) + "\n";
    write_file(out_dir / name, content);
    out << "wrote " << (out_dir / name).string() << " (config " << hash << ")\n";
  }
  return kOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate and classify alpha-Frechet max-stable processes"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::uint64_t seed = 0;
    std::size_t paths = 0;
    std::string out;
    double tol_abs = 0.0;
    double tol_rel = 0.0;
    unsigned workers = 0;
    std::string rep;
    std::string rep_file;
    std::vector<std::string> params;
    std::string grid;
  } flags;
  std::vector<CLI::App*> actions;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--paths", flags.paths, "number of paths");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--tol-abs", flags.tol_abs, "absolute tolerance");
    sub->add_option("--tol-rel", flags.tol_rel, "relative tolerance");
    sub->add_option("--workers", flags.workers, "worker threads (0: all cores)");
    sub->add_option("--rep", flags.rep, "gallery process name");
    sub->add_option("--rep-file", flags.rep_file, "serialized representation (JSON)");
    sub->add_option("--param", flags.params, "gallery parameter key=value (repeatable)");
    sub->add_option("--grid", flags.grid, "time grid start:stop:step");
    actions.push_back(sub);
  };
  add_common(app.add_subcommand("simulate", "simulate sample paths to CSV"));
  add_common(app.add_subcommand("classify", "Hopf and positive/null classification"));
  add_common(app.add_subcommand("verify-fdd", "compare empirical and exact joint probabilities"));
  add_common(app.add_subcommand("reduce", "minimal reduction of an atomic representation"));
  add_common(app.add_subcommand("br-test", "Brown-Resnick dissipativity test"));
  auto* gallery = app.add_subcommand("gallery", "gallery of named processes");
  gallery->require_subcommand(1);
  gallery->add_subcommand("list", "list gallery processes and default parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    error_json(err, "validation", e.what(), kValidationError);
    return kValidationError;
  }

  try {
    if (gallery->parsed()) return run_config(json{{"action", "gallery-list"}}, out);
    CLI::App* sub = nullptr;
    for (auto* a : actions) {
      if (a->parsed()) sub = a;
    }
    json config = json::object();
    if (!flags.config.empty()) {
      try {
        config = json::parse(read_file(flags.config));
      } catch (const json::exception& e) {
        throw UsageError("config '" + flags.config + "' is not valid JSON: " + e.what());
      }
    }
    config["action"] = sub->get_name();
    if (sub->count("--seed")) config["seed"] = flags.seed;
    if (sub->count("--paths")) config["n_paths"] = flags.paths;
    if (sub->count("--out")) config["out"] = flags.out;
    if (sub->count("--workers")) config["workers"] = flags.workers;
    if (sub->count("--tol-abs")) config["tolerances"]["abs"] = flags.tol_abs;
    if (sub->count("--tol-rel")) config["tolerances"]["rel"] = flags.tol_rel;
    if (sub->count("--rep")) {
      json params = json::object();
      if (config.contains("representation") &&
          config["representation"].value("gallery", std::string()) == flags.rep) {
        params = config["representation"].value("params", json::object());
      }
      config["representation"] = {{"gallery", flags.rep}, {"params", params}};
    }
    if (sub->count("--rep-file")) config["representation"] = {{"file", flags.rep_file}};
    if (!flags.params.empty()) {
      if (!config.contains("representation") || !config["representation"].contains("gallery")) {
        throw UsageError("--param needs a gallery representation");
      }
      auto& params = config["representation"]["params"];
      if (params.is_null()) params = json::object();
      for (const auto& p : flags.params) parse_param(params, p);
    }
    if (sub->count("--grid")) config["grid"] = grid_flag(flags.grid);
    return run_config(config, out);
  } catch (const NumericError& e) {
    error_json(err, "numeric", e.what(), kNumericError);
    return kNumericError;
  } catch (const json::exception& e) {
    error_json(err, "validation", std::string("config: ") + e.what(), kValidationError);
    return kValidationError;
  } catch (const std::filesystem::filesystem_error& e) {
    error_json(err, "validation", e.what(), kValidationError);
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    error_json(err, "validation", e.what(), kValidationError);
    return kValidationError;
  } catch (const std::domain_error& e) {
    error_json(err, "validation", e.what(), kValidationError);
    return kValidationError;
  } catch (const std::exception& e) {
    error_json(err, "numeric", e.what(), kNumericError);
    return kNumericError;
  }
}

}  // namespace maxstable::cli
