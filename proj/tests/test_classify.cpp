#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "maxstable/classify.hpp"
#include "maxstable/gallery.hpp"
#include "maxstable/random.hpp"
#include "maxstable/simulate.hpp"
#include "support/oracles.hpp"

using namespace maxstable;

namespace {

const std::vector<double> kWindows(oracles::kWindows.begin(), oracles::kWindows.end());

// Integer-axis rep on |t| <= 10^4 from a per-atom co-spectral rule.
template <class F>
AtomicRep integer_rep(std::size_t atoms, F&& f, double alpha = 1.0) {
  std::vector<double> times;
  for (long t = -10000; t <= 10000; ++t) times.push_back(static_cast<double>(t));
  Table values(times.size(), atoms);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < atoms; ++i) values(k, i) = f(times[k], i);
  }
  return AtomicRep(Alpha(alpha), times, values);
}

// Constant atom and a summable atom 2^-|t|.
AtomicRep two_atom_hybrid() {
  return integer_rep(2, [](double t, std::size_t i) { return i == 0 ? 1.0 : std::pow(2.0, -std::abs(t)); });
}

// Every positive point is conservative and every dissipative point is null.
void check_ordering(const ClassificationReport& hopf, const ClassificationReport& pn) {
  REQUIRE(hopf.points.size() == pn.points.size());
  for (std::size_t i = 0; i < hopf.points.size(); ++i) {
    if (pn.points[i].label == "positive") CHECK(hopf.points[i].label == "conservative");
    if (hopf.points[i].label == "dissipative") CHECK(pn.points[i].label == "null");
  }
}

void check_mass_balance(const ClassificationReport& r, const std::vector<std::string>& keys, double total) {
  double sum = 0.0;
  for (const auto& k : keys) sum += r.mass_of(k + "_mass");
  CHECK(sum == doctest::Approx(total).epsilon(1e-12));
  CHECK(r.total_mass == doctest::Approx(total).epsilon(1e-12));
}

}  // namespace

TEST_CASE("judge_trajectory rules") {
  const std::vector<double> w{10.0, 100.0, 1000.0, 10000.0};
  const DivergenceRules rules;
  const std::vector<double> converged{1.0, 1.9, 1.99, 1.999};
  const std::vector<double> linear{20.0, 200.0, 2000.0, 20000.0};
  const std::vector<double> slow{1.0, 2.0, 3.0, 4.0};
  CHECK(judge_trajectory(w, converged, rules) == Verdict::Finite);
  CHECK(judge_trajectory(w, linear, rules) == Verdict::Divergent);
  CHECK(judge_trajectory(w, slow, rules) == Verdict::Undetermined);
  const std::vector<double> zeros{0.0, 0.0, 0.0, 0.0};
  CHECK(judge_trajectory(w, zeros, rules) == Verdict::Finite);
  const std::vector<double> shorter{1.0};
  CHECK_THROWS_AS((void)judge_trajectory(w, shorter, rules), UsageError);
  CHECK(std::string(to_string(Verdict::Undetermined)) == "undetermined");
}

TEST_CASE("partial integral worked examples") {
  const auto constant = single_point_rep(Alpha(1.0), 0.0);
  const auto flat = cospectral_partial_integrals(constant, 0, kWindows);
  for (std::size_t k = 0; k < kWindows.size(); ++k) CHECK(flat[k] == doctest::Approx(2.0 * kWindows[k]).epsilon(1e-12));

  const auto ind = std::get<GridRep>(moving_maxima_rep(KernelSpec::indicator(0.0, 1.0), Alpha(1.0)));
  const auto near = static_cast<std::size_t>(
      std::lower_bound(ind.s_grid().begin(), ind.s_grid().end(), 0.0) - ind.s_grid().begin());
  const auto box = cospectral_partial_integrals(ind, near, kWindows);
  for (double v : box) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

  const auto harmonic = single_point_rep(Alpha(2.0), 1.0);
  const auto h = cospectral_partial_integrals(harmonic, 0, kWindows);
  for (std::size_t k = 0; k < kWindows.size(); ++k) {
    CHECK(h[k] == doctest::Approx(oracles::kHarmonicIntegral[k]).epsilon(1e-9));
  }
  CHECK(judge_trajectory(kWindows, h, {}) == Verdict::Divergent);
}

TEST_CASE("partial integrals report uncovered windows") {
  const AtomicRep small(Alpha(1.0), {-2.0, -1.0, 0.0, 1.0, 2.0}, Table::from_rows({{1.0}, {1.0}, {1.0}, {1.0}, {1.0}}));
  try {
    (void)cospectral_partial_integrals(small, 0, kWindows);
    FAIL("expected an error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("window |t| <= 10") != std::string::npos);
  }
  const GridRep tab(Alpha(1.0), {0.0}, {1.0}, {-5.0, 5.0}, Table::from_rows({{1.0}, {1.0}}));
  CHECK_THROWS_AS((void)cospectral_partial_integrals(tab, 0, kWindows), UsageError);
}

TEST_CASE("tabulated real-axis integrals use the trapezoid rule") {
  std::vector<double> times;
  for (int k = -1000; k <= 1000; ++k) times.push_back(0.5 * k);
  Table values(times.size(), 1);
  for (std::size_t k = 0; k < times.size(); ++k) values(k, 0) = std::exp(-std::abs(times[k]));
  const GridRep tab(Alpha(1.0), {0.0}, {1.0}, times, values);
  const std::vector<double> w{1.2, 10.0, 100.0};
  const auto I = cospectral_partial_integrals(tab, 0, w);
  CHECK(I[2] == doctest::Approx(2.0).epsilon(0.03));
  CHECK(I[0] < I[1]);
}

TEST_CASE("Gaussian moving maxima is dissipative everywhere") {
  const auto rep = gaussian_moving_maxima_rep(MovingMaximaLayout{0.1, 10.0});
  const auto split = hopf_classify(rep);
  CHECK(split.report.overall == "dissipative");
  CHECK(split.report.count_label("dissipative") == rep.cell_count());
  CHECK(split.conservative.empty());
  CHECK(split.dissipative.cell_count() == rep.cell_count());
  check_mass_balance(split.report, {"dissipative", "conservative", "undetermined"}, rep.total_mass());
  const auto pn = positive_null_classify(rep, default_battery());
  check_ordering(split.report, pn.report);
  for (const auto& p : pn.report.points) {
    REQUIRE(p.witness.has_value());
    CHECK(pn.report.battery[*p.witness].family == "constant");
  }
}

TEST_CASE("constant process is conservative and positive") {
  const auto rep = single_point_rep(Alpha(1.0), 0.0);
  const auto split = hopf_classify(rep);
  CHECK(split.report.overall == "conservative");
  const auto pn = positive_null_classify(rep, default_battery());
  CHECK(pn.report.overall == "positive");
  CHECK_FALSE(pn.report.points[0].witness.has_value());
  CHECK(pn.report.note.find("not decided numerically") != std::string::npos);
  check_ordering(split.report, pn.report);
}

TEST_CASE("planted conservative-null point") {
  const auto rep = single_point_rep(Alpha(1.0), 1.0);
  const auto hopf = hopf_classify(rep);
  CHECK(hopf.report.overall == "conservative");
  const auto battery = default_battery();
  const auto pn = positive_null_classify(rep, battery);
  const auto& p = pn.report.points[0];
  CHECK(p.label == "null");
  REQUIRE(p.witness.has_value());
  CHECK(battery[*p.witness].exponent == -0.5);

  // Closed-form trajectories per battery member and their verdicts.
  const std::array<const std::array<double, 4>*, 4> oracle{&oracles::kHarmonicIntegral, &oracles::kFiveQuartersIntegral,
                                                         &oracles::kThreeHalvesIntegral,
                                                         &oracles::kInverseSquareIntegral};
  for (std::size_t m = 0; m < battery.size(); ++m) {
    const std::vector<double> exact(oracle[m]->begin(), oracle[m]->end());
    for (std::size_t k = 0; k < exact.size(); ++k) CHECK(p.weighted[m][k] == doctest::Approx(exact[k]).epsilon(1e-9));
    CHECK(p.member_verdicts[m] == judge_trajectory(kWindows, exact, {}));
  }
  CHECK(p.member_verdicts[0] == Verdict::Divergent);
  CHECK(p.member_verdicts[1] == Verdict::Undetermined);
  CHECK(p.member_verdicts[2] == Verdict::Finite);
  CHECK(p.member_verdicts[3] == Verdict::Finite);
  check_ordering(hopf.report, pn.report);
}

TEST_CASE("strict non-decreasing battery collapses null onto dissipative") {
  const auto battery = default_battery(true);
  for (std::size_t m = 1; m < battery.size(); ++m) {
    CHECK(battery[m].exponent > 0.0);
    CHECK(battery[m].profile == WeightFunction::Profile::NonDecreasing);
  }
  const auto pn = positive_null_classify(single_point_rep(Alpha(1.0), 1.0), battery);
  CHECK(pn.report.points[0].label != "null");
}

TEST_CASE("two-atom hybrid splits one atom each side") {
  const auto rep = two_atom_hybrid();
  const auto split = hopf_classify(rep);
  CHECK(split.report.overall == "mixed");
  CHECK(split.report.points[0].label == "conservative");
  CHECK(split.report.points[1].label == "dissipative");
  // Per-atom oracle: 2L + 1 and 3 - 2^(1 - floor L).
  for (std::size_t k = 0; k < kWindows.size(); ++k) {
    CHECK(split.report.points[0].trajectory[k] == doctest::Approx(2.0 * kWindows[k] + 1.0));
    CHECK(split.report.points[1].trajectory[k] == doctest::Approx(3.0 - std::pow(2.0, 1.0 - kWindows[k])));
  }
  CHECK(split.conservative.atom_count() == 1);
  CHECK(split.dissipative.atom_count() == 1);
  check_mass_balance(split.report, {"dissipative", "conservative", "undetermined"}, 2.0);
  const auto pn = positive_null_classify(rep, default_battery());
  check_ordering(split.report, pn.report);
  check_mass_balance(pn.report, {"null", "positive", "undetermined"}, 2.0);
}

TEST_CASE("split components recombine to the original law") {
  const auto rep = two_atom_hybrid();
  const auto split = hopf_classify(rep);
  const std::vector<double> grid{0.0, 1.0};
  const std::size_t n = 50000;
  const auto c = simulate_atomic(split.conservative, grid, {n, 1, 0});
  const auto d = simulate_atomic(split.dissipative, grid, {n, 2, 0});
  const SpectralRepresentation whole = rep;
  for (auto [x, y] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    std::size_t hits = 0;
    for (std::size_t p = 0; p < n; ++p) {
      const double x0 = std::max(c.paths(p, 0), d.paths(p, 0));
      const double x1 = std::max(c.paths(p, 1), d.paths(p, 1));
      hits += (x0 <= x && x1 <= y) ? 1 : 0;
    }
    const std::vector<Constraint> cons{{0.0, x}, {1.0, y}};
    const double prob = fdd_probability(whole, cons);
    CHECK(std::abs(static_cast<double>(hits) / n - prob) <= 4.0 * std::sqrt(prob * (1.0 - prob) / n));
  }
}

TEST_CASE("battery validation") {
  const auto rep = single_point_rep(Alpha(1.0), 1.0);
  CHECK_THROWS_AS((void)positive_null_classify(rep, {}), UsageError);
  CHECK_THROWS_AS((void)positive_null_classify(rep, {WeightFunction::power(-2.0)}), UsageError);
  // A battery without w = 1 gets it appended so the Hopf verdict is available.
  const auto pn = positive_null_classify(rep, {WeightFunction::power(-0.5)});
  CHECK(pn.report.battery.size() == 2);
  CHECK(pn.report.battery.back().family == "constant");
  CHECK(pn.report.points[0].label == "null");
  ClassificationOptions two;
  two.windows = {10.0, 100.0};
  CHECK_THROWS_AS((void)hopf_classify(rep, two), UsageError);
}

TEST_CASE("real-axis atomic reps must be the random constant process") {
  const AtomicRep two(Alpha(1.0), {-1.0, 0.0, 1.0}, Table::from_rows({{1.0, 0.5}, {1.0, 1.0}, {1.0, 0.2}}),
                      TimeAxis::Real);
  try {
    (void)hopf_classify(two);
    FAIL("expected rejection");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("random constant process") != std::string::npos);
  }
  std::vector<double> times;
  for (int k = -10000; k <= 10000; k += 10) times.push_back(k);
  Table values(times.size(), 2);
  for (std::size_t k = 0; k < times.size(); ++k) {
    values(k, 0) = 1.0;
    values(k, 1) = 2.0;
  }
  const AtomicRep proportional(Alpha(1.0), times, values, TimeAxis::Real);
  const auto split = hopf_classify(proportional);
  CHECK(split.report.overall == "conservative");
}

TEST_CASE("reduction merges proportional atoms") {
  const AtomicRep rep(Alpha(1.0), {0.0, 1.0, 2.0}, Table::from_rows({{1.0, 3.0}, {0.5, 1.5}, {2.0, 6.0}}));
  const auto r = minimal_discrete_reduce(rep);
  CHECK_FALSE(r.minimal);
  REQUIRE(r.reduced.atom_count() == 1);
  CHECK(r.reduced.masses()[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.reduced.value(1, 0) == 0.5);
  REQUIRE(r.merges.size() == 1);
  CHECK(r.merges[0].kept == 0);
  CHECK(r.merges[0].removed == 1);
  CHECK(r.merges[0].factor == doctest::Approx(3.0));

  const AtomicRep distinct(Alpha(1.0), {0.0, 1.0}, Table::from_rows({{1.0, 1.0}, {0.5, 2.0}}));
  const auto same = minimal_discrete_reduce(distinct);
  CHECK(same.minimal);
  CHECK(same.reduced.values() == distinct.values());
  CHECK(same.reduced.masses() == distinct.masses());

  const AtomicRep zero(Alpha(2.0), {0.0, 1.0}, Table::from_rows({{1.0, 0.0}, {0.5, 0.0}}), TimeAxis::Integer, true);
  const auto z = minimal_discrete_reduce(zero);
  CHECK(z.dropped_zero == std::vector<std::size_t>{1});
  CHECK(z.reduced.atom_count() == 1);
  const auto doc = to_json(r);
  CHECK(doc["atoms_after"] == 1);
  CHECK(doc["merges"][0]["factor"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("reduction preserves every fdd exponent") {
  RandomStream rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = 0.5 + 2.0 * rng.uniform_open();
    const std::size_t times = 4;
    std::vector<std::vector<double>> rows(times, std::vector<double>(5));
    for (auto& row : rows) {
      for (double& v : row) v = rng.uniform_open();
    }
    const double c = 0.1 + 5.0 * rng.uniform_open();
    for (auto& row : rows) row[3] = c * row[1];
    std::vector<double> masses(5);
    for (double& m : masses) m = 0.2 + rng.uniform_open();
    const AtomicRep rep(Alpha(a), {0.0, 1.0, 2.0, 3.0}, masses, Table::from_rows(rows));
    const auto r = minimal_discrete_reduce(rep);
    CHECK(r.reduced.atom_count() == 4);
    for (int combo = 0; combo < 100; ++combo) {
      std::vector<ComboTerm> terms;
      for (double t = 0.0; t < 4.0; t += 1.0) terms.push_back({t, std::exp(std::log(0.1) + std::log(100.0) * rng.uniform_open())});
      const double before = std::pow(scale_coefficient(rep, terms).value(), a);
      const double after = std::pow(scale_coefficient(r.reduced, terms).value(), a);
      CHECK(std::abs(before - after) <= 1e-12 * before);
    }
  }
}

TEST_CASE("permutation orbits") {
  const AtomicRep three(Alpha(1.0), {0.0, 1.0, 2.0},
                        Table::from_rows({{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}}));
  const std::vector<std::size_t> identity{0, 1, 2};
  const auto id = orbit_decompose(identity, three);
  CHECK(id.orbits.size() == 3);
  for (const auto& o : id.orbits) {
    CHECK(o.period == 1u);
    CHECK(o.label == "positive-conservative");
  }

  const std::vector<double> base{1.0, 2.0, 3.0, 4.0};
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < 6; ++t) {
    std::vector<double> row(4);
    for (std::size_t i = 0; i < 4; ++i) row[i] = base[(i + static_cast<std::size_t>(t)) % 4];
    rows.push_back(row);
  }
  const AtomicRep cyclic(Alpha(1.0), {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, Table::from_rows(rows));
  const std::vector<std::size_t> cycle{1, 2, 3, 0};
  const auto four = orbit_decompose(cycle, cyclic);
  REQUIRE(four.orbits.size() == 1);
  CHECK(four.orbits[0].period == 4u);
  CHECK(four.orbits[0].atoms.size() == 4);
  for (const auto& o : four.orbits) CHECK(o.label != "dissipative-null");

  const std::vector<std::size_t> wrong{3, 0, 1, 2};
  try {
    (void)orbit_decompose(wrong, cyclic);
    FAIL("expected an inconsistency error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("t = 0, i = 0") != std::string::npos);
  }
  const std::vector<std::size_t> not_perm{0, 0, 1, 2};
  CHECK_THROWS_AS((void)orbit_decompose(not_perm, cyclic), UsageError);
  const auto json = to_json(four);
  CHECK(json["orbits"][0]["size"] == 4);
}

TEST_CASE("shift on Z") {
  const auto d = orbit_decompose(ShiftOnZ{KernelSpec::exponential(1.0), Alpha(1.0)});
  REQUIRE(d.orbits.size() == 1);
  CHECK_FALSE(d.orbits[0].period.has_value());
  CHECK(d.orbits[0].label == "dissipative-null");
  CHECK(d.spectrally_discrete);
  CHECK(to_json(d)["orbits"][0]["size"] == "infinite");
  CHECK_THROWS_AS((void)orbit_decompose(ShiftOnZ{KernelSpec::power(0.5), Alpha(1.0)}), UsageError);
}

TEST_CASE("Brown-Resnick dissipativity test") {
  BrTestOptions options;
  options.n_paths = 200;
  options.seed = 5;
  const auto half = br_dissipativity_test(GaussianIncrementModel::fbm(0.5), options);
  CHECK(half.verdict == "convergent");
  REQUIRE(half.tail.has_value());
  CHECK(half.tail->median > 0.0);
  CHECK(half.tail->t0.size() == 200);

  const auto zero = br_dissipativity_test(
      GaussianIncrementModel::from_variance([](double) { return 0.0; }, "zero"), options);
  CHECK(zero.verdict == "divergent");
  CHECK(zero.median_integral.back() == doctest::Approx(2000.0).epsilon(1e-9));

  const auto linear = br_dissipativity_test(GaussianIncrementModel::fbm(1.0), options);
  CHECK(linear.verdict == "convergent");
  REQUIRE(linear.closed_form.has_value());
  CHECK(linear.closed_form->max_relative_error < 0.01);

  options.workers = 1;
  const auto serial = br_dissipativity_test(GaussianIncrementModel::fbm(0.5), options);
  options.workers = 8;
  const auto wide = br_dissipativity_test(GaussianIncrementModel::fbm(0.5), options);
  CHECK(serial.integrals == wide.integrals);
  CHECK(to_json(serial).dump() == to_json(wide).dump());

  options.windows = {10.0, 100.0};
  CHECK_THROWS_AS((void)br_dissipativity_test(GaussianIncrementModel::fbm(0.5), options), UsageError);
}

TEST_CASE("classification report JSON") {
  const auto pn = positive_null_classify(single_point_rep(Alpha(1.0), 1.0), default_battery());
  const auto doc = to_json(pn.report);
  CHECK(doc["kind"] == "positive-null");
  CHECK(doc["points"][0]["witness"]["exponent"] == -0.5);
  CHECK(doc["points"][0]["members"].size() == 4);
  CHECK(doc["aggregate"]["null_mass"] == 1.0);
  CHECK(doc["rules"].contains("rtol"));
  CHECK(doc["battery"].size() == 4);
}
