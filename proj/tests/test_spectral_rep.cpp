#include <doctest.h>

#include <cmath>
#include <vector>

#include "maxstable/gallery.hpp"
#include "maxstable/spectral_rep.hpp"
#include "support/oracles.hpp"

using namespace maxstable;

namespace {

// Three atoms on times {0, 1, 2}; atoms 0 and 2 have disjoint supports.
AtomicRep three_atoms(double alpha) {
  return AtomicRep(Alpha(alpha), {0.0, 1.0, 2.0}, {1.0, 2.0, 0.5},
                   Table::from_rows({{1.0, 0.5, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.25, 2.0}}));
}

// Brute-force exponent of the 1-Frechet extremal process on {(1,1),(2,2)}:
// midpoint sum of max_j 1_(0,t_j](u) / x_j over (0, 2].
double brute_force_extremal() {
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = 2.0 * (i + 0.5) / n;
    sum += std::max(u <= 1.0 ? 1.0 : 0.0, u <= 2.0 ? 0.5 : 0.0);
  }
  return sum * 2.0 / n;
}

}  // namespace

TEST_CASE("extremal-process exponent on {(1,1),(2,2)} is 1.5") {
  const double oracle = brute_force_extremal();
  CHECK(oracle == doctest::Approx(1.5).epsilon(1e-9));
  const auto reps = extremal_process_rep(Alpha(1.0), 4.0);
  const std::vector<Constraint> c{{1.0, 1.0}, {2.0, 2.0}};
  CHECK(fdd_exponent(reps.halfline, c).value == doctest::Approx(oracle).epsilon(1e-9));
  const SpectralRepresentation rep = reps.halfline;
  CHECK(fdd_probability(rep, c) == doctest::Approx(oracles::kExtremalJoint).epsilon(1e-9));
}

TEST_CASE("GridRep quadrature converges under grid doubling") {
  const std::vector<Constraint> c{{1.0, 1.0}, {2.0, 2.0}};
  const auto coarse = extremal_process_rep(Alpha(1.0), 4.0, 400);
  const auto fine = extremal_process_rep(Alpha(1.0), 4.0, 800);
  const auto e1 = fdd_exponent(coarse.halfline, c);
  const auto e2 = fdd_exponent(fine.halfline, c);
  CHECK(std::abs(e1.value - e2.value) <= e1.quadrature_tolerance);
  const std::vector<Constraint> off{{1.003, 1.0}, {2.0, 2.0}};
  CHECK(std::abs(fdd_exponent(coarse.halfline, off).value - fdd_exponent(fine.halfline, off).value) <=
        fdd_exponent(coarse.halfline, off).quadrature_tolerance);
}

TEST_CASE("single constraint reduces to the marginal exponent") {
  const auto rep = three_atoms(1.5);
  const SpectralRepresentation any = rep;
  for (double t : {0.0, 1.0, 2.0}) {
    const std::vector<ComboTerm> combo{{t, 1.0}};
    const FrechetScale s = scale_coefficient(any, combo);
    for (double x : {0.3, 1.0, 4.0}) {
      const std::vector<Constraint> c{{t, x}};
      CHECK(fdd_exponent(rep, c).value ==
            doctest::Approx(std::pow(x, -1.5) * std::pow(s.value(), 1.5)).epsilon(1e-13));
      CHECK(std::abs(fdd_probability(any, c) - frechet_cdf(x, s, Alpha(1.5))) <= 1e-12);
    }
  }
}

TEST_CASE("disjoint supports add exponents and factor probabilities") {
  const auto rep = three_atoms(0.8);
  const SpectralRepresentation any = rep;
  const std::vector<Constraint> both{{0.0, 1.3}, {2.0, 0.7}};
  const std::vector<Constraint> first{{0.0, 1.3}};
  const std::vector<Constraint> second{{2.0, 0.7}};
  // Times 0 and 2 share atom 1 via t=2's 0.25; restrict to the disjoint pair.
  const auto disjoint = rep.select_atoms(std::vector<std::size_t>{0, 2});
  const SpectralRepresentation d = disjoint;
  CHECK(fdd_exponent(disjoint, both).value ==
        doctest::Approx(fdd_exponent(disjoint, first).value + fdd_exponent(disjoint, second).value)
            .epsilon(1e-14));
  CHECK(fdd_probability(d, both) ==
        doctest::Approx(fdd_probability(d, first) * fdd_probability(d, second)).epsilon(1e-14));
  CHECK(fdd_exponent(any, both).value > fdd_exponent(disjoint, both).value);
}

TEST_CASE("exponent monotonicity") {
  const auto rep = three_atoms(2.0);
  const std::vector<Constraint> base{{0.0, 1.0}, {1.0, 1.0}};
  const std::vector<Constraint> looser{{0.0, 2.0}, {1.0, 1.0}};
  const std::vector<Constraint> more{{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}};
  CHECK(fdd_exponent(rep, looser).value < fdd_exponent(rep, base).value);
  CHECK(fdd_exponent(rep, more).value > fdd_exponent(rep, base).value);
  CHECK(fdd_exponent(rep, std::vector<Constraint>{}).value == 0.0);
}

TEST_CASE("max-linearity of the exponent") {
  const auto rep = three_atoms(1.3);
  const double a = 0.7;
  const double b = 2.1;
  // Scale of a X_0 v b X_1 from the combo vs from the pointwise max.
  const SpectralRepresentation any = rep;
  const std::vector<ComboTerm> combo{{0.0, a}, {1.0, b}};
  double direct = 0.0;
  for (std::size_t i = 0; i < rep.atom_count(); ++i) {
    const double m = std::max(a * rep.value(0, i), b * rep.value(1, i));
    direct += rep.masses()[i] * std::pow(m, 1.3);
  }
  CHECK(std::abs(std::pow(scale_coefficient(any, combo).value(), 1.3) - direct) <= 1e-12 * direct);
}

TEST_CASE("scale_coefficient worked values") {
  const auto reps = extremal_process_rep(Alpha(2.0), 8.0, 800);
  const SpectralRepresentation halfline = reps.halfline;
  for (double t : {0.5, 1.0, 3.0}) {
    const std::vector<ComboTerm> combo{{t, 1.0}};
    CHECK(scale_coefficient(halfline, combo).value() == doctest::Approx(std::sqrt(t)).epsilon(1e-12));
  }
  const AtomicRep identity(Alpha(1.7), {0.0}, Table::from_rows({{1.0}}));
  const SpectralRepresentation id = identity;
  const std::vector<ComboTerm> c3{{0.0, 3.0}};
  CHECK(scale_coefficient(id, c3).value() == doctest::Approx(3.0).epsilon(1e-14));
  const std::vector<ComboTerm> zeros{{0.0, 0.0}};
  CHECK(scale_coefficient(id, zeros).degenerate());
  const std::vector<ComboTerm> negative{{0.0, -1.0}};
  CHECK_THROWS_AS((void)scale_coefficient(id, negative), DomainError);

  const auto mm = moving_maxima_rep(KernelSpec::indicator(0.0, 1.0), Alpha(1.0));
  for (double t : {0.0, 2.5}) {
    const std::vector<ComboTerm> combo{{t, 1.0}};
    CHECK(scale_coefficient(mm, combo).value() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("bad constraints are rejected") {
  const auto rep = three_atoms(1.0);
  const std::vector<Constraint> zero{{0.0, 0.0}};
  const std::vector<Constraint> missing{{0.5, 1.0}};
  CHECK_THROWS_AS((void)fdd_exponent(rep, zero), DomainError);
  CHECK_THROWS_AS((void)fdd_exponent(rep, missing), UsageError);
}

TEST_CASE("AtomicRep construction invariants") {
  CHECK_THROWS_AS(AtomicRep(Alpha(1.0), {0.0}, Table::from_rows({{-1.0}})), UsageError);
  CHECK_THROWS_AS(AtomicRep(Alpha(1.0), {0.0, 1.0}, Table::from_rows({{1.0, 0.0}, {1.0, 0.0}})),
                  UsageError);
  CHECK_NOTHROW(AtomicRep(Alpha(1.0), {0.0, 1.0}, Table::from_rows({{1.0, 0.0}, {1.0, 0.0}}),
                          TimeAxis::Integer, true));
  CHECK_THROWS_AS(AtomicRep(Alpha(1.0), {1.0, 0.0}, Table::from_rows({{1.0}, {1.0}})), UsageError);
  CHECK_THROWS_AS(AtomicRep(Alpha(1.0), {0.0}, {0.0}, Table::from_rows({{1.0}})), UsageError);
}

TEST_CASE("rho metric") {
  const auto rep = three_atoms(1.0);
  const auto f = spectral_function(rep, 0.0);
  const auto g = spectral_function(rep, 2.0);
  CHECK(rho_metric(f, f) == 0.0);
  CHECK(rho_metric(f, g) == doctest::Approx(rho_metric(g, f)));
  SpectralFunction zero = f;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  const std::vector<Constraint> c{{0.0, 1.0}};
  CHECK(rho_metric(f, zero) == doctest::Approx(fdd_exponent(rep, c).value).epsilon(1e-15));
  // Indicators of disjoint cells with masses m1, m2.
  const AtomicRep cells(Alpha(2.0), {0.0, 1.0}, {0.3, 0.9}, Table::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(rho_metric(spectral_function(cells, 0.0), spectral_function(cells, 1.0)) ==
        doctest::Approx(1.2).epsilon(1e-15));
  const auto grid = extremal_process_rep(Alpha(1.0), 2.0, 10).halfline;
  CHECK_THROWS_AS((void)rho_metric(f, spectral_function(grid, 1.0)), UsageError);
}

TEST_CASE("stationarity predicate") {
  const std::vector<double> shifts{0.5, 3.0};
  const std::vector<std::vector<Constraint>> probes{{{0.0, 1.0}}, {{0.0, 1.0}, {1.0, 2.0}}};
  const auto mm = moving_maxima_rep(KernelSpec::gaussian(1.0), Alpha(1.0));
  CHECK(check_stationarity(mm, shifts, probes, 1e-6).stationary);
  const std::vector<std::vector<Constraint>> positive{{{1.0, 1.0}}, {{1.0, 1.0}, {2.0, 2.0}}};
  const SpectralRepresentation ext = extremal_process_rep(Alpha(1.0), 10.0, 1000).halfline;
  const auto report = check_stationarity(ext, shifts, positive, 1e-6);
  CHECK_FALSE(report.stationary);
  CHECK(report.max_deviation > 0.4);
  const SpectralRepresentation br = brown_resnick_rep(GaussianIncrementModel::fbm(0.5));
  MonteCarloOptions mc;
  mc.samples = 20000;
  mc.seed = 4;
  const auto br_report = check_stationarity(br, shifts, probes, 0.0, mc);
  CHECK(br_report.monte_carlo);
  CHECK(br_report.stationary);
}

TEST_CASE("Monte-Carlo exponents carry a standard error") {
  const SpectralRepresentation br = brown_resnick_rep(GaussianIncrementModel::fbm(0.5));
  const std::vector<Constraint> c{{0.0, 1.0}, {1.0, 1.0}};
  MonteCarloOptions mc;
  mc.samples = 10000;
  const auto e = fdd_exponent(br, c, mc);
  CHECK(e.method == "monte-carlo");
  CHECK(e.std_error > 0.0);
  CHECK(e.samples == 10000);
  mc.samples = 1;
  CHECK_THROWS_AS((void)fdd_exponent(br, c, mc), UsageError);
}

TEST_CASE("independent blocks") {
  const AtomicRep two(Alpha(1.0), {0.0, 1.0}, Table::from_rows({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(independent_blocks(two, {{0.0}, {1.0}}));
  const AtomicRep shared(Alpha(1.0), {0.0, 1.0}, Table::from_rows({{1.0, 0.0}, {0.5, 1.0}}));
  CHECK_FALSE(independent_blocks(shared, {{0.0}, {1.0}}));
  // Extremal-process increments on disjoint cells (0,1], (1,2], (2,3]: the
  // increment over cell k is the k-th atom.
  const AtomicRep increments(Alpha(1.0), {1.0, 2.0, 3.0},
                             Table::from_rows({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}));
  CHECK(independent_blocks(increments, {{1.0}, {2.0}, {3.0}}));
}

TEST_CASE("hybrid exponents add") {
  const auto grid = extremal_process_rep(Alpha(1.0), 4.0, 40).halfline;
  const AtomicRep atoms(Alpha(1.0), {1.0, 2.0}, Table::from_rows({{1.0, 0.2}, {0.5, 0.7}}), TimeAxis::Real);
  const auto h = make_hybrid(grid, atoms);
  const std::vector<Constraint> c{{1.0, 0.8}, {2.0, 1.7}};
  CHECK(fdd_exponent(h, c).value ==
        doctest::Approx(fdd_exponent(grid, c).value + fdd_exponent(atoms, c).value).epsilon(1e-14));
  CHECK_THROWS_AS((void)make_hybrid(grid, empty_atomic(Alpha(2.0))), UsageError);
}
