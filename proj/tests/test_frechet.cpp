#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "maxstable/frechet.hpp"
#include "maxstable/random.hpp"
#include "support/stats.hpp"

using namespace maxstable;

TEST_CASE("frechet_cdf worked values") {
  CHECK(frechet_cdf(1.0, FrechetScale(1.0), Alpha(1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(frechet_cdf(2.0, FrechetScale(1.0), Alpha(2.0)) == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
  CHECK(frechet_cdf(5.0, FrechetScale(0.0), Alpha(1.0)) == 1.0);
}

TEST_CASE("frechet_cdf rejects bad input") {
  CHECK_THROWS_AS((void)frechet_cdf(0.0, FrechetScale(1.0), Alpha(1.0)), DomainError);
  CHECK_THROWS_AS((void)frechet_cdf(-1.0, FrechetScale(1.0), Alpha(1.0)), DomainError);
  CHECK_THROWS_AS((void)frechet_cdf(std::nan(""), FrechetScale(1.0), Alpha(1.0)), DomainError);
  CHECK_THROWS_AS((void)frechet_cdf(std::numeric_limits<double>::infinity(), FrechetScale(1.0), Alpha(1.0)),
                  DomainError);
  CHECK_THROWS_AS(Alpha(0.0), DomainError);
  CHECK_THROWS_AS(Alpha(-2.0), DomainError);
  CHECK_THROWS_AS(Alpha(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(FrechetScale(-1.0), DomainError);
}

TEST_CASE("frechet_cdf is a valid distribution function") {
  for (double sigma : {0.1, 1.0, 7.5}) {
    for (double alpha : {0.3, 1.0, 2.0, 5.0}) {
      const FrechetScale s(sigma);
      const Alpha a(alpha);
      double previous = 0.0;
      for (double x = 1e-3; x < 1e6; x *= 1.3) {
        const double p = frechet_cdf(x, s, a);
        CHECK(p >= previous);
        CHECK(p <= 1.0);
        previous = p;
      }
      CHECK(frechet_cdf(1e-300, s, a) < 1e-12);
      CHECK(frechet_cdf(1e300, s, a) > 1.0 - 1e-12);
    }
  }
}

TEST_CASE("extreme exponents saturate instead of producing NaN") {
  const double tiny = frechet_cdf(1e-300, FrechetScale(1e300), Alpha(50.0));
  CHECK(tiny == 0.0);
  CHECK(std::isinf(frechet_exponent(1e-300, FrechetScale(1e300), Alpha(50.0))));
  CHECK(frechet_cdf(1e300, FrechetScale(1e-300), Alpha(50.0)) == 1.0);
}

TEST_CASE("inverse-CDF sampler") {
  CHECK(standard_frechet_from_uniform(std::exp(-1.0), Alpha(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(standard_frechet_from_uniform(std::exp(-1.0), Alpha(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  const double q = frechet_quantile(0.3, FrechetScale(2.0), Alpha(1.5));
  CHECK(frechet_cdf(q, FrechetScale(2.0), Alpha(1.5)) == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("sampled Frechet passes KS at 1%") {
  for (double alpha : {0.5, 1.0, 3.0}) {
    const Alpha a(alpha);
    RandomStream rng(20240601);
    std::vector<double> z(100000);
    for (double& v : z) v = sample_standard_frechet(a, rng);
    const double d = testsupport::ks_statistic(z, [&](double x) { return frechet_cdf(x, FrechetScale(1.0), a); });
    CHECK(d < testsupport::ks_critical(z.size()));
  }
}

TEST_CASE("max-stability of iid Frechet maxima") {
  const Alpha a(1.7);
  const int n = 8;
  RandomStream rng(99);
  std::vector<double> m(50000);
  for (double& v : m) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) best = std::max(best, sample_standard_frechet(a, rng));
    v = best * std::pow(n, -a.inverse());
  }
  const double d = testsupport::ks_statistic(m, [&](double x) { return frechet_cdf(x, FrechetScale(1.0), a); });
  CHECK(d < testsupport::ks_critical(m.size()));
}

TEST_CASE("max_scale worked values") {
  const std::vector<ScaledTerm> one{{1.0, FrechetScale(1.0)}};
  CHECK(max_scale(one, Alpha(1.3)).value() == doctest::Approx(1.0));
  const std::vector<ScaledTerm> two{{1.0, FrechetScale(1.0)}, {1.0, FrechetScale(1.0)}};
  CHECK(max_scale(two, Alpha(1.0)).value() == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<ScaledTerm> mixed{{2.0, FrechetScale(1.0)}, {3.0, FrechetScale(1.0)}};
  CHECK(max_scale(mixed, Alpha(2.0)).value() == doctest::Approx(std::sqrt(13.0)).epsilon(1e-15));
  CHECK(max_scale({}, Alpha(1.0)).degenerate());
  const std::vector<ScaledTerm> negative{{-1.0, FrechetScale(1.0)}};
  CHECK_THROWS_AS((void)max_scale(negative, Alpha(1.0)), DomainError);
}

TEST_CASE("max_scale of 2Z1 v 3Z2 matches a Monte-Carlo scale estimate") {
  // P(M <= x) = exp(-s^2 / x^2), so s^2 = -x^2 log F_n(x) at the sample median.
  const Alpha a(2.0);
  RandomStream rng(7);
  std::vector<double> m(200000);
  for (double& v : m) v = std::max(2.0 * sample_standard_frechet(a, rng), 3.0 * sample_standard_frechet(a, rng));
  std::sort(m.begin(), m.end());
  const double x = m[m.size() / 2];
  const double estimate = x * std::sqrt(-std::log(0.5));
  CHECK(estimate == doctest::Approx(std::sqrt(13.0)).epsilon(0.01));
}

TEST_CASE("max_scale agrees with the product of marginal CDFs") {
  RandomStream rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Alpha a(0.2 + 4.0 * rng.uniform_open());
    std::vector<ScaledTerm> terms;
    const int k = 1 + static_cast<int>(rng.uniform_open() * 5);
    for (int i = 0; i < k; ++i) {
      terms.push_back({0.1 + 3.0 * rng.uniform_open(), FrechetScale(0.1 + 2.0 * rng.uniform_open())});
    }
    const double x = 0.2 + 10.0 * rng.uniform_open();
    double product = 1.0;
    for (const auto& t : terms) product *= frechet_cdf(x / t.coefficient, t.scale, a);
    CHECK(std::abs(frechet_cdf(x, max_scale(terms, a), a) - product) <= 1e-12);
  }
}
