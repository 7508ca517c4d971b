#include "maxstable/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "maxstable/errors.hpp"

namespace maxstable {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, const QuadratureOptions& options) {
  QuadratureResult out;
  if (a == b) return out;
  if (!(a < b)) throw UsageError("integrate needs a <= b");
  std::vector<double> edges{a};
  std::vector<double> inner;
  for (double x : breaks) {
    if (x > a && x < b) inner.push_back(x);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  edges.insert(edges.end(), inner.begin(), inner.end());
  edges.push_back(b);
  using boost::math::quadrature::gauss_kronrod;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, edges[i], edges[i + 1],
                                                          options.max_depth, options.rel_tol, &err);
    if (!std::isfinite(v)) {
      throw NumericError("integrand is not finite on [" + std::to_string(edges[i]) + ", " +
                         std::to_string(edges[i + 1]) + "]");
    }
    out.value += v;
    out.error += err;
  }
  return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("trapezoid needs matching node and value counts");
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

}  // namespace maxstable
