#pragma once

#include <functional>
#include <span>

namespace maxstable {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  unsigned max_depth = 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b], split at the given break points
// so that kinks and jumps sit on panel edges.
[[nodiscard]] QuadratureResult integrate(const std::function<double(double)>& f, double a,
                                         double b, std::span<const double> breaks = {},
                                         const QuadratureOptions& options = {});

// Composite trapezoid over tabulated nodes.
[[nodiscard]] double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace maxstable
