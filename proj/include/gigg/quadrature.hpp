#pragma once

#include <functional>

namespace gigg {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

// Globally adaptive 15-point Gauss-Kronrod integration over a finite
// interval: the interval with the largest error estimate is bisected until
// the summed estimate meets max(abs_tol, rel_tol * |value|).
// Throws NumericError (carrying the achieved error) when the interval budget
// runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& options = {});

}  // namespace gigg
