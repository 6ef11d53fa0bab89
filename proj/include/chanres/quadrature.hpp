#pragma once

#include <functional>

namespace chanres {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b]. Subdivides the interval with
/// the largest error estimate until the total estimate drops below
/// max(abs_tol, rel_tol * |value|) or max_intervals is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, int max_intervals = 2000);

}  // namespace chanres
