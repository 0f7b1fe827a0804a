#pragma once

#include <functional>

namespace cclt {

struct QuadratureValue {
  double value = 0.0;
  /// Sum of the Richardson error estimates of the accepted panels.
  double error = 0.0;
};

/// Adaptive Simpson on [a, b]. A panel is accepted once its error estimate
/// is within max(abs_tol, rel_tol * |whole-interval estimate|), with the
/// tolerance halved per level. Throws NumericalError past max_depth.
QuadratureValue adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                 double abs_tol, int max_depth, double rel_tol = 0.0);

}  // namespace cclt
