#pragma once

#include <functional>

namespace boselab {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Endpoints are never
/// evaluated, so integrable endpoint singularities are allowed. Throws
/// NumericError if the error target is not met within max_intervals or the
/// integrand produces a non-finite value.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opts = {});

/// Integral over [a, inf) through x = a + scale * t / (1 - t).
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double scale = 1.0,
                                 const QuadOptions& opts = {});

}  // namespace boselab
