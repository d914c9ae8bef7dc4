#pragma once

#include <cstdint>
#include <functional>

#include "boselab/multiplicity.hpp"

namespace boselab {

enum class SumMethod { direct, euler_maclaurin_eu1, euler_maclaurin_eu2 };

/// A sum together with a bound on its error. For direct sums the bound covers
/// the truncated tail; for Euler-Maclaurin it is the integral of |f'|.
struct SumResult {
  double value = 0.0;
  double remainder_bound = 0.0;
  SumMethod method = SumMethod::direct;
};

/// Result of a truncated positive series.
struct SeriesSum {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t last_term = 0;  // largest j included
};

double gamma_function(double x);
double log_gamma(double x);
/// Riemann zeta for s > 1 (Borwein's accelerated alternating series).
double riemann_zeta(double s);
/// Gamma(s) * zeta(s) for s > 1.
double gamma_zeta(double s);

/// Upper bound on sum_{j>=J} j^p e^{-c j}, via the integral from J-1.
double power_exp_tail_bound(double p, double c, double J);

namespace detail {

/// Sums term(j) for j = j_from, j_from+1, ... until j * rate >= min_exponent
/// and tail_bound(j + 1) <= tol. tail_bound(J) must bound sum_{j>=J} term(j).
SeriesSum truncated_sum(const std::function<double(std::int64_t)>& term, std::int64_t j_from, double rate,
                        const std::function<double(std::int64_t)>& tail_bound, double tol,
                        double min_exponent = 50.0);

}  // namespace detail

enum class EulerMaclaurinMode { from_one, from_zero };

/// Approximates sum_{j>=1} f(j) by the integral of f over [1, inf) or
/// [0, inf), with remainder bound equal to the integral of |f'| over the same
/// range. `scale` sets the length scale of the infinite-interval map.
SumResult euler_maclaurin(const std::function<double(double)>& f, const std::function<double(double)>& deriv,
                          EulerMaclaurinMode mode, double scale = 1.0);

/// sum_{j>=l} j^s / (e^{bj} - 1) by direct summation with tail bound.
SumResult bose_sum(double s, double b, std::int64_t l = 1);

/// Integral over [x, inf) of y^{d-1} / (e^y - 1).
double bose_integral(double d, double x);

struct CurvatureSums {
  double s2 = 0.0;     // sum q_j j^2 e^{bj} / (e^{bj} - 1)^2
  double s3 = 0.0;     // sum q_j j^3 (e^{2bj} + e^{bj}) / (e^{bj} - 1)^3
  double kdiag = 0.0;  // sum q_j e^{bj/2} / (e^{bj/2} - 1)^2
};

CurvatureSums curvature_sums(const MultiplicitySpec& spec, double b, double rel_tol = 1e-13);

}  // namespace boselab
