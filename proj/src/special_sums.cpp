#include "boselab/special_sums.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "boselab/errors.hpp"
#include "boselab/quadrature.hpp"

namespace boselab {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                            771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                            -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double x) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
  return a;
}

// Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

}  // namespace

double gamma_function(double x) {
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_function(1.0 - x));
  x -= 1.0;
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * lanczos_sum(x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma needs x > 0");
  if (x < 0.5) return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) - log_gamma(1.0 - x);
  x -= 1.0;
  const double t = x + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(lanczos_sum(x));
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta evaluated only for s > 1");
  constexpr int n = 40;
  std::array<long double, n + 1> dk{};
  long double term = 1.0L / n;  // i = 0 term of the inner sum
  long double acc = term;
  dk[0] = n * acc;
  for (int i = 0; i < n; ++i) {
    term *= static_cast<long double>(n + i) * 4.0L * static_cast<long double>(n - i) /
            (static_cast<long double>(2 * i + 1) * static_cast<long double>(2 * i + 2));
    acc += term;
    dk[i + 1] = n * acc;
  }
  const long double ls = s;
  long double sum = 0.0L;
  for (int k = 0; k < n; ++k) {
    const long double v = (dk[k] - dk[n]) / std::pow(static_cast<long double>(k + 1), ls);
    sum += (k % 2 == 0) ? v : -v;
  }
  const long double eta_scale = 1.0L - std::pow(2.0L, 1.0L - ls);
  return static_cast<double>(-sum / (dk[n] * eta_scale));
}

double gamma_zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("gamma_zeta needs s > 1");
  return gamma_function(s) * riemann_zeta(s);
}

double power_exp_tail_bound(double p, double c, double J) {
  const double A = J - 1.0;
  if (!(c > 0.0)) throw std::domain_error("tail bound needs a positive decay rate");
  if (A <= 0.0 || A * c <= p) return std::numeric_limits<double>::infinity();
  // int_A^inf x^p e^{-cx} dx = c^{-p-1} Gamma(p+1, cA)
  const double x = c * A;
  const double a = p + 1.0;
  double log_gamma_upper = (a - 1.0) * std::log(x) - x;
  if (a > 1.0) {
    if (x <= a - 1.0) return std::numeric_limits<double>::infinity();
    log_gamma_upper -= std::log1p(-(a - 1.0) / x);
  }
  return std::exp(log_gamma_upper - a * std::log(c));
}

namespace detail {

SeriesSum truncated_sum(const std::function<double(std::int64_t)>& term, std::int64_t j_from, double rate,
                        const std::function<double(std::int64_t)>& tail_bound, double tol, double min_exponent) {
  Accumulator acc;
  constexpr std::int64_t kMaxTerms = 2'000'000'000;
  for (std::int64_t j = j_from;; ++j) {
    acc.add(term(j));
    if (static_cast<double>(j + 1) * rate >= min_exponent) {
      const double t = tail_bound(j + 1);
      if (t <= tol) return {acc.value(), t, j};
    }
    if (j - j_from > kMaxTerms) throw NumericError("series truncation did not terminate");
  }
}

}  // namespace detail

SumResult euler_maclaurin(const std::function<double(double)>& f, const std::function<double(double)>& deriv,
                          EulerMaclaurinMode mode, double scale) {
  const double a = mode == EulerMaclaurinMode::from_one ? 1.0 : 0.0;
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-15;
  const QuadResult value = integrate_to_infinity(f, a, scale, opts);
  const QuadResult rem = integrate_to_infinity([&](double x) { return std::abs(deriv(x)); }, a, scale, opts);
  return {value.value, rem.value + rem.abs_error,
          mode == EulerMaclaurinMode::from_one ? SumMethod::euler_maclaurin_eu1 : SumMethod::euler_maclaurin_eu2};
}

SumResult bose_sum(double s, double b, std::int64_t l) {
  if (!(s > 0.0)) throw std::domain_error("bose_sum needs s > 0");
  if (!(b > 0.0)) throw std::domain_error("bose_sum needs b > 0");
  if (l < 1) throw std::domain_error("bose_sum needs l >= 1");
  auto term = [&](std::int64_t j) {
    const double x = b * static_cast<double>(j);
    return std::pow(static_cast<double>(j), s) / std::expm1(x);
  };
  auto tail = [&](std::int64_t J) {
    return power_exp_tail_bound(s, b, static_cast<double>(J)) / (-std::expm1(-b * static_cast<double>(J)));
  };
  // Relative target: the first term is a lower bound on the sum.
  const double first = term(l);
  const auto r = detail::truncated_sum(term, l, b, tail, 1e-16 * first);
  return {r.value, r.tail_bound, SumMethod::direct};
}

double bose_integral(double d, double x) {
  if (!(d > 1.0)) throw std::domain_error("bose_integral needs d > 1");
  if (x < 0.0) throw std::domain_error("bose_integral needs x >= 0");
  QuadOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 1e-300;
  auto integrand = [d](double y) { return std::pow(y, d - 1.0) / std::expm1(y); };
  double total = 0.0;
  double lo = x;
  if (d < 2.0 && x < 1.0) {
    // u = y^{d-1} removes the y^{d-2} endpoint singularity.
    const double p = 1.0 / (d - 1.0);
    auto g = [p, d](double u) {
      const double y = std::pow(u, p);
      return (y == 0.0 ? 1.0 : y / std::expm1(y)) / (d - 1.0);
    };
    total += integrate(g, std::pow(x, d - 1.0), 1.0, opts).value;
    lo = 1.0;
  }
  // Beyond hi the integrand is below hi^{d-1} e^{-hi}, relatively e^{-50}.
  const double hi = std::max(lo, d) + 50.0;
  total += integrate(integrand, lo, hi, opts).value;
  return total;
}

CurvatureSums curvature_sums(const MultiplicitySpec& spec, double b, double rel_tol) {
  if (!(b > 0.0)) throw std::domain_error("curvature_sums needs b > 0");
  const double p = spec.d() - 1.0;
  CurvatureSums out;
  {
    auto term = [&](std::int64_t j) {
      const double x = b * static_cast<double>(j);
      const double em = -std::expm1(-x);  // 1 - e^{-x}
      return spec(j) * static_cast<double>(j) * static_cast<double>(j) * std::exp(-x) / (em * em);
    };
    auto tail = [&](std::int64_t J) {
      const double em = -std::expm1(-b * static_cast<double>(J));
      return spec.envelope_constant(J) * power_exp_tail_bound(p + 2.0, b, static_cast<double>(J)) / (em * em);
    };
    out.s2 = detail::truncated_sum(term, 1, b, tail, rel_tol * term(1)).value;
  }
  {
    auto term = [&](std::int64_t j) {
      const double x = b * static_cast<double>(j);
      const double em = -std::expm1(-x);
      const double jd = static_cast<double>(j);
      return spec(j) * jd * jd * jd * (std::exp(-x) + std::exp(-2.0 * x)) / (em * em * em);
    };
    auto tail = [&](std::int64_t J) {
      const double em = -std::expm1(-b * static_cast<double>(J));
      return 2.0 * spec.envelope_constant(J) * power_exp_tail_bound(p + 3.0, b, static_cast<double>(J)) /
             (em * em * em);
    };
    out.s3 = detail::truncated_sum(term, 1, b, tail, rel_tol * term(1)).value;
  }
  {
    const double h = 0.5 * b;
    auto term = [&](std::int64_t j) {
      const double x = h * static_cast<double>(j);
      const double em = -std::expm1(-x);
      return spec(j) * std::exp(-x) / (em * em);
    };
    auto tail = [&](std::int64_t J) {
      const double em = -std::expm1(-h * static_cast<double>(J));
      return spec.envelope_constant(J) * power_exp_tail_bound(p, h, static_cast<double>(J)) / (em * em);
    };
    out.kdiag = detail::truncated_sum(term, 1, h, tail, rel_tol * term(1)).value;
  }
  return out;
}

}  // namespace boselab
