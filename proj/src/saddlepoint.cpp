#include "boselab/saddlepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "boselab/errors.hpp"
#include "boselab/exact_oracle.hpp"
#include "boselab/kernels.hpp"
#include "boselab/quadrature.hpp"
#include "boselab/special_sums.hpp"
#include "boselab/weight_table.hpp"

namespace boselab {
namespace {

constexpr double kPi = std::numbers::pi;

// sum_j q_j ln(1 / (1 - e^{-bj})) with envelope tail bound.
double log_partition(const MultiplicitySpec& spec, double b) {
  const double p = spec.d() - 1.0;
  auto term = [&](std::int64_t j) { return -spec(j) * std::log1p(-std::exp(-b * static_cast<double>(j))); };
  auto tail = [&](std::int64_t J) {
    const double em = -std::expm1(-b * static_cast<double>(J));
    return spec.envelope_constant(J) * power_exp_tail_bound(p, b, static_cast<double>(J)) / em;
  };
  return detail::truncated_sum(term, 1, b, tail, 1e-16 * term(1)).value;
}

// Level tables for repeated phase evaluation along the contour.
struct PhaseLevels {
  std::vector<double> q, e, jd;
  PhaseLevels(const MultiplicitySpec& spec, double b, std::int64_t J) {
    q.resize(static_cast<std::size_t>(J));
    e.resize(q.size());
    jd.resize(q.size());
    for (std::int64_t j = 1; j <= J; ++j) {
      q[j - 1] = spec(j);
      jd[j - 1] = static_cast<double>(j);
      e[j - 1] = std::exp(-b * jd[j - 1]);
    }
  }

  std::complex<double> operator()(double M, double phi) const {
    double re = 0.0;
    double im = M * phi;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double y = jd[i] * phi;
      const double s = std::sin(0.5 * y);
      const double one_minus = 1.0 - e[i];
      const double delta = 4.0 * e[i] * s * s / (one_minus * one_minus);
      re -= 0.5 * q[i] * std::log1p(delta);
      // 1 - e^{-x-iy} has real part 1 - e^{-x} cos y > 0, so the principal
      // logarithm never meets its cut.
      const double real_part = 1.0 - e[i] * std::cos(y);
      if (!(real_part > 0.0)) throw NumericError("phase: logarithm argument left the right half-plane");
      im -= q[i] * std::atan2(e[i] * std::sin(y), real_part);
    }
    return {re, im};
  }
};

}  // namespace

ActionProfile action(const MultiplicitySpec& spec, double M, double tol) {
  if (!(M > 0.0)) throw std::invalid_argument("action needs M > 0");
  const EquilibriumSolution eq = solve_b(spec, M, tol);
  const CurvatureSums cs = curvature_sums(spec, eq.b);
  ActionProfile a;
  a.M = M;
  a.b = eq.b;
  a.Nbar = eq.Nbar;
  a.S_M = eq.b * M + log_partition(spec, eq.b);
  a.S2 = -cs.s2;
  a.S3_bound = cs.s3;
  a.K = 0.5 * std::exp(eq.b) * cs.kdiag;
  return a;
}

std::int64_t phase_levels(double M, double b) {
  const double cut = std::ceil(60.0 / b) + 1.0;
  return static_cast<std::int64_t>(std::max(1.0, std::min(std::floor(M), cut)));
}

std::complex<double> phase(const MultiplicitySpec& spec, double M, double b, double phi, std::int64_t J) {
  if (!(b > 0.0)) throw std::invalid_argument("phase needs b > 0");
  if (J <= 0) J = phase_levels(M, b);
  return PhaseLevels(spec, b, J)(M, phi);
}

double phase_curvature_fd(const MultiplicitySpec& spec, double M, double b) {
  const double h = 1e-4 * std::pow(b, 0.5 * (spec.d() + 2.0));
  // S(0) = 0 and Re S is even, so the central difference is 2 Re S(h) / h^2.
  return 2.0 * phase(spec, M, b, h).real() / (h * h);
}

ContourWeight contour_weight(const MultiplicitySpec& spec, std::int64_t M, double rel_tol) {
  if (M <= 0) throw std::invalid_argument("contour_weight needs M > 0");
  const EquilibriumSolution eq = solve_b(spec, static_cast<double>(M));
  const double b = eq.b;
  const double Md = static_cast<double>(M);
  const std::int64_t J = phase_levels(Md, b);
  const PhaseLevels levels(spec, b, J);

  ContourWeight out;
  out.levels = J;
  out.S_J = b * Md;
  for (std::int64_t j = 1; j <= J; ++j) out.S_J -= levels.q[j - 1] * std::log1p(-levels.e[j - 1]);

  const double d = spec.d();
  const double z1 = std::min(kPi, kZoneDelta1 * std::pow(b, 1.0 + d / 3.0));
  const double z2 = std::min(kPi, std::max(z1, kZoneDelta2 * b));
  out.zone_bounds = {z1, z2, kPi};

  // Gaussian scale of the integral sets the absolute tolerance.
  const double s2 = curvature_sums(spec, b).s2;
  const double scale = std::sqrt(2.0 * kPi / s2) / (2.0 * kPi);
  QuadOptions opts;
  opts.abs_tol = rel_tol * scale / 3.0;
  opts.rel_tol = 1e-15;
  opts.max_intervals = 50000;

  // (1/2pi) int_{-pi}^{pi} e^S = (1/pi) int_0^pi Re e^S by conjugate symmetry.
  auto re_part = [&](double phi) {
    const auto s = levels(Md, phi);
    return std::exp(s.real()) * std::cos(s.imag()) / kPi;
  };
  double lo = 0.0;
  for (int z = 0; z < 3; ++z) {
    const double hi = out.zone_bounds[z];
    if (hi > lo) {
      const QuadResult r = integrate(re_part, lo, hi, opts);
      out.zone_integral[z] = r.value;
      out.intervals += r.intervals;
    }
    lo = hi;
  }
  out.integral = out.zone_integral[0] + out.zone_integral[1] + out.zone_integral[2];
  if (!(out.integral > 0.0)) throw NumericError("contour integral is not positive");

  // Imaginary part over the full circle, integrated without using symmetry.
  auto im_part = [&](double phi) {
    const auto s = levels(Md, phi);
    return std::exp(s.real()) * std::sin(s.imag()) / (2.0 * kPi);
  };
  const double im = integrate(im_part, -kPi, 0.0, opts).value + integrate(im_part, 0.0, kPi, opts).value;
  out.imag_rel = std::abs(im) / out.integral;
  out.log_weight = out.S_J + std::log(out.integral);
  return out;
}

F21Check verify_f21(const MultiplicitySpec& spec, double xi_re, double xi_im) {
  if (!(xi_re > 0.0)) throw std::invalid_argument("verify_f21 needs Re xi > 0");
  const double x = xi_re;
  const double y = xi_im;
  const double p = spec.d() - 1.0;
  const double em1 = -std::expm1(-x);
  const double tol = 1e-16 * spec(1) * std::exp(-x) / (em1 * em1);

  auto lhs_term = [&](std::int64_t j) {
    const double jd = static_cast<double>(j);
    const double e = std::exp(-jd * x);
    const double s = std::sin(0.5 * jd * y);
    const double om = -std::expm1(-jd * x);
    return 0.5 * spec(j) * std::log1p(4.0 * e * s * s / (om * om));
  };
  auto lhs_tail = [&](std::int64_t J) {
    const double om = -std::expm1(-x * static_cast<double>(J));
    return 2.0 * spec.envelope_constant(J) * power_exp_tail_bound(p, x, static_cast<double>(J)) / (om * om);
  };
  auto rhs_term = [&](std::int64_t j) {
    const double jd = static_cast<double>(j);
    return 0.2 * spec(j) * std::exp(-jd * x) * (1.0 - std::cos(jd * y));
  };
  auto rhs_tail = [&](std::int64_t J) {
    return 0.4 * spec.envelope_constant(J) * power_exp_tail_bound(p, x, static_cast<double>(J));
  };
  F21Check c;
  c.lhs = detail::truncated_sum(lhs_term, 1, x, lhs_tail, tol).value;
  c.rhs = detail::truncated_sum(rhs_term, 1, x, rhs_tail, tol).value;
  c.ok = c.lhs >= c.rhs - 1e-12;
  return c;
}

BoundsReport check_bounds(const MultiplicitySpec& spec, const std::vector<std::int64_t>& M_grid,
                          const LevelCoefficients& f, const ChiFunction& chi) {
  if (M_grid.empty()) throw std::invalid_argument("check_bounds needs a nonempty grid");
  if (f.sup_abs() > 1.0) throw std::invalid_argument("coefficients must satisfy |f_j| <= 1");
  BoundsReport report;
  report.upper_bounds_ok = true;
  report.r1_min = std::numeric_limits<double>::infinity();
  report.r1_max = 0.0;
  for (std::int64_t M : M_grid) {
    const ActionProfile a = action(spec, static_cast<double>(M));
    BoundsRow row;
    row.M = M;
    row.b = a.b;
    row.S_M = a.S_M;
    row.K = a.K;
    row.log_w_cumulative = weight_cumulative(spec, M).log_value;
    row.r1 = std::exp(row.log_w_cumulative - a.S_M) * std::pow(a.b, -spec.d() / 2.0 - 1.0);
    row.delta = deviation_radius(a.Nbar, spec.d(), chi).delta;

    const ReferenceProfile ref = ReferenceProfile::variable(spec, static_cast<double>(M));
    const double offset = ref.linear(f);
    double acc = kernels::kLogZero;
    if (M <= kEnumerationCap) {
      row.exhaustive = true;
      enumerate(spec, M, [&](const EnumeratedConfig& e) {
        if (f.apply(e.config) - offset > row.delta) acc = kernels::log_add(acc, e.log_weight);
      });
    } else if (f.kind() == LevelCoefficients::Kind::zero) {
      // The statistic is identically zero and delta > 0.
    } else if (f.kind() == LevelCoefficients::Kind::all_ones) {
      const WeightTable t = WeightTable::fixed(spec, M, M);
      const auto& g = t.first_fixed_row();
      for (std::int64_t m = 0; m <= M; ++m)
        for (std::int64_t n = 0; n <= g.cap(m); ++n)
          if (static_cast<double>(n) - offset > row.delta) acc = kernels::log_add(acc, g.at(m, n));
    } else {
      throw CapacityError("M = " + std::to_string(M) + " exceeds the enumeration cap for this statistic");
    }
    row.log_w_deviation = acc;
    for (double c : {0.0, a.b / 4.0, a.b / 2.0}) {
      row.c_values.push_back(c);
      const double bound = a.S_M - c * row.delta + c * c * a.K;
      row.log_bound.push_back(bound);
      if (acc > bound + 1e-12 * std::abs(bound)) row.upper_bound_ok = false;
    }
    report.upper_bounds_ok = report.upper_bounds_ok && row.upper_bound_ok;
    report.r1_min = std::min(report.r1_min, row.r1);
    report.r1_max = std::max(report.r1_max, row.r1);
    report.rows.push_back(std::move(row));
  }
  report.r1_ok = report.r1_min > 0.0 && report.r1_max / report.r1_min < 100.0;
  return report;
}

}  // namespace boselab
