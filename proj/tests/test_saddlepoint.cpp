#include <cmath>
#include <complex>
#include <numbers>

#include "boselab/errors.hpp"
#include "boselab/exact_oracle.hpp"
#include "boselab/saddlepoint.hpp"
#include "boselab/special_sums.hpp"
#include "boselab/weight_table.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace boselab;
using doctest::Approx;

TEST_CASE("action profile") {
  auto spec = testing::linear_spec();
  for (int M = 10; M <= 60; M += 5) {
    auto a = action(spec, M);
    CHECK(a.S2 < 0);
    CHECK(a.K > 0);
    CHECK(a.S3_bound > 0);
    CHECK(weight_exact_energy(spec, M).log_value <= a.S_M);
  }
  auto a = action(MultiplicitySpec::power_law(3, 1), 1e4);
  auto eq = solve_b(MultiplicitySpec::power_law(3, 1), 1e4);
  CHECK(a.b == eq.b);
  CHECK(a.Nbar == eq.Nbar);
}

TEST_CASE("phase function") {
  auto spec = testing::linear_spec();
  const double M = 40;
  const double b = solve_b(spec, M).b;
  CHECK(phase(spec, M, b, 0.0) == std::complex<double>(0.0, 0.0));
  for (double phi : {1e-3, 0.1, 0.7, 2.0, 3.1}) {
    auto s = phase(spec, M, b, phi), t = phase(spec, M, b, -phi);
    CHECK(t.real() == Approx(s.real()).epsilon(1e-13));
    CHECK(t.imag() == Approx(-s.imag()).epsilon(1e-13));
    CHECK(s.real() <= 0.0);
  }
  CHECK(phase_levels(40, b) <= 40);
  CHECK(phase_levels(1e6, 0.125) == 481);
  // Central difference of Re S agrees with S''(0).
  for (auto sp : {spec, MultiplicitySpec::power_law(3, 1)}) {
    for (double m : {100.0, 1e4}) {
      auto a = action(sp, m);
      CHECK(phase_curvature_fd(sp, m, a.b) == Approx(a.S2).epsilon(1e-4));
    }
  }
}

TEST_CASE("contour integral reproduces the exact weights") {
  auto spec = testing::linear_spec();
  for (int M : {10, 20, 40}) {
    auto c = contour_weight(spec, M);
    double exact = weight_exact_energy(spec, M).log_value;
    CAPTURE(M);
    CHECK(std::abs(std::expm1(c.log_weight - exact)) <= 1e-6);
    CHECK(c.integral > 0);
    CHECK(c.imag_rel <= 1e-9);
    double zones = c.zone_integral[0] + c.zone_integral[1] + c.zone_integral[2];
    CHECK(zones == Approx(c.integral).epsilon(1e-12));
    CHECK(c.zone_bounds[2] == Approx(std::numbers::pi));
    CHECK(c.zone_bounds[0] <= c.zone_bounds[1]);
  }
  auto real = testing::linear15_spec();
  auto c = contour_weight(real, 30);
  double dp = WeightTable::variable(real, 30).log_energy_weight(30);
  CHECK(std::abs(std::expm1(c.log_weight - dp)) <= 1e-6);
}

TEST_CASE("the central zone carries the integral at large M") {
  auto spec = MultiplicitySpec::power_law(3, 1);
  auto c = contour_weight(spec, 20000);
  CHECK(c.zone_integral[0] >= 0.99 * c.integral);
}

TEST_CASE("inequality between the real part of Phi at two points") {
  auto spec = testing::linear_spec();
  auto same = verify_f21(spec, 0.3, 0);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  CHECK(same.ok);
  auto full = verify_f21(spec, 0.3, 2 * std::numbers::pi);
  CHECK(full.ok);
  CHECK(full.lhs >= full.rhs);
  for (double x : {0.1, 0.3, 1.0})
    for (double y : {0.01, 0.5, 1.0, 3.0}) {
      auto r = verify_f21(spec, x, y);
      CAPTURE(x);
      CAPTURE(y);
      CHECK(r.ok);
      CHECK(r.lhs >= r.rhs);
      CHECK(r.rhs >= 0);
    }
  CHECK_THROWS_AS(verify_f21(spec, 0, 1), std::invalid_argument);
}

TEST_CASE("curvature bounds scale with b") {
  for (double d : {1.5, 2.0, 3.0}) {
    auto spec = MultiplicitySpec::power_law(d, 1);
    double lo2 = 1e300, hi2 = 0, lo3 = 1e300, hi3 = 0;
    for (double b : {0.1, 0.05, 0.02, 0.01}) {
      auto c = curvature_sums(spec, b);
      double r2 = c.s2 * std::pow(b, d + 2), r3 = c.s3 * std::pow(b, d + 3);
      lo2 = std::min(lo2, r2), hi2 = std::max(hi2, r2);
      lo3 = std::min(lo3, r3), hi3 = std::max(hi3, r3);
    }
    CHECK(hi2 / lo2 < 10);
    CHECK(hi3 / lo3 < 10);
  }
}

TEST_CASE("weight bounds") {
  auto spec = testing::linear_spec();
  auto r = check_bounds(spec, {10, 20, 40, 80});
  REQUIRE(r.rows.size() == 4);
  CHECK(r.r1_min > 0);
  CHECK(r.r1_ok);
  CHECK(r.upper_bounds_ok);
  CHECK(r.rows[0].exhaustive);
  CHECK_FALSE(r.rows[3].exhaustive);

  auto small = check_bounds(spec, {12});
  const auto& row = small.rows[0];
  REQUIRE(row.c_values.size() == 3);
  CHECK(row.c_values[0] == 0.0);
  CHECK(row.c_values[2] == Approx(row.b / 2));
  for (double lb : row.log_bound) CHECK(row.log_w_deviation <= lb);
  CHECK(row.log_bound[0] == Approx(row.S_M));

  auto zero = check_bounds(spec, {12, 40}, LevelCoefficients::zero());
  CHECK(zero.upper_bounds_ok);
  CHECK(std::isinf(zero.rows[0].log_w_deviation));

  auto alt = check_bounds(spec, {12}, LevelCoefficients::alternating());
  CHECK(alt.upper_bounds_ok);
  CHECK_THROWS_AS(check_bounds(spec, {40}, LevelCoefficients::alternating()), CapacityError);
}
