#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "boselab/kernels.hpp"
#include "doctest.h"

using namespace boselab::kernels;
using doctest::Approx;

namespace {

std::vector<double> random_row(std::int64_t M, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::vector<double> row(M + 1);
  for (auto& v : row) v = u(gen);
  row[3] = kLogZero;  // structural zeros must stay exact
  return row;
}

// Straight-from-the-definition update in long double.
double reference_cell(const std::vector<double>& in, std::int64_t level, double q, std::int64_t m) {
  long double acc = 0, c = 1;
  for (std::int64_t n = 0; level * n <= m; ++n) {
    if (n > 0) c = c * (q + n - 1) / n;
    if (in[m - level * n] != kLogZero) acc += c * std::exp(static_cast<long double>(in[m - level * n]));
  }
  return acc > 0 ? static_cast<double>(std::log(acc)) : kLogZero;
}

}  // namespace

TEST_CASE("log binomial series") {
  auto c = log_binomial_series(3, 5);
  REQUIRE(c.size() == 6);
  const double expect[] = {1, 3, 6, 10, 15, 21};
  for (int n = 0; n <= 5; ++n) CHECK(std::exp(c[n]) == Approx(expect[n]).epsilon(1e-14));
  auto h = log_binomial_series(1.5, 2);
  CHECK(std::exp(h[2]) == Approx(1.875).epsilon(1e-14));
  CHECK_THROWS_AS(log_binomial_series(0, 3), std::invalid_argument);
}

TEST_CASE("log_add") {
  CHECK(log_add(kLogZero, kLogZero) == kLogZero);
  CHECK(log_add(kLogZero, 2.0) == 2.0);
  CHECK(log_add(std::log(2.0), std::log(3.0)) == Approx(std::log(5.0)).epsilon(1e-15));
}

TEST_CASE("variable update: serial, parallel and definition agree") {
  const std::int64_t M = 300;
  for (std::int64_t level : {1, 2, 7, 150, 300}) {
    for (double q : {1.0, 2.5, 40.0}) {
      auto in = random_row(M, static_cast<std::uint32_t>(level * 31 + q));
      auto logc = log_binomial_series(q, M / level);
      std::vector<double> a(M + 1), b(M + 1);
      level_update_serial(in, level, logc, a);
      level_update_parallel(in, level, logc, b);
      for (std::int64_t m = 0; m <= M; ++m) {
        CAPTURE(level);
        CAPTURE(m);
        double ref = reference_cell(in, level, q, m);
        if (ref == kLogZero) {
          CHECK(a[m] == kLogZero);
          CHECK(b[m] == kLogZero);
        } else {
          CHECK(a[m] == Approx(ref).epsilon(1e-13));
          CHECK(b[m] == Approx(a[m]).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("fixed rows") {
  FixedRow r(10, 4, 3);
  CHECK(r.cap(0) == 0);
  CHECK(r.cap(5) == 1);
  CHECK(r.cap(10) == 3);
  FixedRow s(40, 4, 3);
  CHECK(s.cap(40) == 4);
  auto base = FixedRow::base(10, 4, 11);
  CHECK(base.at(0, 0) == 0.0);
  CHECK(base.at(5, 0) == kLogZero);
  CHECK(base.at(0, 1) == kLogZero);
  CHECK(FixedRow::predicted_bytes(40, 4, 3) == s.bytes());
  CHECK_THROWS_AS(FixedRow(10, 4, 0), std::invalid_argument);
}

TEST_CASE("fixed update: serial and parallel agree and marginalize to the variable update") {
  const std::int64_t M = 60, N = 25;
  // Build G_1 by hand from the empty row at level M + 1, for q_j = j.
  FixedRow ser = FixedRow::base(M, N, M + 1), par = ser;
  std::vector<double> var(M + 1, kLogZero);
  var[0] = 0.0;
  for (std::int64_t level = M; level >= 1; --level) {
    auto logc = log_binomial_series(static_cast<double>(level), M / level);
    FixedRow a(M, N, level), b(M, N, level);
    level_update_fixed_serial(ser, level, logc, a);
    level_update_fixed_parallel(par, level, logc, b);
    for (std::int64_t m = 0; m <= M; ++m)
      for (std::int64_t n = 0; n <= a.cap(m); ++n) {
        double x = a.at(m, n), y = b.at(m, n);
        if (x == kLogZero) {
          CHECK(y == kLogZero);
        } else {
          CHECK(y == Approx(x).epsilon(1e-13));
        }
      }
    ser = std::move(a);
    par = std::move(b);
    std::vector<double> next(M + 1);
    level_update_serial(var, level, logc, next);
    var = std::move(next);
  }
  // With N >= every possible particle count at energy <= N the marginal is exact.
  for (std::int64_t m = 0; m <= N; ++m) {
    double acc = kLogZero;
    for (std::int64_t n = 0; n <= ser.cap(m); ++n) acc = log_add(acc, ser.at(m, n));
    CHECK(acc == Approx(var[m]).epsilon(1e-13));
  }
  const double plane[] = {1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500};
  for (int m = 0; m <= 10; ++m) CHECK(std::exp(var[m]) == Approx(plane[m]).epsilon(1e-12));
}
