#include <cmath>
#include <cstdint>
#include <vector>

#include "boselab/errors.hpp"
#include "boselab/exact_oracle.hpp"
#include "boselab/weight_table.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace boselab;
using doctest::Approx;

TEST_CASE("first row is the energy weight") {
  auto t = WeightTable::variable(testing::linear_spec(), 20);
  for (int m = 0; m <= 20; ++m)
    CHECK(std::exp(t.log_energy_weight(m)) == Approx(double(testing::kPlanePartitions[m])).epsilon(1e-12));
  auto p = WeightTable::variable(testing::ones_spec(), 20);
  for (int m = 0; m <= 20; ++m)
    CHECK(std::exp(p.log_energy_weight(m)) == Approx(double(testing::kPartitions[m])).epsilon(1e-12));
  CHECK(std::exp(t.log_cumulative_weight(3)) == Approx(11.0).epsilon(1e-13));
  CHECK(t.log_energy_weight(0) == 0.0);
}

TEST_CASE("stride does not change any answer") {
  const std::int64_t M = 120;
  for (auto spec : {testing::linear_spec(), testing::linear15_spec(), MultiplicitySpec::oscillator(3)}) {
    auto one = WeightTable::variable(spec, M, {.stride = 1});
    auto deflt = WeightTable::variable(spec, M);
    auto odd = WeightTable::variable(spec, M, {.stride = 7});
    CHECK(deflt.stride() == 11);
    for (std::int64_t level : {1, 2, 5, 11, 12, 50, 119, 120, 121})
      for (std::int64_t m = 0; m <= M; m += 3) {
        double a = one.log_level_weight(level, m);
        CHECK(deflt.log_level_weight(level, m) == a);
        CHECK(odd.log_level_weight(level, m) == a);
      }
  }
}

TEST_CASE("serial and parallel kernels build the same table") {
  auto spec = testing::linear15_spec();
  auto a = WeightTable::variable(spec, 200, {.kernel = KernelVariant::serial_reference});
  auto b = WeightTable::variable(spec, 200, {.kernel = KernelVariant::parallel});
  for (int m = 0; m <= 200; ++m) CHECK(a.log_energy_weight(m) == Approx(b.log_energy_weight(m)).epsilon(1e-13));
}

TEST_CASE("table against exact integer arithmetic") {
  auto spec = MultiplicitySpec::oscillator(3);
  auto exact = exact_energy_weights(spec, 150);
  auto t = WeightTable::variable(spec, 150);
  for (int m = 0; m <= 150; ++m) {
    double expect = make_weight(exact[m]).log_value;
    CHECK(t.log_energy_weight(m) == Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("fixed table") {
  auto spec = testing::linear_spec(1);
  auto t = WeightTable::fixed(spec, 10, 5);
  CHECK(std::exp(t.log_fixed_weight(2, 1)) == Approx(4.0).epsilon(1e-13));
  CHECK(std::exp(t.log_fixed_weight(10, 5)) == Approx(1032.0).epsilon(1e-12));
  CHECK(std::exp(t.log_fixed_weight(6, 3)) == Approx(83.0).epsilon(1e-12));
  CHECK(std::exp(t.log_fixed_weight(8, 4)) == Approx(306.0).epsilon(1e-12));
  CHECK(t.log_fixed_weight(7, 0) == 0.0);

  auto q2 = WeightTable::fixed(MultiplicitySpec::power_law(2, 1, 2), 0, 2);
  CHECK(std::exp(q2.log_fixed_weight(0, 2)) == Approx(3.0).epsilon(1e-14));
}

TEST_CASE("fixed table marginals reproduce the variable table") {
  const std::int64_t M = 12;
  auto spec = testing::linear15_spec();
  auto fixed = WeightTable::fixed(spec, M, M);
  auto var = WeightTable::variable(spec, M);
  for (std::int64_t m = 0; m <= M; ++m) {
    double acc = kernels::kLogZero;
    for (std::int64_t n = 0; n <= M; ++n) acc = kernels::log_add(acc, fixed.log_level_weight(1, m, n));
    CHECK(acc == Approx(var.log_energy_weight(m)).epsilon(1e-13));
  }
}

TEST_CASE("fixed table stride invariance") {
  auto spec = MultiplicitySpec::power_law(3, 1, 1);
  auto a = WeightTable::fixed(spec, 90, 30, {.stride = 1});
  auto b = WeightTable::fixed(spec, 90, 30);
  for (std::int64_t level : {1, 3, 10, 11, 45, 91})
    for (std::int64_t m = 0; m <= 90; m += 7)
      for (std::int64_t n = 0; n <= 30; n += 4) CHECK(a.log_level_weight(level, m, n) == b.log_level_weight(level, m, n));
  for (std::int64_t m = 0; m <= 90; m += 9) CHECK(a.log_fixed_weight(m, 30) == b.log_fixed_weight(m, 30));
}

TEST_CASE("sweeps visit levels in ascending order with the row above") {
  auto spec = testing::linear_spec();
  auto t = WeightTable::variable(spec, 50, {.stride = 6});
  std::int64_t expect = 1;
  t.sweep_variable([&](std::int64_t level, std::span<const double> next) {
    CHECK(level == expect++);
    for (std::int64_t m = 0; m <= 50; m += 5) CHECK(next[m] == t.log_level_weight(level + 1, m));
    return true;
  });
  CHECK(expect == 51);
  int visits = 0;
  t.sweep_variable([&](std::int64_t, std::span<const double>) { return ++visits < 3; });
  CHECK(visits == 3);

  auto f = WeightTable::fixed(MultiplicitySpec::power_law(2, 1, 1), 30, 10, {.stride = 4});
  expect = 1;
  f.sweep_fixed([&](std::int64_t level, const kernels::FixedRow& next) {
    CHECK(level == expect++);
    CHECK(next.level() == level + 1);
    for (std::int64_t m = 0; m <= 30; m += 3) CHECK(next.at(m, 2) == f.log_level_weight(level + 1, m, 2));
    return true;
  });
  CHECK(expect == 31);
}

TEST_CASE("memory budget") {
  auto spec = MultiplicitySpec::power_law(3, 1);
  std::size_t need = WeightTable::predicted_bytes(TableMode::variable_n, 10000, 0, 100);
  CHECK(need > 10000 * 100 * 8);
  CHECK_THROWS_AS(WeightTable::variable(spec, 10000, {.memory_budget = need / 2}), CapacityError);
  bool thrown = false;
  try {
    WeightTable::variable(spec, 10000, {.stride = 5, .memory_budget = need});
  } catch (const CapacityError& e) {
    thrown = true;
    CHECK(e.suggested_stride() > 0);
    CHECK(WeightTable::predicted_bytes(TableMode::variable_n, 10000, 0, e.suggested_stride()) <= need);
  }
  CHECK(thrown);
  CHECK(WeightTable::default_stride(10000) == 100);
  CHECK(WeightTable::default_stride(10001) == 101);
}

TEST_CASE("queries on the wrong mode or range") {
  auto t = WeightTable::variable(testing::linear_spec(), 5);
  CHECK_THROWS_AS(t.log_fixed_weight(3, 1), std::logic_error);
  CHECK_THROWS_AS(t.log_energy_weight(6), std::out_of_range);
  CHECK_THROWS_AS(t.log_level_weight(7, 0), std::out_of_range);
  auto m0 = WeightTable::variable(testing::linear_spec(), 0);
  CHECK(m0.log_energy_weight(0) == 0.0);
}
