#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "boselab/equilibrium.hpp"
#include "boselab/errors.hpp"
#include "boselab/exact_oracle.hpp"
#include "boselab/rng.hpp"
#include "boselab/sampler.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace boselab;
using doctest::Approx;

namespace {

// Pearson chi-square p-value of the empirical configuration counts against
// the enumeration law.
double chi_square_pvalue(const SampleBatch& batch, const std::vector<EnumeratedConfig>& law) {
  std::map<Configuration, double> freq;
  for (const auto& c : batch.configurations) freq[c] += 1;
  double total = 0;
  for (const auto& e : law) total += e.weight;
  const double n = static_cast<double>(batch.configurations.size());
  double stat = 0;
  for (const auto& e : law) {
    const double expect = n * e.weight / total;
    const double o = freq.count(e.config) ? freq[e.config] : 0.0;
    stat += (o - expect) * (o - expect) / expect;
    freq.erase(e.config);
  }
  CHECK(freq.empty());  // nothing outside the support
  boost::math::chi_squared dist(static_cast<double>(law.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("stream generator") {
  StreamRng a(5, 9), b(5, 9), c(5, 10);
  for (int i = 0; i < 100; ++i) {
    auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  StreamRng u(1, 1);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    sum += v;
  }
  CHECK(sum / 100000 == Approx(0.5).epsilon(0.01));
  CHECK(u.open_uniform() > 0.0);
}

TEST_CASE("variable sampler: trivial cases and reproducibility") {
  auto spec = testing::linear_spec();
  auto table = WeightTable::variable(spec, 30);
  auto empty = sample_variable(table, 0, 3, 50);
  for (const auto& c : empty.configurations) CHECK(c.max_level() == -1);

  auto a = sample_variable(table, 30, 77, 200);
  auto b = sample_variable(table, 30, 77, 200);
  auto prefix = sample_variable(table, 30, 77, 20);
  auto other = sample_variable(table, 30, 78, 200);
  CHECK(a.configurations == b.configurations);
  CHECK(std::equal(prefix.configurations.begin(), prefix.configurations.end(), a.configurations.begin()));
  CHECK(a.configurations != other.configurations);
  CHECK(a.proposals == 200);
  CHECK(a.scheme == SamplingScheme::exact_sequential);
  for (double w : a.weights) CHECK(w == 1.0);
  for (const auto& c : a.configurations) CHECK(c.energy() <= 30);
  CHECK_THROWS_AS(sample_variable(table, 31, 1, 1), std::out_of_range);
}

TEST_CASE("variable sampler matches the enumeration law") {
  auto spec = testing::linear_spec();
  auto table = WeightTable::variable(spec, 8, {.stride = 2});
  auto batch = sample_variable(table, 6, 2024, 100000);
  CHECK(chi_square_pvalue(batch, enumerate(spec, 6)) > 1e-3);

  auto real = testing::linear15_spec();
  auto rtable = WeightTable::variable(real, 7);
  CHECK(chi_square_pvalue(sample_variable(rtable, 7, 99, 100000), enumerate(real, 7)) > 1e-3);
}

TEST_CASE("energy marginal") {
  auto spec = testing::linear_spec();
  const std::int64_t M = 12;
  auto table = WeightTable::variable(spec, M);
  const std::int64_t n = 50000;
  auto batch = sample_variable(table, M, 11, n);
  double top = 0;
  for (const auto& c : batch.configurations) top += c.energy() == M;
  double p = weight_exact_energy(spec, M).value() / weight_cumulative(spec, M).value();
  double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(top / n - p) <= 3 * se);
}

TEST_CASE("fixed sampler") {
  auto spec = testing::linear_spec(1);
  auto table = WeightTable::fixed(spec, 10, 5);
  auto zero = sample_fixed(table, 7, 0, 3, 20);
  for (const auto& c : zero.configurations) CHECK(c.particles() == 0);

  const std::int64_t n = 100000;
  auto batch = sample_fixed(table, 2, 1, 5, n);
  std::map<Configuration, double> freq;
  for (const auto& c : batch.configurations) {
    CHECK(c.particles() == 1);
    freq[c] += 1.0 / n;
  }
  const std::pair<Configuration, double> expect[] = {
      {Configuration{{0, 1}}, 0.25}, {Configuration{{1, 1}}, 0.25}, {Configuration{{2, 1}}, 0.5}};
  CHECK(freq.size() == 3);
  for (const auto& [c, p] : expect) {
    double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(freq[c] - p) <= 3 * se);
  }

  auto big = sample_fixed(table, 10, 5, 6, 2000);
  for (const auto& c : big.configurations) {
    CHECK(c.particles() == 5);
    CHECK(c.energy() <= 10);
  }
  CHECK(chi_square_pvalue(sample_fixed(table, 8, 4, 8, 100000), enumerate(spec, 8, {.N = 4})) > 1e-3);
  CHECK_THROWS_AS(sample_fixed(table, 10, 6, 1, 1), std::out_of_range);
}

TEST_CASE("Boltzmann proposals have the Bose means") {
  auto spec = testing::linear_spec();
  double b = 0.5;
  const std::int64_t n = 100000;
  auto batch = sample_boltzmann(spec, b, 1000000, 3, n);
  CHECK(batch.configurations.size() == static_cast<std::size_t>(n));
  // M is far above every proposal energy, so nothing is rejected and the
  // unweighted configurations follow the proposal law.
  for (std::int64_t j : {1, 2, 5, 10}) {
    double s1 = 0, s2 = 0;
    for (const auto& c : batch.configurations) {
      s1 += c.count(j);
      s2 += double(c.count(j)) * c.count(j);
    }
    double mean = s1 / n, se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - occupation(spec, b, j)) <= 4 * se);
  }
}

TEST_CASE("Boltzmann importance estimates are consistent") {
  auto spec = testing::linear_spec();
  const std::int64_t M = 20;
  auto exact = exact_linear_statistic(spec, M, LevelCoefficients::all_ones(), ReferenceProfile::variable(spec, M));
  auto particles = [](const Configuration& c) { return double(c.particles()); };
  double b = solve_b(spec, M).b;

  auto batch = sample_boltzmann(spec, b, M, 101, 100000);
  CHECK(batch.scheme == SamplingScheme::boltzmann_importance);
  CHECK(batch.proposals == 100000);
  CHECK(batch.configurations.size() < 100000);
  auto m = weighted_mean(batch, particles);
  CHECK(std::abs(m.mean - exact.mean) <= 3 * m.std_error);

  auto slow = sample_boltzmann(spec, 2 * b, M, 18, 100000);
  auto ms = weighted_mean(slow, particles);
  CHECK(std::abs(ms.mean - exact.mean) <= 5 * ms.std_error);

  auto again = sample_boltzmann(spec, b, M, 101, 100000);
  CHECK(again.configurations == batch.configurations);
  CHECK(again.weights == batch.weights);
}

TEST_CASE("Boltzmann efficiency guard") {
  auto spec = MultiplicitySpec::power_law(3, 1);
  // b far below the root for M = 50: almost every proposal overshoots.
  CHECK_THROWS_AS(sample_boltzmann(spec, 0.01, 50, 1, 30000), EfficiencyError);
}

TEST_CASE("empirical tails") {
  auto spec = testing::linear_spec();
  const std::int64_t M = 8;
  auto ref = ReferenceProfile::variable(spec, M);
  auto table = WeightTable::variable(spec, M);
  const std::int64_t n = 100000;
  auto batch = sample_variable(table, M, 4, n);
  CHECK(empirical_tail(batch, LevelCoefficients::zero(), ref, 0).frequency == 0.0);
  CHECK(empirical_tail(batch, LevelCoefficients::all_ones(), ref, INFINITY).frequency == 0.0);

  for (auto f : {LevelCoefficients::all_ones(), LevelCoefficients::tail_from(2), LevelCoefficients::alternating()}) {
    auto exact = exact_linear_statistic(spec, M, f, ref);
    for (double delta : {0.5, 1.5, 3.0}) {
      auto est = empirical_tail(batch, f, ref, delta);
      double p = exact.abs_tail(delta);
      CAPTURE(f.to_string());
      CAPTURE(delta);
      CHECK(est.frequency >= 0.0);
      CHECK(est.frequency <= 1.0);
      CHECK(std::abs(est.frequency - p) <= 3 * std::max(est.std_error, 1.0 / n));
    }
  }
  CHECK_THROWS_AS(empirical_tail(batch, LevelCoefficients::custom({0, 2}), ref, 1), std::invalid_argument);
}
