// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "boselab/equilibrium.hpp"
#include "boselab/exact_oracle.hpp"
#include "boselab/experiments.hpp"
#include "boselab/saddlepoint.hpp"
#include "boselab/sampler.hpp"
#include "boselab/special_sums.hpp"
#include "boselab/weight_table.hpp"
#include "test_support.hpp"

using namespace boselab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

template <class T>
std::string fmt(const T& v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double total_variation(const SampleBatch& batch, const std::vector<EnumeratedConfig>& law) {
  std::map<Configuration, double> p;
  double total = 0;
  for (const auto& e : law) total += e.weight;
  for (const auto& e : law) p[e.config] -= e.weight / total;
  const double n = static_cast<double>(batch.configurations.size());
  for (const auto& c : batch.configurations) p[c] += 1.0 / n;
  double tv = 0;
  for (const auto& [c, d] : p) tv += std::abs(d);
  return tv / 2;
}

Outcome oracle_triple() {
  struct Named {
    const char* name;
    MultiplicitySpec spec;
  };
  const Named specs[] = {{"q_j=1", testing::ones_spec()},
                         {"q_j=j", testing::linear_spec()},
                         {"oscillator d=3", MultiplicitySpec::oscillator(3)},
                         {"q_j=1.5j", testing::linear15_spec()}};
  const std::int64_t M_max = 20;
  double worst_rel = 0;
  for (const auto& [name, spec] : specs) {
    if (spec.is_integral()) {
      const auto coeffs = gen_function_coeffs_exact(spec, M_max);
      for (std::int64_t M = 0; M <= M_max; ++M) {
        BigInt enumerated = 0;
        enumerate(spec, M, [&](const EnumeratedConfig& e) {
          if (e.config.energy() == M) enumerated += e.exact_weight;
        });
        const auto w = weight_exact_energy(spec, M);
        if (!w.exact || *w.exact != coeffs[M] || enumerated != coeffs[M])
          return {false, std::string(name) + " disagrees at M=" + std::to_string(M)};
      }
    } else {
      const auto coeffs = gen_function_coeffs(spec, M_max);
      for (std::int64_t M = 0; M <= M_max; ++M) {
        double enumerated = 0;
        enumerate(spec, M, [&](const EnumeratedConfig& e) {
          if (e.config.energy() == M) enumerated += e.weight;
        });
        const double w = weight_exact_energy(spec, M).value();
        worst_rel = std::max({worst_rel, std::abs(w - coeffs[M]) / coeffs[M],
                              std::abs(enumerated - coeffs[M]) / coeffs[M]});
      }
    }
  }
  return {worst_rel <= 1e-12, "integer specs exact; q_j=1.5j worst rel " + fmt(worst_rel)};
}

Outcome partition_numbers() {
  const auto spec = testing::ones_spec();
  const auto coeffs = gen_function_coeffs_exact(spec, 10);
  for (std::int64_t M = 0; M <= 10; ++M) {
    const BigInt expect = testing::kPartitions[M];
    std::int64_t configs = 0;
    enumerate(spec, M, [&](const EnumeratedConfig& e) { configs += e.config.energy() == M; });
    if (coeffs[M] != expect || *weight_exact_energy(spec, M).exact != expect || configs != testing::kPartitions[M])
      return {false, "mismatch at M=" + std::to_string(M)};
  }
  return {true, "p(0..10) = 1,1,2,3,5,7,11,15,22,30,42"};
}

Outcome saddle_exactness() {
  const auto spec = testing::linear_spec();
  double worst = 0;
  for (std::int64_t M : {10, 20, 40, 80}) {
    const auto c = contour_weight(spec, M);
    const double exact = weight_exact_energy(spec, M).log_value;
    worst = std::max(worst, std::abs(std::expm1(c.log_weight - exact)));
  }
  return {worst <= 1e-6, "max rel err " + fmt(worst)};
}

Outcome sampler_exactness() {
  const std::int64_t n = 100000;
  const auto spec = testing::linear_spec(1);
  const auto var = WeightTable::variable(spec, 6);
  const double tv_var = total_variation(sample_variable(var, 6, 20240601, n), enumerate(spec, 6));
  const auto fixed = WeightTable::fixed(spec, 6, 3);
  const double tv_fixed = total_variation(sample_fixed(fixed, 6, 3, 20240602, n), enumerate(spec, 6, {.N = 3}));
  return {tv_var <= 0.01 && tv_fixed <= 0.01, "TV(Omega_6) " + fmt(tv_var) + ", TV(Omega_6,3) " + fmt(tv_fixed)};
}

Outcome equilibrium_asymptotics() {
  const auto spec = MultiplicitySpec::power_law(3, 1);
  const double d = 3;
  double prev_e = 1e300, prev_n = 1e300;
  bool monotone = true;
  double re = 0, rn = 0;
  for (double M : {1e5, 1e6, 1e7, 1e8}) {
    const auto s = solve_b(spec, M);
    re = std::pow(s.b, d + 1) * M / (spec.Q() * gamma_zeta(d + 1));
    rn = std::pow(s.b, d) * s.Nbar / (spec.Q() * gamma_zeta(d));
    monotone = monotone && std::abs(re - 1) < prev_e && std::abs(rn - 1) < prev_n;
    prev_e = std::abs(re - 1);
    prev_n = std::abs(rn - 1);
  }
  const bool in_band = re >= 0.99 && re <= 1.01 && rn >= 0.99 && rn <= 1.01;
  return {in_band && monotone, "energy ratio " + fmt(re) + ", occupation ratio " + fmt(rn) +
                                   (monotone ? ", deviations shrink" : ", deviations not monotone")};
}

Outcome concentration() {
  const auto r = run_deviation(MultiplicitySpec::power_law(3, 1), 10000, LevelCoefficients::all_ones(), 1000, 6);
  return {r.backend == "exact_dp" && r.empirical_tail <= 0.05,
          "tail " + fmt(r.empirical_tail) + " +- " + fmt(r.std_error) + ", Delta " + fmt(r.delta) + ", Nbar " +
              fmt(r.Nbar) + ", backend " + r.backend};
}

Outcome condensation() {
  const auto spec = MultiplicitySpec::power_law(3, 1, 1);
  const std::int64_t M = 2000;
  const auto N = static_cast<std::int64_t>(std::ceil(2 * threshold(spec, M)));
  const auto r = run_condensation(spec, M, N, 500, 7);
  const double gap = r.extra("mean_gap");
  return {r.empirical_tail <= 0.05 && gap <= r.delta,
          "N " + std::to_string(N) + ", tail " + fmt(r.empirical_tail) + ", |mean N_0 - (N - Nbar)| " + fmt(gap) +
              ", Delta " + fmt(r.delta)};
}

Outcome coloring() {
  const auto r = run_coloring(MultiplicitySpec::power_law(3, 1), 1e8, {2, 4, 16});
  return {r.pass && r.extra("max_rel_dev") <= 0.02,
          "ratios " + fmt(r.extra("ratio_K2")) + ", " + fmt(r.extra("ratio_K4")) + ", " + fmt(r.extra("ratio_K16")) +
              "; max rel dev " + fmt(r.extra("max_rel_dev"))};
}

Outcome inequality_and_curvature() {
  const auto spec = testing::linear_spec();
  bool f21 = true;
  for (double x : {0.1, 0.3, 1.0})
    for (double y : {0.0, 0.01, 0.5, 1.0, 3.0, 2 * std::numbers::pi}) f21 = f21 && verify_f21(spec, x, y).ok;
  double worst2 = 0, worst3 = 0;
  for (double d : {1.5, 2.0, 3.0}) {
    const auto p = MultiplicitySpec::power_law(d, 1);
    double lo2 = 1e300, hi2 = 0, lo3 = 1e300, hi3 = 0;
    for (double b : {0.1, 0.05, 0.02, 0.01}) {
      const auto c = curvature_sums(p, b);
      const double r2 = c.s2 * std::pow(b, d + 2), r3 = c.s3 * std::pow(b, d + 3);
      lo2 = std::min(lo2, r2), hi2 = std::max(hi2, r2);
      lo3 = std::min(lo3, r3), hi3 = std::max(hi3, r3);
    }
    worst2 = std::max(worst2, hi2 / lo2);
    worst3 = std::max(worst3, hi3 / lo3);
  }
  return {f21 && worst2 < 10 && worst3 < 10, std::string(f21 ? "grid ok" : "grid violated") +
                                                 "; S2 ratio " + fmt(worst2) + ", S3 ratio " + fmt(worst3)};
}

Outcome weight_bounds() {
  const auto spec = testing::linear_spec();
  const auto r = check_bounds(spec, {10, 20, 40, 80});
  const auto small = check_bounds(spec, {12});
  const auto& row = small.rows.at(0);
  bool upper = row.exhaustive;
  for (std::size_t i = 1; i < row.c_values.size(); ++i) upper = upper && row.log_w_deviation <= row.log_bound[i];
  return {r.r1_ok && upper, "r1 in [" + fmt(r.r1_min) + ", " + fmt(r.r1_max) + "]; M=12 log w(Delta) " +
                                fmt(row.log_w_deviation) + " vs bounds " + fmt(row.log_bound[1]) + ", " +
                                fmt(row.log_bound[2])};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double limit_seconds;
    Criterion run;
  };
  const Entry criteria[] = {
      {"oracle triple agreement", 5, oracle_triple},
      {"partition numbers", 1, partition_numbers},
      {"saddle-point exactness", 30, saddle_exactness},
      {"sampler exactness", 30, sampler_exactness},
      {"equilibrium asymptotics", 5, equilibrium_asymptotics},
      {"concentration", 600, concentration},
      {"condensation", 600, condensation},
      {"coloring scaling", 10, coloring},
      {"inequality and curvature bounds", 30, inequality_and_curvature},
      {"weight bounds", 120, weight_bounds},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d %s  %s: %s [%.2f s of %.0f s]\n", index, pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs, c.limit_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
