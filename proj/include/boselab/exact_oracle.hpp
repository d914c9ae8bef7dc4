#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "boselab/configuration.hpp"
#include "boselab/multiplicity.hpp"
#include "boselab/statistics.hpp"

namespace boselab {

using BigInt = boost::multiprecision::cpp_int;

/// Largest M for which integral specs are counted with exact integers.
inline constexpr std::int64_t kExactEnergyLimit = 500;
/// Default bound on M for exhaustive enumeration.
inline constexpr std::int64_t kEnumerationCap = 25;

/// A weight, always in log scale, plus the exact integer when it was
/// computed with exact arithmetic.
struct Weight {
  double log_value = 0.0;
  std::optional<BigInt> exact;

  double value() const { return exact ? exact->convert_to<double>() : std::exp(log_value); }
};

/// Wraps an exact value, filling in its logarithm.
Weight make_weight(BigInt exact);

/// C(n + q - 1, n) for integer q >= 1.
BigInt binomial_exact(std::int64_t q, std::int64_t n);

/// prod_j C(N_j + q_j - 1, N_j) over levels j >= 1, times the level-0 factor
/// with q0 when `with_ground` is set.
double config_weight(const MultiplicitySpec& spec, const Configuration& c, bool with_ground = false);
double log_config_weight(const MultiplicitySpec& spec, const Configuration& c, bool with_ground = false);
BigInt config_weight_exact(const MultiplicitySpec& spec, const Configuration& c, bool with_ground = false);

/// w(Omega_m^0) for m = 0..M by exact integer dynamic programming.
std::vector<BigInt> exact_energy_weights(const MultiplicitySpec& spec, std::int64_t M);
/// W(Omega_{M,N}) by exact integer dynamic programming over (energy, particles).
BigInt exact_fixed_weight(const MultiplicitySpec& spec, std::int64_t M, std::int64_t N);

/// w(Omega_M^0). Exact for integral specs with M <= kExactEnergyLimit,
/// otherwise from the log-space table.
Weight weight_exact_energy(const MultiplicitySpec& spec, std::int64_t M);
/// w(Omega_M) = sum_{m<=M} w(Omega_m^0).
Weight weight_cumulative(const MultiplicitySpec& spec, std::int64_t M);
/// W(Omega_{M,N}), ground level weighted with q0. Exact for integral specs
/// when the (M, N) grid is small enough for big-integer arithmetic.
Weight weight_fixed(const MultiplicitySpec& spec, std::int64_t M, std::int64_t N);

/// Coefficients of prod_{j<=M_max} (1 - z^j)^{-q_j} up to z^{M_max} by
/// truncated power-series multiplication.
std::vector<double> gen_function_coeffs(const MultiplicitySpec& spec, std::int64_t M_max);
std::vector<BigInt> gen_function_coeffs_exact(const MultiplicitySpec& spec, std::int64_t M_max);

struct EnumeratedConfig {
  Configuration config;
  double weight = 0.0;
  double log_weight = 0.0;
  BigInt exact_weight;  // zero unless the spec is integral
};

struct EnumerationOptions {
  std::int64_t cap = kEnumerationCap;
  /// Set for Omega_{M,N}; unset for Omega_M.
  std::optional<std::int64_t> N;
};

/// Visits every element of Omega_M (or Omega_{M,N}) exactly once. Throws
/// CapacityError when M exceeds the cap.
void enumerate(const MultiplicitySpec& spec, std::int64_t M, const std::function<void(const EnumeratedConfig&)>& visit,
               const EnumerationOptions& opts = {});
std::vector<EnumeratedConfig> enumerate(const MultiplicitySpec& spec, std::int64_t M,
                                        const EnumerationOptions& opts = {});

/// Exact law of X = sum_j f_j N_j under P_M or P_{M,N}, centred by the
/// reference offset sum_j f_j Nbar_j.
struct LinearStatistic {
  double mean = 0.0;    // E X
  double offset = 0.0;  // sum_j f_j Nbar_j
  std::vector<std::pair<double, double>> distribution;  // (value of X, probability), sorted by value

  /// P(X - offset > delta)
  double tail(double delta) const;
  /// P(|X - offset| > delta)
  double abs_tail(double delta) const;
};

LinearStatistic exact_linear_statistic(const MultiplicitySpec& spec, std::int64_t M, const LevelCoefficients& f,
                                       const ReferenceProfile& reference, const EnumerationOptions& opts = {});

}  // namespace boselab
