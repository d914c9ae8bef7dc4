#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "boselab/configuration.hpp"
#include "boselab/multiplicity.hpp"
#include "boselab/statistics.hpp"
#include "boselab/weight_table.hpp"

namespace boselab {

enum class SamplingScheme { exact_sequential, boltzmann_importance };

struct SampleBatch {
  std::vector<Configuration> configurations;
  /// 1 for exact draws. Importance weights are e^{b (energy - E)} with E the
  /// largest accepted energy, i.e. e^{b energy} rescaled so the largest is 1.
  std::vector<double> weights;
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::exact_sequential;
  /// Proposals drawn; equals configurations.size() for exact sampling.
  std::int64_t proposals = 0;
};

/// Exact draws from P_M, M <= table.M_max(): energy first, then N_1, N_2, ...
/// from the suffix-weight conditionals.
SampleBatch sample_variable(const WeightTable& table, std::int64_t M, std::uint64_t seed, std::int64_t count);

/// Exact draws from P_{M,N} using a fixed_n table with N_max >= N. Level 0
/// receives N minus the particles placed on levels >= 1.
SampleBatch sample_fixed(const WeightTable& table, std::int64_t M, std::int64_t N, std::uint64_t seed,
                         std::int64_t count);

struct BoltzmannOptions {
  double min_acceptance = 1e-4;
  std::int64_t calibration = 20000;  // leading proposals used for the acceptance check
};

/// Independent negative-binomial proposals P(N_j = n) ~ C(n+q_j-1, n)
/// e^{-bjn}; proposals with energy > M are rejected. `count` is the number
/// of proposals. Throws EfficiencyError when calibration acceptance is below
/// opts.min_acceptance.
SampleBatch sample_boltzmann(const MultiplicitySpec& spec, double b, std::int64_t M, std::uint64_t seed,
                             std::int64_t count, const BoltzmannOptions& opts = {});

struct TailEstimate {
  double frequency = 0.0;
  double std_error = 0.0;
};

/// Weighted frequency of |sum_j f_j (N_j - Nbar_j)| > delta with a delta-method
/// standard error. Requires |f_j| <= 1.
TailEstimate empirical_tail(const SampleBatch& batch, const LevelCoefficients& f, const ReferenceProfile& reference,
                            double delta);

/// Self-normalized weighted mean of a per-configuration value, with its
/// standard error.
struct WeightedMean {
  double mean = 0.0;
  double std_error = 0.0;
};
WeightedMean weighted_mean(const SampleBatch& batch, const std::function<double(const Configuration&)>& value);

}  // namespace boselab
