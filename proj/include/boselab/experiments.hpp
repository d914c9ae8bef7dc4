#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boselab/equilibrium.hpp"
#include "boselab/multiplicity.hpp"
#include "boselab/statistics.hpp"

namespace boselab {

struct ExperimentOptions {
  std::size_t memory_budget = std::size_t{2} << 30;
  /// Pass bar for the deviation and condensation frequencies.
  double bar = 0.05;
  /// Sup-discrepancy level counted as a deviation in run_profile.
  double epsilon = 0.1;
  /// Relative tolerance for the coloring ratios.
  double coloring_tol = 0.02;
};

struct ExperimentReport {
  std::string kind;
  std::string spec;
  double M = 0.0;
  std::optional<double> N;
  std::int64_t count = 0;
  std::uint64_t seed = 0;
  std::string chi;
  double delta = 0.0;
  std::string statistic;
  std::string backend;  // "exact_dp", "boltzmann" or "numeric"
  double empirical_tail = 0.0;
  double std_error = 0.0;
  double b = 0.0;
  double Nbar = 0.0;
  double threshold = 0.0;
  std::string regime;
  double wall_seconds = 0.0;
  bool pass = true;

  /// Extra named results (means, quantiles, medians).
  std::vector<std::pair<std::string, double>> extras;
  /// Per-row table for CSV export.
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;

  double extra(const std::string& name) const;
  std::string to_json() const;
  std::string to_csv() const;
};

/// Frequency of |sum_j f_j (N_j - Nbar_j)| > Delta under P_M. Uses the exact
/// sampler when the table fits the memory budget, else importance sampling.
ExperimentReport run_deviation(const MultiplicitySpec& spec, std::int64_t M, const LevelCoefficients& f,
                               std::int64_t count, std::uint64_t seed, const ChiFunction& chi = {},
                               const ExperimentOptions& opts = {});

/// Frequency of |N_0 - (N - Nbar)| > Delta under P_{M,N}. Throws RegimeError
/// unless N exceeds the threshold.
ExperimentReport run_condensation(const MultiplicitySpec& spec, std::int64_t M, std::int64_t N, std::int64_t count,
                                  std::uint64_t seed, const ChiFunction& chi = {},
                                  const ExperimentOptions& opts = {});

/// coloring_threshold(K) / threshold against K^{1/(d+1)}.
ExperimentReport run_coloring(const MultiplicitySpec& spec, double M, const std::vector<std::int64_t>& K_list,
                              const ExperimentOptions& opts = {});

/// Sup over x in [x1, x2] of |Q^{-1} b^d sum_{j > x/b} N_j - bose_integral(d, x)|
/// per sample; the reported tail is the frequency of sup > opts.epsilon.
ExperimentReport run_profile(const MultiplicitySpec& spec, std::int64_t M, double x1, double x2, int grid_points,
                             std::int64_t count, std::uint64_t seed, const ExperimentOptions& opts = {});

}  // namespace boselab
