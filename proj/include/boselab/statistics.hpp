#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boselab/configuration.hpp"
#include "boselab/multiplicity.hpp"

namespace boselab {

/// Coefficients f_j of a linear statistic sum_j f_j (N_j - Nbar_j).
///
/// Level 0 only matters for fixed-particle-number configurations; every
/// built-in choice except custom() leaves f_0 = 0.
class LevelCoefficients {
 public:
  enum class Kind { zero, all_ones, tail_from, alternating, custom };

  static LevelCoefficients zero();
  static LevelCoefficients all_ones();
  /// f_j = 1 for j >= l, else 0.
  static LevelCoefficients tail_from(std::int64_t l);
  /// f_j = (-1)^j for j >= 1.
  static LevelCoefficients alternating();
  /// f_j = values[j] (index 0 is level 0), zero beyond the vector.
  static LevelCoefficients custom(std::vector<double> values);
  /// "ones", "zero", "alt", "tail:<l>" or "custom:[v0,v1,...]".
  static LevelCoefficients parse(const std::string& text);

  double operator()(std::int64_t j) const noexcept;
  double sup_abs() const noexcept;
  Kind kind() const noexcept { return kind_; }
  std::int64_t l() const noexcept { return l_; }
  std::string to_string() const;

  /// sum_j f_j N_j over a configuration.
  double apply(const Configuration& c) const;

 private:
  Kind kind_ = Kind::zero;
  std::int64_t l_ = 1;
  std::vector<double> values_;
};

/// The deterministic profile Nbar_j that a statistic is centred on.
///
/// variable        Nbar_j = q_j / (e^{bj} - 1), b from the energy equation
/// fixed_normal    Nbar_j = q_j / (e^{beta j + mu} - 1), j >= 0
/// fixed_condensed Nbar_j as in variable for j >= 1, Nbar_0 = N - Nbar(M)
class ReferenceProfile {
 public:
  enum class Kind { variable, fixed_normal, fixed_condensed };

  static ReferenceProfile variable(const MultiplicitySpec& spec, double M);
  /// Picks the normal or condensed profile from the regime of (M, N).
  static ReferenceProfile fixed(const MultiplicitySpec& spec, double M, double N);

  Kind kind() const noexcept { return kind_; }
  double occupation(std::int64_t j) const;
  /// sum_j f_j Nbar_j, summed until the terms fall below e^{-60} relative.
  double linear(const LevelCoefficients& f) const;

  double b() const noexcept { return b_; }
  double mu() const noexcept { return mu_; }
  /// sum_{j>=1} Nbar_j
  double Nbar() const noexcept { return Nbar_; }
  double N0bar() const noexcept { return N0bar_; }
  std::int64_t j_cut() const noexcept { return j_cut_; }

 private:
  ReferenceProfile(const MultiplicitySpec& spec) : spec_(spec) {}
  MultiplicitySpec spec_;
  Kind kind_ = Kind::variable;
  double b_ = 0.0;   // b, or beta in the normal fixed regime
  double mu_ = 0.0;
  double Nbar_ = 0.0;
  double N0bar_ = 0.0;
  std::int64_t j_cut_ = 0;
};

}  // namespace boselab
