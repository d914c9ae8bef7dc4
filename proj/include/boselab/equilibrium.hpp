#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "boselab/multiplicity.hpp"

namespace boselab {

/// Root b of sum_j j q_j / (e^{bj} - 1) = M together with the matching total
/// occupation Nbar = sum_j q_j / (e^{bj} - 1).
struct EquilibriumSolution {
  double M = 0.0;
  double b = 0.0;
  double Nbar = 0.0;
  double residual = 0.0;    // energy series at b minus M
  std::int64_t j_cut = 0;   // last level kept in the energy series
  int iterations = 0;
};

/// Energy series sum_j j q_j / (e^{bj} - 1); tail below `abs_tol`.
double energy_sum(const MultiplicitySpec& spec, double b, double abs_tol, std::int64_t* j_cut = nullptr);

/// Solves for b by bisection on a bracket seeded from the large-M asymptote.
/// Throws NumericError if the residual target |residual| <= tol max(1, M)
/// cannot be met.
EquilibriumSolution solve_b(const MultiplicitySpec& spec, double M, double tol = 1e-12);

/// q_j / (e^{bj} - 1)
double occupation(const MultiplicitySpec& spec, double b, std::int64_t j);

/// sum_{j>=1} q_j / (e^{bj} - 1); the neglected tail is below rel_tol times
/// the returned value.
double total_occupation(const MultiplicitySpec& spec, double b, double rel_tol = 1e-13);

/// sum_{j>=l} q_j / (e^{bj} - 1), same truncation rule.
double cumulative_tail(const MultiplicitySpec& spec, double b, std::int64_t l, double rel_tol = 1e-13);

/// The slowly growing factor in the deviation radius.
class ChiFunction {
 public:
  enum class Kind { loglog, constant };

  /// 1 + ln(1 + ln(1 + x))
  ChiFunction() = default;
  static ChiFunction constant(double c);
  /// "loglog" or "const:<v>"
  static ChiFunction parse(std::string_view id);

  double operator()(double x) const;
  Kind kind() const noexcept { return kind_; }
  /// Constant chi does not tend to infinity, so it sits outside the
  /// concentration theorems' hypothesis.
  bool satisfies_growth_hypothesis() const noexcept { return kind_ == Kind::loglog; }
  std::string id() const;

 private:
  Kind kind_ = Kind::loglog;
  double value_ = 1.0;
};

struct DeltaSpec {
  ChiFunction chi;
  double Nbar = 0.0;
  double d = 0.0;
  double delta = 0.0;
};

/// (Nbar ln Nbar)^{1/2} chi(Nbar) for d > 2, Nbar^{1/d} ln(Nbar) chi(Nbar)
/// for 1 < d <= 2. Needs Nbar > e.
DeltaSpec deviation_radius(double Nbar, double d, const ChiFunction& chi = {});

/// Condensation threshold Nbar(M).
double threshold(const MultiplicitySpec& spec, double M, double tol = 1e-12);

enum class RegimeKind { normal, condensed };

struct Regime {
  RegimeKind kind = RegimeKind::normal;
  double threshold = 0.0;
  double N = 0.0;
};

/// Condensed iff N > Nbar(M); the boundary counts as normal.
Regime classify(const MultiplicitySpec& spec, double M, double N, double tol = 1e-12);

struct GrandCanonicalSolution {
  double beta = 0.0;
  double mu = 0.0;
  double residual_N = 0.0;
  double residual_M = 0.0;
};

/// Solves sum_{j>=0} q_j/(e^{beta j + mu} - 1) = N and
/// sum_{j>=1} j q_j/(e^{beta j + mu} - 1) = M by nested bisection.
/// Throws RegimeError when N exceeds the threshold.
GrandCanonicalSolution solve_beta_mu(const MultiplicitySpec& spec, double M, double N, double tol = 1e-12);

/// q_j / (e^{beta j + mu} - 1), j >= 0 (uses q0 at j = 0).
double grand_canonical_occupation(const MultiplicitySpec& spec, double beta, double mu, std::int64_t j);

struct CondensedProfile {
  double N0bar = 0.0;  // condensate: N - Nbar(M)
  double b = 0.0;
  double Nbar = 0.0;
};

/// Profile above the threshold. Throws RegimeError for N <= Nbar(M).
CondensedProfile condensed_profile(const MultiplicitySpec& spec, double M, double N, double tol = 1e-12);

/// Threshold with all q_j (j >= 1) multiplied by K.
double coloring_threshold(const MultiplicitySpec& spec, double M, std::int64_t K, double tol = 1e-12);

}  // namespace boselab
