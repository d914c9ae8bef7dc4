#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace boselab {

enum class MultiplicityKind { power_law, oscillator, tabled_with_power_tail };

/// Rule producing the level multiplicities q_j (j >= 1) and the ground-level
/// multiplicity q0 used by the fixed-particle-number system.
///
/// Rules:
///   power_law   q_j = Q j^(d-1)
///   oscillator  q_j = C(j+d-1, j), integer d >= 2, implied Q = 1/Gamma(d)
///   tabled      explicit q_1..q_J, then a power_law or oscillator tail
///
/// Every q_j is additionally multiplied by a positive scale factor, which is
/// how K-colouring (q_j -> K q_j) is expressed. The object is immutable.
class MultiplicitySpec {
 public:
  static MultiplicitySpec power_law(double d, double Q, double q0 = 1.0);
  static MultiplicitySpec oscillator(int d, double q0 = 1.0);
  static MultiplicitySpec tabled(std::vector<double> prefix, const MultiplicitySpec& tail);

  /// Parses "power:d=3,Q=1,q0=1", "osc:d=3,q0=1" or
  /// "table:[1.5,2,3];power:d=2,Q=1". An optional K=<k> on the rule applies
  /// scaled(k). Throws std::invalid_argument.
  static MultiplicitySpec parse(std::string_view text);
  std::string to_string() const;

  MultiplicityKind kind() const noexcept { return kind_; }
  /// Kind of the rule used beyond the table (equals kind() for untabled specs).
  MultiplicityKind tail_kind() const noexcept { return tail_kind_; }
  double d() const noexcept { return d_; }
  /// Leading coefficient of q_j ~ Q j^(d-1), scale included.
  double Q() const noexcept;
  double q0() const noexcept { return q0_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& table() const noexcept { return table_; }

  /// q_j for j >= 1.
  double operator()(std::int64_t j) const;

  /// True when every q_j (and q0) is a positive integer.
  bool is_integral() const noexcept { return integral_; }
  /// Exact q_j; only valid when is_integral().
  std::int64_t integral_at(std::int64_t j) const;
  std::int64_t integral_q0() const;

  /// Smallest B with q_j <= B j^(d-1) for every j >= j_from.
  double envelope_constant(std::int64_t j_from) const;

  /// Same rule with every q_j (j >= 1) multiplied by K; q0 is unchanged.
  MultiplicitySpec scaled(double K) const;
  MultiplicitySpec with_q0(double q0) const;

 private:
  MultiplicitySpec() = default;
  double tail_value(std::int64_t j) const;
  void refresh_integrality();

  MultiplicityKind kind_ = MultiplicityKind::power_law;
  MultiplicityKind tail_kind_ = MultiplicityKind::power_law;
  double d_ = 2.0;
  double Q_ = 1.0;
  double q0_ = 1.0;
  double scale_ = 1.0;
  std::vector<double> table_;
  bool integral_ = false;
};

/// q_j for the given j.
inline double multiplicity(const MultiplicitySpec& spec, std::int64_t j) { return spec(j); }

/// True iff B1 j^(d-1) <= q_j <= B2 j^(d-1) for 1 <= j <= j_max.
bool verify_envelope(const MultiplicitySpec& spec, double B1, double B2, std::int64_t j_max);

}  // namespace boselab
