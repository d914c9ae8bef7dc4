#pragma once

// Level-update kernels for the weighted-partition dynamic program.
//
// A row G_j holds log weights of configurations supported on levels >= j.
// Adding level j (multiplicity q) to the row G_{j+1}:
//
//   G_j[m]    = log sum_n   C(n+q-1, n) exp(G_{j+1}[m - j n])
//   G_j[m][n] = log sum_k   C(k+q-1, k) exp(G_{j+1}[m - j k][n - k])
//
// Each kernel exists twice: a plain serial reference (two-pass log-sum-exp)
// kept for testing, and an OpenMP version (single-pass streaming
// log-sum-exp over independent output energies) used in production.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace boselab::kernels {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log C(n+q-1, n) for n = 0..n_max, accumulated as a running product.
std::vector<double> log_binomial_series(double q, std::int64_t n_max);

/// log(exp(a) + exp(b)) with -inf as the additive identity.
double log_add(double a, double b);

/// Log weights by (energy, particle count) for levels >= `level`. Particle
/// counts are stored only up to cap(m) = min(n_max, m / level); entries
/// beyond the cap are structurally zero.
class FixedRow {
 public:
  FixedRow() = default;
  FixedRow(std::int64_t m_max, std::int64_t n_max, std::int64_t level);

  /// Row for the empty level range: weight 1 at (0, 0).
  static FixedRow base(std::int64_t m_max, std::int64_t n_max, std::int64_t level);

  std::int64_t m_max() const noexcept { return m_max_; }
  std::int64_t n_max() const noexcept { return n_max_; }
  std::int64_t level() const noexcept { return level_; }
  std::int64_t cap(std::int64_t m) const noexcept {
    return static_cast<std::int64_t>(offset_[m + 1] - offset_[m]) - 1;
  }

  double at(std::int64_t m, std::int64_t n) const noexcept {
    if (m < 0 || n < 0 || m > m_max_ || n > cap(m)) return kLogZero;
    return data_[offset_[m] + static_cast<std::size_t>(n)];
  }
  std::span<double> slice(std::int64_t m) noexcept {
    return {data_.data() + offset_[m], static_cast<std::size_t>(cap(m) + 1)};
  }
  std::span<const double> slice(std::int64_t m) const noexcept {
    return {data_.data() + offset_[m], static_cast<std::size_t>(cap(m) + 1)};
  }
  std::size_t bytes() const noexcept { return data_.size() * sizeof(double) + offset_.size() * sizeof(std::size_t); }

  /// Storage a row would need, without allocating it.
  static std::size_t predicted_bytes(std::int64_t m_max, std::int64_t n_max, std::int64_t level);

 private:
  std::int64_t m_max_ = 0;
  std::int64_t n_max_ = 0;
  std::int64_t level_ = 1;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

/// Variable-particle-number update; `in` and `out` have equal length M+1,
/// logc must cover n up to M / level.
void level_update_serial(std::span<const double> in, std::int64_t level, std::span<const double> logc,
                         std::span<double> out);
void level_update_parallel(std::span<const double> in, std::int64_t level, std::span<const double> logc,
                           std::span<double> out);

/// Fixed-particle-number update; `out` must be shaped for `level` and `in`
/// for `level + 1` with the same m_max and n_max.
void level_update_fixed_serial(const FixedRow& in, std::int64_t level, std::span<const double> logc, FixedRow& out);
void level_update_fixed_parallel(const FixedRow& in, std::int64_t level, std::span<const double> logc,
                                 FixedRow& out);

}  // namespace boselab::kernels
