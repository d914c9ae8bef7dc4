#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "boselab/kernels.hpp"
#include "boselab/multiplicity.hpp"

namespace boselab {

enum class TableMode { variable_n, fixed_n };
enum class KernelVariant { serial_reference, parallel };

struct TableOptions {
  /// Distance between stored rows; 0 picks ceil(sqrt(M_max)).
  std::int64_t stride = 0;
  std::size_t memory_budget = std::size_t{2} << 30;
  KernelVariant kernel = KernelVariant::parallel;
};

/// Checkpointed dynamic-programming table of suffix weights.
///
/// Row G_j holds, in log scale, the total weight of configurations supported
/// on levels >= j with energy exactly m (variable_n) or with energy m and
/// exactly n particles on those levels (fixed_n). Only rows j = 1, 1 + s,
/// 1 + 2s, ... are kept; intermediate rows are rebuilt on demand from the
/// next stored row above them, which reproduces them bit for bit.
///
/// A built table is immutable and may be shared across threads.
class WeightTable {
 public:
  static WeightTable variable(const MultiplicitySpec& spec, std::int64_t M_max, const TableOptions& opts = {});
  static WeightTable fixed(const MultiplicitySpec& spec, std::int64_t M_max, std::int64_t N_max,
                           const TableOptions& opts = {});

  /// Bytes needed for stored rows plus one block of rebuilt rows.
  static std::size_t predicted_bytes(TableMode mode, std::int64_t M_max, std::int64_t N_max, std::int64_t stride);
  static std::int64_t default_stride(std::int64_t M_max);

  TableMode mode() const noexcept { return mode_; }
  std::int64_t M_max() const noexcept { return M_max_; }
  std::int64_t N_max() const noexcept { return N_max_; }
  std::int64_t stride() const noexcept { return stride_; }
  const MultiplicitySpec& spec() const noexcept { return spec_; }
  KernelVariant kernel() const noexcept { return kernel_; }

  /// log w(Omega_m^0) = log G_1[m] (variable_n).
  double log_energy_weight(std::int64_t m) const;
  /// log w(Omega_M) (variable_n).
  double log_cumulative_weight(std::int64_t M) const;
  /// log W(Omega_{M,N}) including the ground-level factor (fixed_n).
  double log_fixed_weight(std::int64_t M, std::int64_t N) const;

  /// log G_level[m] (variable_n); level in [1, M_max + 1].
  double log_level_weight(std::int64_t level, std::int64_t m) const;
  /// log G_level[m][n] (fixed_n).
  double log_level_weight(std::int64_t level, std::int64_t m, std::int64_t n) const;

  /// First row, G_1.
  std::span<const double> first_row() const;
  const kernels::FixedRow& first_fixed_row() const;

  /// Visits levels j = 1..M_max in ascending order with the row G_{j+1},
  /// rebuilding each block between stored rows once. Stops early when the
  /// visitor returns false.
  void sweep_variable(const std::function<bool(std::int64_t level, std::span<const double> next)>& visit) const;
  void sweep_fixed(const std::function<bool(std::int64_t level, const kernels::FixedRow& next)>& visit) const;

  /// log C(n + q_j - 1, n) for the level's multiplicity (q0 at level 0).
  std::vector<double> log_binomials(std::int64_t level, std::int64_t n_max) const;

 private:
  WeightTable(const MultiplicitySpec& spec, TableMode mode, std::int64_t M_max, std::int64_t N_max,
              const TableOptions& opts);
  void build();
  void apply_level(std::span<const double> in, std::int64_t level, std::span<double> out) const;
  void apply_level(const kernels::FixedRow& in, std::int64_t level, kernels::FixedRow& out) const;
  std::size_t slot_of(std::int64_t level) const;  // stored-row index for a checkpoint level
  std::int64_t checkpoint_at_or_above(std::int64_t level) const;
  bool is_checkpoint(std::int64_t level) const { return level == M_max_ + 1 || (level - 1) % stride_ == 0; }

  MultiplicitySpec spec_;
  TableMode mode_;
  std::int64_t M_max_;
  std::int64_t N_max_;
  std::int64_t stride_;
  KernelVariant kernel_;
  std::vector<std::vector<double>> rows_;        // variable_n checkpoints, index k <-> level 1 + k s
  std::vector<kernels::FixedRow> fixed_rows_;    // fixed_n checkpoints
};

}  // namespace boselab
