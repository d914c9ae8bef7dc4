#include "boselab/weight_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boselab/errors.hpp"

namespace boselab {
namespace {

std::vector<double> variable_base(std::int64_t M) {
  std::vector<double> row(static_cast<std::size_t>(M + 1), kernels::kLogZero);
  row[0] = 0.0;
  return row;
}

std::int64_t slot_count(std::int64_t M, std::int64_t s) { return M >= 1 ? (M - 1) / s + 1 : 1; }

}  // namespace

std::int64_t WeightTable::default_stride(std::int64_t M_max) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(M_max)))));
}

std::size_t WeightTable::predicted_bytes(TableMode mode, std::int64_t M_max, std::int64_t N_max,
                                         std::int64_t stride) {
  stride = stride > 0 ? stride : default_stride(M_max);
  if (mode == TableMode::variable_n) {
    const auto row = static_cast<std::size_t>(M_max + 1) * sizeof(double);
    return static_cast<std::size_t>(slot_count(M_max, stride) + stride) * row;
  }
  std::size_t total = 0;
  for (std::int64_t level = 1; level <= std::max<std::int64_t>(M_max, 1); level += stride)
    total += kernels::FixedRow::predicted_bytes(M_max, N_max, level);
  // The lowest block is the largest one rebuilt during a sweep.
  for (std::int64_t level = 2; level <= std::min(M_max, stride); ++level)
    total += kernels::FixedRow::predicted_bytes(M_max, N_max, level);
  return total;
}

WeightTable::WeightTable(const MultiplicitySpec& spec, TableMode mode, std::int64_t M_max, std::int64_t N_max,
                         const TableOptions& opts)
    : spec_(spec),
      mode_(mode),
      M_max_(M_max),
      N_max_(N_max),
      stride_(opts.stride > 0 ? opts.stride : default_stride(M_max)),
      kernel_(opts.kernel) {
  if (M_max < 0) throw std::invalid_argument("weight table needs M_max >= 0");
  if (mode == TableMode::fixed_n && N_max < 0) throw std::invalid_argument("weight table needs N_max >= 0");
  const std::size_t need = predicted_bytes(mode, M_max, N_max, stride_);
  if (need > opts.memory_budget) {
    std::int64_t best = stride_;
    std::size_t best_bytes = need;
    auto consider = [&](std::int64_t s) {
      const std::size_t b = predicted_bytes(mode, M_max, N_max, s);
      if (b < best_bytes) {
        best_bytes = b;
        best = s;
      }
    };
    // Coarse geometric scan, then every stride around the coarse optimum.
    const std::int64_t top = std::max<std::int64_t>(1, M_max);
    for (std::int64_t s = 1; s <= top; s = s < 8 ? s + 1 : s * 5 / 4) consider(s);
    const std::int64_t coarse = best;
    for (std::int64_t s = std::max<std::int64_t>(1, coarse * 4 / 5); s <= std::min(top, coarse * 5 / 4 + 1); ++s)
      consider(s);
    throw CapacityError("weight table needs " + std::to_string(need) + " bytes, budget is " +
                            std::to_string(opts.memory_budget) + "; smallest footprint " +
                            std::to_string(best_bytes) + " bytes at stride " + std::to_string(best),
                        best);
  }
  build();
}

WeightTable WeightTable::variable(const MultiplicitySpec& spec, std::int64_t M_max, const TableOptions& opts) {
  return WeightTable(spec, TableMode::variable_n, M_max, 0, opts);
}

WeightTable WeightTable::fixed(const MultiplicitySpec& spec, std::int64_t M_max, std::int64_t N_max,
                               const TableOptions& opts) {
  return WeightTable(spec, TableMode::fixed_n, M_max, N_max, opts);
}

std::vector<double> WeightTable::log_binomials(std::int64_t level, std::int64_t n_max) const {
  return kernels::log_binomial_series(level == 0 ? spec_.q0() : spec_(level), n_max);
}

void WeightTable::apply_level(std::span<const double> in, std::int64_t level, std::span<double> out) const {
  const auto logc = log_binomials(level, M_max_ / level);
  if (kernel_ == KernelVariant::serial_reference)
    kernels::level_update_serial(in, level, logc, out);
  else
    kernels::level_update_parallel(in, level, logc, out);
}

void WeightTable::apply_level(const kernels::FixedRow& in, std::int64_t level, kernels::FixedRow& out) const {
  const auto logc = log_binomials(level, std::min(N_max_, M_max_ / level));
  if (kernel_ == KernelVariant::serial_reference)
    kernels::level_update_fixed_serial(in, level, logc, out);
  else
    kernels::level_update_fixed_parallel(in, level, logc, out);
}

std::size_t WeightTable::slot_of(std::int64_t level) const { return static_cast<std::size_t>((level - 1) / stride_); }

std::int64_t WeightTable::checkpoint_at_or_above(std::int64_t level) const {
  if (is_checkpoint(level)) return level;
  const std::int64_t next = 1 + ((level - 1) / stride_ + 1) * stride_;
  return next > M_max_ ? M_max_ + 1 : next;
}

void WeightTable::build() {
  const std::int64_t M = M_max_;
  if (mode_ == TableMode::variable_n) {
    rows_.assign(static_cast<std::size_t>(slot_count(M, stride_)), {});
    std::vector<double> current = variable_base(M);
    std::vector<double> next(current.size());
    if (M == 0) rows_[0] = current;
    for (std::int64_t j = M; j >= 1; --j) {
      apply_level(current, j, next);
      std::swap(current, next);
      if (is_checkpoint(j)) rows_[slot_of(j)] = current;
    }
    return;
  }
  fixed_rows_.assign(static_cast<std::size_t>(slot_count(M, stride_)), {});
  kernels::FixedRow current = kernels::FixedRow::base(M, N_max_, M + 1);
  if (M == 0) fixed_rows_[0] = kernels::FixedRow::base(0, N_max_, 1);
  for (std::int64_t j = M; j >= 1; --j) {
    kernels::FixedRow next(M, N_max_, j);
    apply_level(current, j, next);
    current = std::move(next);
    if (is_checkpoint(j)) fixed_rows_[slot_of(j)] = current;
  }
}

std::span<const double> WeightTable::first_row() const {
  if (mode_ != TableMode::variable_n) throw std::logic_error("first_row needs a variable_n table");
  return rows_.front();
}

const kernels::FixedRow& WeightTable::first_fixed_row() const {
  if (mode_ != TableMode::fixed_n) throw std::logic_error("first_fixed_row needs a fixed_n table");
  return fixed_rows_.front();
}

double WeightTable::log_energy_weight(std::int64_t m) const {
  if (m < 0 || m > M_max_) throw std::out_of_range("energy outside the table");
  return first_row()[m];
}

double WeightTable::log_cumulative_weight(std::int64_t M) const {
  if (M < 0 || M > M_max_) throw std::out_of_range("energy outside the table");
  const auto row = first_row();
  double acc = kernels::kLogZero;
  for (std::int64_t m = 0; m <= M; ++m) acc = kernels::log_add(acc, row[m]);
  return acc;
}

double WeightTable::log_fixed_weight(std::int64_t M, std::int64_t N) const {
  if (M < 0 || M > M_max_) throw std::out_of_range("energy outside the table");
  if (N < 0 || N > N_max_) throw std::out_of_range("particle number outside the table");
  const auto& row = first_fixed_row();
  const auto ground = log_binomials(0, N);
  double acc = kernels::kLogZero;
  for (std::int64_t m = 0; m <= M; ++m) {
    const std::int64_t top = std::min(N, row.cap(m));
    for (std::int64_t n = 0; n <= top; ++n) acc = kernels::log_add(acc, ground[N - n] + row.at(m, n));
  }
  return acc;
}

double WeightTable::log_level_weight(std::int64_t level, std::int64_t m) const {
  if (mode_ != TableMode::variable_n) throw std::logic_error("variable_n query on a fixed_n table");
  if (level < 1 || level > M_max_ + 1) throw std::out_of_range("level outside the table");
  if (m < 0 || m > M_max_) throw std::out_of_range("energy outside the table");
  const std::int64_t top = checkpoint_at_or_above(level);
  std::vector<double> current = top == M_max_ + 1 ? variable_base(M_max_) : rows_[slot_of(top)];
  std::vector<double> next(current.size());
  for (std::int64_t j = top - 1; j >= level; --j) {
    apply_level(current, j, next);
    std::swap(current, next);
  }
  return current[m];
}

double WeightTable::log_level_weight(std::int64_t level, std::int64_t m, std::int64_t n) const {
  if (mode_ != TableMode::fixed_n) throw std::logic_error("fixed_n query on a variable_n table");
  if (level < 1 || level > M_max_ + 1) throw std::out_of_range("level outside the table");
  const std::int64_t top = checkpoint_at_or_above(level);
  kernels::FixedRow current =
      top == M_max_ + 1 ? kernels::FixedRow::base(M_max_, N_max_, M_max_ + 1) : fixed_rows_[slot_of(top)];
  for (std::int64_t j = top - 1; j >= level; --j) {
    kernels::FixedRow next(M_max_, N_max_, j);
    apply_level(current, j, next);
    current = std::move(next);
  }
  return current.at(m, n);
}

void WeightTable::sweep_variable(
    const std::function<bool(std::int64_t, std::span<const double>)>& visit) const {
  if (mode_ != TableMode::variable_n) throw std::logic_error("sweep_variable needs a variable_n table");
  const std::vector<double> base = variable_base(M_max_);
  std::vector<std::vector<double>> block;
  for (std::int64_t start = 1; start <= M_max_; start += stride_) {
    const std::int64_t top = std::min(start + stride_, M_max_ + 1);
    const std::vector<double>& top_row = top == M_max_ + 1 ? base : rows_[slot_of(top)];
    // block[i] holds G_{start + 1 + i} for start + 1 + i < top.
    block.resize(static_cast<std::size_t>(top - start - 1));
    for (std::int64_t lvl = top - 1; lvl > start; --lvl) {
      const std::vector<double>& above = lvl + 1 == top ? top_row : block[lvl + 1 - start - 1];
      auto& dst = block[lvl - start - 1];
      dst.resize(above.size());
      apply_level(above, lvl, dst);
    }
    for (std::int64_t j = start; j < top; ++j) {
      const std::vector<double>& next = j + 1 == top ? top_row : block[j + 1 - start - 1];
      if (!visit(j, next)) return;
    }
  }
}

void WeightTable::sweep_fixed(const std::function<bool(std::int64_t, const kernels::FixedRow&)>& visit) const {
  if (mode_ != TableMode::fixed_n) throw std::logic_error("sweep_fixed needs a fixed_n table");
  const kernels::FixedRow base = kernels::FixedRow::base(M_max_, N_max_, M_max_ + 1);
  std::vector<kernels::FixedRow> block;
  for (std::int64_t start = 1; start <= M_max_; start += stride_) {
    const std::int64_t top = std::min(start + stride_, M_max_ + 1);
    const kernels::FixedRow& top_row = top == M_max_ + 1 ? base : fixed_rows_[slot_of(top)];
    block.clear();
    block.resize(static_cast<std::size_t>(top - start - 1));
    for (std::int64_t lvl = top - 1; lvl > start; --lvl) {
      const kernels::FixedRow& above = lvl + 1 == top ? top_row : block[lvl + 1 - start - 1];
      kernels::FixedRow dst(M_max_, N_max_, lvl);
      apply_level(above, lvl, dst);
      block[lvl - start - 1] = std::move(dst);
    }
    for (std::int64_t j = start; j < top; ++j) {
      const kernels::FixedRow& next = j + 1 == top ? top_row : block[j + 1 - start - 1];
      if (!visit(j, next)) return;
    }
  }
}

}  // namespace boselab
