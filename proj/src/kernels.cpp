#include "boselab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boselab::kernels {
namespace {

// One streaming log-sum-exp accumulator: keeps (max, sum of exp(x - max)).
struct StreamingLse {
  double mx = kLogZero;
  double s = 0.0;
  void add(double x) {
    if (x <= mx) {
      if (x != kLogZero) s += std::exp(x - mx);
    } else {
      s = s * std::exp(mx - x) + 1.0;
      mx = x;
    }
  }
  double value() const { return mx == kLogZero ? kLogZero : mx + std::log(s); }
};

}  // namespace

std::vector<double> log_binomial_series(double q, std::int64_t n_max) {
  if (!(q > 0.0)) throw std::invalid_argument("multiplicity must be positive");
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(n_max, 0) + 1));
  out[0] = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n)
    out[n] = out[n - 1] + std::log((q + static_cast<double>(n - 1)) / static_cast<double>(n));
  return out;
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

FixedRow::FixedRow(std::int64_t m_max, std::int64_t n_max, std::int64_t level)
    : m_max_(m_max), n_max_(n_max), level_(level) {
  if (m_max < 0 || n_max < 0 || level < 1) throw std::invalid_argument("bad fixed row shape");
  offset_.resize(static_cast<std::size_t>(m_max + 2));
  offset_[0] = 0;
  for (std::int64_t m = 0; m <= m_max; ++m)
    offset_[m + 1] = offset_[m] + static_cast<std::size_t>(std::min(n_max, m / level) + 1);
  data_.assign(offset_.back(), kLogZero);
}

FixedRow FixedRow::base(std::int64_t m_max, std::int64_t n_max, std::int64_t level) {
  FixedRow r(m_max, n_max, level);
  r.data_[0] = 0.0;
  return r;
}

std::size_t FixedRow::predicted_bytes(std::int64_t m_max, std::int64_t n_max, std::int64_t level) {
  std::size_t entries = 0;
  for (std::int64_t m = 0; m <= m_max; ++m) entries += static_cast<std::size_t>(std::min(n_max, m / level) + 1);
  return entries * sizeof(double) + static_cast<std::size_t>(m_max + 2) * sizeof(std::size_t);
}

void level_update_serial(std::span<const double> in, std::int64_t level, std::span<const double> logc,
                         std::span<double> out) {
  const auto M = static_cast<std::int64_t>(in.size()) - 1;
  for (std::int64_t m = 0; m <= M; ++m) {
    const std::int64_t n_top = m / level;
    double mx = kLogZero;
    for (std::int64_t n = 0; n <= n_top; ++n) mx = std::max(mx, logc[n] + in[m - level * n]);
    if (mx == kLogZero) {
      out[m] = kLogZero;
      continue;
    }
    double s = 0.0;
    for (std::int64_t n = 0; n <= n_top; ++n) s += std::exp(logc[n] + in[m - level * n] - mx);
    out[m] = mx + std::log(s);
  }
}

void level_update_parallel(std::span<const double> in, std::int64_t level, std::span<const double> logc,
                           std::span<double> out) {
  const auto M = static_cast<std::int64_t>(in.size()) - 1;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t m = 0; m <= M; ++m) {
    StreamingLse acc;
    const std::int64_t n_top = m / level;
    const double* src = in.data() + m;
    for (std::int64_t n = 0; n <= n_top; ++n) acc.add(logc[n] + src[-level * n]);
    out[m] = acc.value();
  }
}

namespace {

void check_fixed_shapes(const FixedRow& in, std::int64_t level, const FixedRow& out) {
  if (in.level() != level + 1 || out.level() != level || in.m_max() != out.m_max() || in.n_max() != out.n_max())
    throw std::invalid_argument("fixed row shapes do not match the level update");
}

}  // namespace

void level_update_fixed_serial(const FixedRow& in, std::int64_t level, std::span<const double> logc,
                               FixedRow& out) {
  check_fixed_shapes(in, level, out);
  for (std::int64_t m = 0; m <= out.m_max(); ++m) {
    auto dst = out.slice(m);
    for (std::int64_t n = 0; n <= out.cap(m); ++n) {
      const std::int64_t k_top = std::min(n, m / level);
      double mx = kLogZero;
      for (std::int64_t k = 0; k <= k_top; ++k) mx = std::max(mx, logc[k] + in.at(m - level * k, n - k));
      if (mx == kLogZero) {
        dst[n] = kLogZero;
        continue;
      }
      double s = 0.0;
      for (std::int64_t k = 0; k <= k_top; ++k) s += std::exp(logc[k] + in.at(m - level * k, n - k) - mx);
      dst[n] = mx + std::log(s);
    }
  }
}

void level_update_fixed_parallel(const FixedRow& in, std::int64_t level, std::span<const double> logc,
                                 FixedRow& out) {
  check_fixed_shapes(in, level, out);
  const std::int64_t M = out.m_max();
  const std::int64_t next = level + 1;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t m = 0; m <= M; ++m) {
    auto dst = out.slice(m);
    const std::int64_t cap = out.cap(m);
    for (std::int64_t n = 0; n <= cap; ++n) {
      // in(m - level k, n - k) is structurally zero unless
      // (level + 1)(n - k) <= m - level k, i.e. k >= (level + 1) n - m.
      const std::int64_t k_lo = std::max<std::int64_t>(0, next * n - m);
      const std::int64_t k_top = std::min(n, m / level);
      StreamingLse acc;
      for (std::int64_t k = k_lo; k <= k_top; ++k) {
        const std::int64_t mm = m - level * k;
        const std::int64_t nn = n - k;
        if (nn > in.cap(mm)) continue;
        acc.add(logc[k] + in.slice(mm)[nn]);
      }
      dst[n] = acc.value();
    }
  }
}

}  // namespace boselab::kernels
