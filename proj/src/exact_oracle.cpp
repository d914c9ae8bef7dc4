#include "boselab/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "boselab/errors.hpp"
#include "boselab/kernels.hpp"
#include "boselab/weight_table.hpp"

namespace boselab {
namespace {

// Budget for the exact (energy, particles) dynamic program, in big-integer
// multiply-adds.
constexpr double kExactFixedBudget = 2e7;

double log_bigint(const BigInt& x) {
  if (x <= 0) return kernels::kLogZero;
  const auto bits = static_cast<std::int64_t>(boost::multiprecision::msb(x));
  if (bits < 1000) return std::log(x.convert_to<double>());
  // Two leading limbs carry more than double precision.
  const auto& be = x.backend();
  const std::size_t n = be.size();
  constexpr int limb_bits = sizeof(*be.limbs()) * 8;
  const double top = std::ldexp(static_cast<double>(be.limbs()[n - 1]), limb_bits) +
                     static_cast<double>(be.limbs()[n - 2]);
  return std::log(top) + static_cast<double>((n - 2) * limb_bits) * std::log(2.0);
}

std::vector<BigInt> binomial_row(std::int64_t q, std::int64_t n_max) {
  std::vector<BigInt> out(static_cast<std::size_t>(n_max + 1));
  out[0] = 1;
  for (std::int64_t n = 1; n <= n_max; ++n) out[n] = out[n - 1] * (q + n - 1) / n;
  return out;
}

double binomial_real(double q, std::int64_t n) {
  double r = 1.0;
  for (std::int64_t i = 0; i < n; ++i) r *= (q + static_cast<double>(i)) / static_cast<double>(i + 1);
  return r;
}

double level_q(const MultiplicitySpec& spec, std::int64_t j) { return j == 0 ? spec.q0() : spec(j); }

std::int64_t level_q_int(const MultiplicitySpec& spec, std::int64_t j) {
  return j == 0 ? spec.integral_q0() : spec.integral_at(j);
}

void require_nonnegative(std::int64_t M) {
  if (M < 0) throw std::invalid_argument("energy must be nonnegative");
}

}  // namespace

Weight make_weight(BigInt x) {
  Weight w;
  w.log_value = log_bigint(x);
  w.exact = std::move(x);
  return w;
}

BigInt binomial_exact(std::int64_t q, std::int64_t n) {
  if (q < 1 || n < 0) throw std::invalid_argument("binomial_exact needs q >= 1 and n >= 0");
  BigInt r = 1;
  for (std::int64_t i = 1; i <= n; ++i) r = r * (q + i - 1) / i;
  return r;
}

double config_weight(const MultiplicitySpec& spec, const Configuration& c, bool with_ground) {
  const auto& n = c.counts();
  double w = 1.0;
  for (std::size_t j = with_ground ? 0 : 1; j < n.size(); ++j)
    if (n[j] > 0) w *= binomial_real(level_q(spec, static_cast<std::int64_t>(j)), n[j]);
  return w;
}

double log_config_weight(const MultiplicitySpec& spec, const Configuration& c, bool with_ground) {
  const auto& n = c.counts();
  double w = 0.0;
  for (std::size_t j = with_ground ? 0 : 1; j < n.size(); ++j)
    if (n[j] > 0) w += kernels::log_binomial_series(level_q(spec, static_cast<std::int64_t>(j)), n[j])[n[j]];
  return w;
}

BigInt config_weight_exact(const MultiplicitySpec& spec, const Configuration& c, bool with_ground) {
  if (!spec.is_integral()) throw std::invalid_argument("exact weights need integer multiplicities");
  const auto& n = c.counts();
  BigInt w = 1;
  for (std::size_t j = with_ground ? 0 : 1; j < n.size(); ++j)
    if (n[j] > 0) w *= binomial_exact(level_q_int(spec, static_cast<std::int64_t>(j)), n[j]);
  return w;
}

std::vector<BigInt> exact_energy_weights(const MultiplicitySpec& spec, std::int64_t M) {
  require_nonnegative(M);
  if (!spec.is_integral()) throw std::invalid_argument("exact weights need integer multiplicities");
  std::vector<BigInt> row(static_cast<std::size_t>(M + 1), 0);
  std::vector<BigInt> next(row.size());
  row[0] = 1;
  for (std::int64_t j = M; j >= 1; --j) {
    const auto c = binomial_row(spec.integral_at(j), M / j);
    for (std::int64_t m = 0; m <= M; ++m) {
      BigInt acc = 0;
      for (std::int64_t n = 0; n * j <= m; ++n)
        if (row[m - n * j] != 0) acc += c[n] * row[m - n * j];
      next[m] = std::move(acc);
    }
    std::swap(row, next);
  }
  return row;
}

BigInt exact_fixed_weight(const MultiplicitySpec& spec, std::int64_t M, std::int64_t N) {
  require_nonnegative(M);
  if (N < 0) throw std::invalid_argument("particle number must be nonnegative");
  if (!spec.is_integral()) throw std::invalid_argument("exact weights need integer multiplicities");
  const std::int64_t W = N + 1;
  auto idx = [W](std::int64_t m, std::int64_t n) { return static_cast<std::size_t>(m * W + n); };
  std::vector<BigInt> row(static_cast<std::size_t>((M + 1) * W), 0);
  std::vector<BigInt> next(row.size());
  row[idx(0, 0)] = 1;
  for (std::int64_t j = M; j >= 1; --j) {
    const auto c = binomial_row(spec.integral_at(j), std::min(N, M / j));
    for (std::int64_t m = 0; m <= M; ++m)
      for (std::int64_t n = 0; n <= N; ++n) {
        BigInt acc = 0;
        for (std::int64_t k = 0; k <= n && k * j <= m; ++k) {
          const BigInt& g = row[idx(m - k * j, n - k)];
          if (g != 0) acc += c[k] * g;
        }
        next[idx(m, n)] = std::move(acc);
      }
    std::swap(row, next);
  }
  const auto c0 = binomial_row(spec.integral_q0(), N);
  BigInt total = 0;
  for (std::int64_t m = 0; m <= M; ++m)
    for (std::int64_t n = 0; n <= N; ++n)
      if (row[idx(m, n)] != 0) total += c0[N - n] * row[idx(m, n)];
  return total;
}

Weight weight_exact_energy(const MultiplicitySpec& spec, std::int64_t M) {
  require_nonnegative(M);
  if (spec.is_integral() && M <= kExactEnergyLimit) return make_weight(exact_energy_weights(spec, M)[M]);
  return Weight{WeightTable::variable(spec, M).log_energy_weight(M), std::nullopt};
}

Weight weight_cumulative(const MultiplicitySpec& spec, std::int64_t M) {
  require_nonnegative(M);
  if (spec.is_integral() && M <= kExactEnergyLimit) {
    BigInt total = 0;
    for (const auto& w : exact_energy_weights(spec, M)) total += w;
    return make_weight(std::move(total));
  }
  return Weight{WeightTable::variable(spec, M).log_cumulative_weight(M), std::nullopt};
}

Weight weight_fixed(const MultiplicitySpec& spec, std::int64_t M, std::int64_t N) {
  require_nonnegative(M);
  if (N < 0) throw std::invalid_argument("particle number must be nonnegative");
  double cost = 0.0;
  for (std::int64_t j = 1; j <= M; ++j)
    cost += static_cast<double>(M + 1) * static_cast<double>(N + 1) * static_cast<double>(std::min(N, M / j) + 1);
  if (spec.is_integral() && M <= kExactEnergyLimit && cost <= kExactFixedBudget)
    return make_weight(exact_fixed_weight(spec, M, N));
  return Weight{WeightTable::fixed(spec, M, N).log_fixed_weight(M, N), std::nullopt};
}

std::vector<double> gen_function_coeffs(const MultiplicitySpec& spec, std::int64_t M_max) {
  require_nonnegative(M_max);
  std::vector<double> a(static_cast<std::size_t>(M_max + 1), 0.0);
  std::vector<double> b(a.size());
  a[0] = 1.0;
  for (std::int64_t j = 1; j <= M_max; ++j) {
    // Multiply by (1 - z^j)^{-q} = sum_n C(n+q-1, n) z^{jn}.
    const double q = spec(j);
    std::vector<double> c(static_cast<std::size_t>(M_max / j + 1));
    c[0] = 1.0;
    for (std::size_t n = 1; n < c.size(); ++n)
      c[n] = c[n - 1] * (q + static_cast<double>(n - 1)) / static_cast<double>(n);
    for (std::int64_t m = 0; m <= M_max; ++m) {
      double s = 0.0;
      for (std::int64_t n = 0; n * j <= m; ++n) s += c[n] * a[m - n * j];
      b[m] = s;
    }
    std::swap(a, b);
  }
  return a;
}

std::vector<BigInt> gen_function_coeffs_exact(const MultiplicitySpec& spec, std::int64_t M_max) {
  require_nonnegative(M_max);
  if (!spec.is_integral()) throw std::invalid_argument("exact coefficients need integer multiplicities");
  std::vector<BigInt> a(static_cast<std::size_t>(M_max + 1), 0);
  a[0] = 1;
  // (1 - z^j)^{-q} applied as q successive divisions by (1 - z^j), each an
  // in-place running sum with step j.
  for (std::int64_t j = 1; j <= M_max; ++j) {
    const std::int64_t q = spec.integral_at(j);
    for (std::int64_t r = 0; r < q; ++r)
      for (std::int64_t m = j; m <= M_max; ++m) a[m] += a[m - j];
  }
  return a;
}

void enumerate(const MultiplicitySpec& spec, std::int64_t M, const std::function<void(const EnumeratedConfig&)>& visit,
               const EnumerationOptions& opts) {
  require_nonnegative(M);
  if (M > opts.cap)
    throw CapacityError("enumeration of M = " + std::to_string(M) + " exceeds the cap " + std::to_string(opts.cap));
  const bool fixed = opts.N.has_value();
  const std::int64_t N = fixed ? *opts.N : 0;
  if (fixed && N < 0) throw std::invalid_argument("particle number must be nonnegative");
  const bool integral = spec.is_integral();

  std::vector<std::int64_t> counts(static_cast<std::size_t>(M + 1), 0);
  EnumeratedConfig out;
  std::function<void(std::int64_t, std::int64_t, std::int64_t)> rec = [&](std::int64_t j, std::int64_t energy_left,
                                                                            std::int64_t particles_left) {
    if (j > energy_left || (fixed && particles_left == 0)) {
      if (fixed) counts[0] = particles_left;
      out.config = Configuration(counts);
      out.weight = config_weight(spec, out.config, fixed);
      out.log_weight = log_config_weight(spec, out.config, fixed);
      out.exact_weight = integral ? config_weight_exact(spec, out.config, fixed) : BigInt(0);
      visit(out);
      if (fixed) counts[0] = 0;
      return;
    }
    std::int64_t top = energy_left / j;
    if (fixed) top = std::min(top, particles_left);
    for (std::int64_t n = 0; n <= top; ++n) {
      counts[j] = n;
      rec(j + 1, energy_left - n * j, particles_left - n);
    }
    counts[j] = 0;
  };
  rec(1, M, N);
}

std::vector<EnumeratedConfig> enumerate(const MultiplicitySpec& spec, std::int64_t M,
                                        const EnumerationOptions& opts) {
  std::vector<EnumeratedConfig> all;
  enumerate(spec, M, [&](const EnumeratedConfig& e) { all.push_back(e); }, opts);
  return all;
}

double LinearStatistic::tail(double delta) const {
  double p = 0.0;
  for (const auto& [x, prob] : distribution)
    if (x - offset > delta) p += prob;
  return p;
}

double LinearStatistic::abs_tail(double delta) const {
  double p = 0.0;
  for (const auto& [x, prob] : distribution)
    if (std::abs(x - offset) > delta) p += prob;
  return p;
}

LinearStatistic exact_linear_statistic(const MultiplicitySpec& spec, std::int64_t M, const LevelCoefficients& f,
                                       const ReferenceProfile& reference, const EnumerationOptions& opts) {
  std::map<double, double> law;
  double total = 0.0;
  enumerate(
      spec, M,
      [&](const EnumeratedConfig& e) {
        law[f.apply(e.config)] += e.weight;
        total += e.weight;
      },
      opts);
  LinearStatistic s;
  s.offset = reference.linear(f);
  for (const auto& [x, w] : law) {
    s.distribution.emplace_back(x, w / total);
    s.mean += x * w / total;
  }
  return s;
}

}  // namespace boselab
