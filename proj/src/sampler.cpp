#include "boselab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "boselab/errors.hpp"
#include "boselab/kernels.hpp"
#include "boselab/rng.hpp"

namespace boselab {
namespace {

using Sparse = std::vector<std::pair<std::int64_t, std::int64_t>>;

Configuration densify(const Sparse& occupied) {
  std::int64_t top = -1;
  for (const auto& [j, n] : occupied) top = std::max(top, j);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(top + 1), 0);
  for (const auto& [j, n] : occupied) counts[j] += n;
  return Configuration(std::move(counts));
}

// Cumulative linear weights exp(x - max) for inversion sampling.
std::vector<double> cumulative(const std::vector<double>& logw) {
  double mx = kernels::kLogZero;
  for (double x : logw) mx = std::max(mx, x);
  if (mx == kernels::kLogZero) throw std::logic_error("all sampling weights are zero");
  std::vector<double> cdf(logw.size());
  double s = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    s += logw[i] == kernels::kLogZero ? 0.0 : std::exp(logw[i] - mx);
    cdf[i] = s;
  }
  return cdf;
}

std::size_t invert(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.end()) --it;
  // upper_bound skips zero-weight entries, which repeat the previous value.
  return static_cast<std::size_t>(it - cdf.begin());
}

// Draws an index from log weights given in `logw` (scratch reused).
std::int64_t draw_log(std::vector<double>& logw, StreamRng& rng) {
  double mx = kernels::kLogZero;
  for (double x : logw) mx = std::max(mx, x);
  double s = 0.0;
  for (double& x : logw) {
    x = x == kernels::kLogZero ? 0.0 : std::exp(x - mx);
    s += x;
  }
  const double target = rng.uniform() * s;
  double c = 0.0;
  std::int64_t last = 0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    if (logw[i] == 0.0) continue;
    last = static_cast<std::int64_t>(i);
    c += logw[i];
    if (target < c) return last;
  }
  return last;
}

void check_count(std::int64_t count) {
  if (count < 0) throw std::invalid_argument("sample count must be nonnegative");
}

}  // namespace

SampleBatch sample_variable(const WeightTable& table, std::int64_t M, std::uint64_t seed, std::int64_t count) {
  if (table.mode() != TableMode::variable_n) throw std::invalid_argument("sample_variable needs a variable_n table");
  if (M < 0 || M > table.M_max()) throw std::out_of_range("M outside the table");
  check_count(count);

  const auto first = table.first_row();
  const std::vector<double> energy_cdf = cumulative(std::vector<double>(first.begin(), first.begin() + M + 1));

  const auto n_samples = static_cast<std::size_t>(count);
  std::vector<StreamRng> rng;
  rng.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) rng.emplace_back(seed, i);
  std::vector<std::int64_t> left(n_samples);
  std::vector<Sparse> occupied(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) left[i] = static_cast<std::int64_t>(invert(energy_cdf, rng[i].uniform()));

  table.sweep_variable([&](std::int64_t j, std::span<const double> next) {
    std::int64_t busiest = 0;
    for (auto m : left) busiest = std::max(busiest, m);
    if (busiest == 0) return false;
    if (busiest < j) return true;
    const auto logc = table.log_binomials(j, busiest / j);
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(dynamic, 64)
      for (std::size_t i = 0; i < n_samples; ++i) {
        const std::int64_t m = left[i];
        if (m < j) continue;
        scratch.resize(static_cast<std::size_t>(m / j + 1));
        for (std::int64_t n = 0; n <= m / j; ++n) scratch[n] = logc[n] + next[m - j * n];
        const std::int64_t n = draw_log(scratch, rng[i]);
        if (n > 0) {
          occupied[i].emplace_back(j, n);
          left[i] = m - j * n;
        }
      }
    }
    return true;
  });

  SampleBatch batch;
  batch.seed = seed;
  batch.scheme = SamplingScheme::exact_sequential;
  batch.proposals = count;
  batch.configurations.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (left[i] != 0) throw std::logic_error("sequential sampler left energy unassigned");
    batch.configurations.push_back(densify(occupied[i]));
  }
  batch.weights.assign(n_samples, 1.0);
  return batch;
}

SampleBatch sample_fixed(const WeightTable& table, std::int64_t M, std::int64_t N, std::uint64_t seed,
                         std::int64_t count) {
  if (table.mode() != TableMode::fixed_n) throw std::invalid_argument("sample_fixed needs a fixed_n table");
  if (M < 0 || M > table.M_max()) throw std::out_of_range("M outside the table");
  if (N < 0 || N > table.N_max()) throw std::out_of_range("N outside the table");
  check_count(count);

  // Joint law of (energy, particles on levels >= 1), ground factor included.
  const auto& first = table.first_fixed_row();
  const auto ground = table.log_binomials(0, N);
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  std::vector<double> logw;
  for (std::int64_t m = 0; m <= M; ++m)
    for (std::int64_t n = 0; n <= std::min(N, first.cap(m)); ++n) {
      cells.emplace_back(m, n);
      logw.push_back(ground[N - n] + first.at(m, n));
    }
  const std::vector<double> joint_cdf = cumulative(logw);

  const auto n_samples = static_cast<std::size_t>(count);
  std::vector<StreamRng> rng;
  rng.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) rng.emplace_back(seed, i);
  std::vector<std::int64_t> m_left(n_samples), n_left(n_samples);
  std::vector<Sparse> occupied(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto [m, n] = cells[invert(joint_cdf, rng[i].uniform())];
    m_left[i] = m;
    n_left[i] = n;
    if (N - n > 0) occupied[i].emplace_back(0, N - n);
  }

  table.sweep_fixed([&](std::int64_t j, const kernels::FixedRow& next) {
    std::int64_t busiest = 0;
    for (std::size_t i = 0; i < n_samples; ++i)
      if (n_left[i] > 0) busiest = std::max(busiest, m_left[i]);
    if (busiest == 0) return false;
    if (busiest < j) return true;
    const auto logc = table.log_binomials(j, std::min(N, busiest / j));
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(dynamic, 64)
      for (std::size_t i = 0; i < n_samples; ++i) {
        const std::int64_t m = m_left[i];
        const std::int64_t n = n_left[i];
        if (n == 0 || m < j) continue;
        const std::int64_t k_top = std::min(n, m / j);
        scratch.resize(static_cast<std::size_t>(k_top + 1));
        for (std::int64_t k = 0; k <= k_top; ++k) scratch[k] = logc[k] + next.at(m - j * k, n - k);
        const std::int64_t k = draw_log(scratch, rng[i]);
        if (k > 0) {
          occupied[i].emplace_back(j, k);
          m_left[i] = m - j * k;
          n_left[i] = n - k;
        }
      }
    }
    return true;
  });

  SampleBatch batch;
  batch.seed = seed;
  batch.scheme = SamplingScheme::exact_sequential;
  batch.proposals = count;
  batch.configurations.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (m_left[i] != 0 || n_left[i] != 0) throw std::logic_error("sequential sampler left state unassigned");
    batch.configurations.push_back(densify(occupied[i]));
  }
  batch.weights.assign(n_samples, 1.0);
  return batch;
}

namespace {

// One draw from P(n) ~ C(n+q-1, n) x^n by inversion on the ratio recurrence,
// carried in log scale so a vanishing P(0) does not stall the walk.
std::int64_t negative_binomial(double q, double x, StreamRng& rng) {
  const double u = rng.uniform();
  double lp = q * std::log1p(-x);
  double cum = std::exp(lp);
  const double mean = q * x / (1.0 - x);
  std::int64_t n = 0;
  while (cum <= u) {
    lp += std::log(x * (q + static_cast<double>(n)) / static_cast<double>(n + 1));
    ++n;
    const double p = std::exp(lp);
    cum += p;
    // Remaining mass below double resolution; rounding kept cum short of u.
    if (static_cast<double>(n) > mean && p < 1e-17 * cum) break;
  }
  return n;
}

struct Proposal {
  bool accepted = false;
  Configuration config;
};

}  // namespace

SampleBatch sample_boltzmann(const MultiplicitySpec& spec, double b, std::int64_t M, std::uint64_t seed,
                             std::int64_t count, const BoltzmannOptions& opts) {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("sample_boltzmann needs b > 0");
  if (M < 0) throw std::invalid_argument("energy must be nonnegative");
  check_count(count);

  // Levels above J carry total occupation probability ~ q_J e^{-45}, below
  // double resolution, and are left empty. When J = M every occupied level
  // above M forces a rejection; that event is drawn as one Bernoulli.
  const std::int64_t J = std::min<std::int64_t>(M, static_cast<std::int64_t>(std::ceil(45.0 / b)));
  std::vector<double> q(static_cast<std::size_t>(J + 1)), x(q.size());
  for (std::int64_t j = 1; j <= J; ++j) {
    q[j] = spec(j);
    x[j] = std::exp(-b * static_cast<double>(j));
  }
  double log_none_above = 0.0;  // log P(N_j = 0 for all j > M)
  if (J == M) {
    for (std::int64_t j = M + 1;; ++j) {
      const double t = spec(j) * std::log1p(-std::exp(-b * static_cast<double>(j)));
      log_none_above += t;
      if (std::abs(t) < 1e-18 * std::max(1e-300, std::abs(log_none_above)) || t == 0.0) break;
    }
  }
  const double p_none_above = std::exp(log_none_above);

  auto propose = [&](std::int64_t index) {
    StreamRng rng(seed, static_cast<std::uint64_t>(index));
    Proposal p;
    std::vector<std::int64_t> counts;
    std::int64_t energy = 0;
    for (std::int64_t j = 1; j <= J; ++j) {
      const std::int64_t n = negative_binomial(q[j], x[j], rng);
      if (n == 0) continue;
      energy += j * n;
      if (energy > M) return p;
      counts.resize(static_cast<std::size_t>(j + 1), 0);
      counts[j] = n;
    }
    if (J == M && rng.uniform() >= p_none_above) return p;
    p.accepted = true;
    p.config = Configuration(std::move(counts));
    return p;
  };

  std::vector<Proposal> proposals(static_cast<std::size_t>(count));
  auto run = [&](std::int64_t from, std::int64_t to) {
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t i = from; i < to; ++i) proposals[i] = propose(i);
  };
  const std::int64_t calib = std::min(count, opts.calibration);
  run(0, calib);
  if (calib > 0) {
    std::int64_t accepted = 0;
    for (std::int64_t i = 0; i < calib; ++i) accepted += proposals[i].accepted;
    const double rate = static_cast<double>(accepted) / static_cast<double>(calib);
    if (rate < opts.min_acceptance)
      throw EfficiencyError("importance sampler acceptance " + std::to_string(rate) + " is below " +
                            std::to_string(opts.min_acceptance) + "; use the exact sampler");
  }
  run(calib, count);

  SampleBatch batch;
  batch.seed = seed;
  batch.scheme = SamplingScheme::boltzmann_importance;
  batch.proposals = count;
  std::int64_t top = 0;
  for (const auto& p : proposals)
    if (p.accepted) top = std::max(top, p.config.energy());
  for (auto& p : proposals) {
    if (!p.accepted) continue;
    batch.weights.push_back(std::exp(b * static_cast<double>(p.config.energy() - top)));
    batch.configurations.push_back(std::move(p.config));
  }
  return batch;
}

WeightedMean weighted_mean(const SampleBatch& batch, const std::function<double(const Configuration&)>& value) {
  const std::size_t n = batch.configurations.size();
  if (n == 0) throw std::invalid_argument("weighted mean of an empty batch");
  std::vector<double> v(n);
  double sw = 0.0, swv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = value(batch.configurations[i]);
    sw += batch.weights[i];
    swv += batch.weights[i] * v[i];
  }
  WeightedMean r;
  r.mean = swv / sw;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = batch.weights[i] * (v[i] - r.mean);
    s += t * t;
  }
  r.std_error = std::sqrt(s) / sw;
  if (batch.scheme == SamplingScheme::exact_sequential && n > 1)
    r.std_error *= std::sqrt(static_cast<double>(n) / static_cast<double>(n - 1));
  return r;
}

TailEstimate empirical_tail(const SampleBatch& batch, const LevelCoefficients& f, const ReferenceProfile& reference,
                            double delta) {
  if (f.sup_abs() > 1.0) throw std::invalid_argument("coefficients must satisfy |f_j| <= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (batch.configurations.empty()) return {};
  if (std::isinf(delta)) return {};
  const double offset = reference.linear(f);
  const WeightedMean m = weighted_mean(
      batch, [&](const Configuration& c) { return std::abs(f.apply(c) - offset) > delta ? 1.0 : 0.0; });
  return {m.mean, m.std_error};
}

}  // namespace boselab
