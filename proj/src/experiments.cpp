#include "boselab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boselab/errors.hpp"
#include "boselab/sampler.hpp"
#include "boselab/special_sums.hpp"
#include "boselab/weight_table.hpp"
#include "json.hpp"

namespace boselab {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Draw {
  SampleBatch batch;
  std::string backend;
};

Draw draw_variable(const MultiplicitySpec& spec, std::int64_t M, double b, std::int64_t count, std::uint64_t seed,
                   const ExperimentOptions& opts) {
  const std::size_t need = WeightTable::predicted_bytes(TableMode::variable_n, M, 0, 0);
  if (need <= opts.memory_budget) {
    TableOptions t;
    t.memory_budget = opts.memory_budget;
    const WeightTable table = WeightTable::variable(spec, M, t);
    return {sample_variable(table, M, seed, count), "exact_dp"};
  }
  return {sample_boltzmann(spec, b, M, seed, count), "boltzmann"};
}

// Weighted empirical quantile.
double quantile(std::vector<std::pair<double, double>> vw, double p) {
  std::sort(vw.begin(), vw.end());
  double total = 0.0;
  for (const auto& [v, w] : vw) total += w;
  double acc = 0.0;
  for (const auto& [v, w] : vw) {
    acc += w;
    if (acc >= p * total) return v;
  }
  return vw.back().first;
}

std::vector<std::pair<double, double>> values_with_weights(const SampleBatch& batch,
                                                           const std::function<double(const Configuration&)>& f) {
  std::vector<std::pair<double, double>> out;
  out.reserve(batch.configurations.size());
  for (std::size_t i = 0; i < batch.configurations.size(); ++i)
    out.emplace_back(f(batch.configurations[i]), batch.weights[i]);
  return out;
}

}  // namespace

double ExperimentReport::extra(const std::string& name) const {
  for (const auto& [k, v] : extras)
    if (k == name) return v;
  throw std::out_of_range("report has no field '" + name + "'");
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = kind;
  j["spec"] = spec;
  j["M"] = M;
  j["N"] = N ? nlohmann::ordered_json(*N) : nlohmann::ordered_json(nullptr);
  j["count"] = count;
  j["seed"] = seed;
  j["chi"] = chi;
  j["delta"] = delta;
  j["statistic"] = statistic;
  j["backend"] = backend;
  j["empirical_tail"] = empirical_tail;
  j["stderr"] = std_error;
  j["theory"] = {{"b", b}, {"Nbar", Nbar}, {"threshold", threshold}, {"regime", regime}};
  for (const auto& [k, v] : extras) j["results"][k] = v;
  j["pass"] = pass;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < csv_header.size(); ++i) os << (i ? "," : "") << csv_header[i];
  os << '\n';
  for (const auto& row : csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

ExperimentReport run_deviation(const MultiplicitySpec& spec, std::int64_t M, const LevelCoefficients& f,
                               std::int64_t count, std::uint64_t seed, const ChiFunction& chi,
                               const ExperimentOptions& opts) {
  if (f.sup_abs() > 1.0) throw std::invalid_argument("coefficients must satisfy |f_j| <= 1");
  const auto t0 = Clock::now();
  const ReferenceProfile ref = ReferenceProfile::variable(spec, static_cast<double>(M));
  const DeltaSpec ds = deviation_radius(ref.Nbar(), spec.d(), chi);

  ExperimentReport r;
  r.kind = "deviation";
  r.spec = spec.to_string();
  r.M = static_cast<double>(M);
  r.count = count;
  r.seed = seed;
  r.chi = chi.id();
  r.delta = ds.delta;
  r.statistic = f.to_string();
  r.b = ref.b();
  r.Nbar = ref.Nbar();
  r.threshold = ref.Nbar();
  r.regime = "variable";

  const Draw draw = draw_variable(spec, M, ref.b(), count, seed, opts);
  r.backend = draw.backend;
  const TailEstimate tail = empirical_tail(draw.batch, f, ref, ds.delta);
  r.empirical_tail = tail.frequency;
  r.std_error = tail.std_error;

  const double offset = ref.linear(f);
  const auto centred = values_with_weights(draw.batch, [&](const Configuration& c) { return f.apply(c) - offset; });
  const WeightedMean mean =
      weighted_mean(draw.batch, [&](const Configuration& c) { return f.apply(c) - offset; });
  r.extras = {{"accepted", static_cast<double>(draw.batch.configurations.size())},
              {"mean_centred_statistic", mean.mean},
              {"mean_stderr", mean.std_error},
              {"offset", offset}};
  r.csv_header = {"sample_id", "centred_statistic", "weight"};
  for (std::size_t i = 0; i < centred.size(); ++i)
    r.csv_rows.push_back({static_cast<double>(i), centred[i].first, centred[i].second});
  r.pass = r.empirical_tail <= opts.bar;
  r.wall_seconds = seconds_since(t0);
  return r;
}

ExperimentReport run_condensation(const MultiplicitySpec& spec, std::int64_t M, std::int64_t N, std::int64_t count,
                                  std::uint64_t seed, const ChiFunction& chi, const ExperimentOptions& opts) {
  const auto t0 = Clock::now();
  const Regime regime = classify(spec, static_cast<double>(M), static_cast<double>(N));
  if (regime.kind != RegimeKind::condensed)
    throw RegimeError("N = " + std::to_string(N) + " is not above the threshold " +
                      std::to_string(regime.threshold) + "; use the deviation experiment");
  const ReferenceProfile ref = ReferenceProfile::fixed(spec, static_cast<double>(M), static_cast<double>(N));
  const DeltaSpec ds = deviation_radius(ref.Nbar(), spec.d(), chi);

  ExperimentReport r;
  r.kind = "condense";
  r.spec = spec.to_string();
  r.M = static_cast<double>(M);
  r.N = static_cast<double>(N);
  r.count = count;
  r.seed = seed;
  r.chi = chi.id();
  r.delta = ds.delta;
  r.statistic = "N_0";
  r.backend = "exact_dp";
  r.b = ref.b();
  r.Nbar = ref.Nbar();
  r.threshold = regime.threshold;
  r.regime = "condensed";

  TableOptions t;
  t.memory_budget = opts.memory_budget;
  const WeightTable table = WeightTable::fixed(spec, M, N, t);
  const SampleBatch batch = sample_fixed(table, M, N, seed, count);

  const LevelCoefficients ground = LevelCoefficients::custom({1.0});
  const TailEstimate tail = empirical_tail(batch, ground, ref, ds.delta);
  r.empirical_tail = tail.frequency;
  r.std_error = tail.std_error;

  const auto n0 = values_with_weights(batch, [](const Configuration& c) { return static_cast<double>(c.count(0)); });
  const WeightedMean mean0 =
      weighted_mean(batch, [](const Configuration& c) { return static_cast<double>(c.count(0)); });
  const WeightedMean excited = weighted_mean(
      batch, [](const Configuration& c) { return static_cast<double>(c.particles() - c.count(0)); });
  r.extras = {{"N0bar", ref.N0bar()},
              {"mean_N0", mean0.mean},
              {"mean_N0_stderr", mean0.std_error},
              {"q05_N0", quantile(n0, 0.05)},
              {"median_N0", quantile(n0, 0.5)},
              {"q95_N0", quantile(n0, 0.95)},
              {"mean_excited", excited.mean},
              {"mean_gap", std::abs(mean0.mean - ref.N0bar())}};
  r.csv_header = {"sample_id", "N_0", "excited"};
  for (std::size_t i = 0; i < batch.configurations.size(); ++i) {
    const auto& c = batch.configurations[i];
    r.csv_rows.push_back({static_cast<double>(i), static_cast<double>(c.count(0)),
                          static_cast<double>(c.particles() - c.count(0))});
  }
  r.pass = r.empirical_tail <= opts.bar && std::abs(mean0.mean - ref.N0bar()) <= ds.delta;
  r.wall_seconds = seconds_since(t0);
  return r;
}

ExperimentReport run_coloring(const MultiplicitySpec& spec, double M, const std::vector<std::int64_t>& K_list,
                              const ExperimentOptions& opts) {
  if (K_list.empty()) throw std::invalid_argument("coloring needs at least one K");
  const auto t0 = Clock::now();
  const EquilibriumSolution eq = solve_b(spec, M);

  ExperimentReport r;
  r.kind = "coloring";
  r.spec = spec.to_string();
  r.M = M;
  r.statistic = "threshold_ratio";
  r.backend = "numeric";
  r.b = eq.b;
  r.Nbar = eq.Nbar;
  r.threshold = eq.Nbar;
  r.regime = "variable";
  r.csv_header = {"K", "ratio", "predicted", "rel_dev"};

  double worst = 0.0;
  double previous = 0.0;
  bool monotone = true;
  for (std::int64_t K : K_list) {
    if (K < 1) throw std::invalid_argument("coloring needs K >= 1");
    const double ratio = coloring_threshold(spec, M, K) / eq.Nbar;
    const double predicted = std::pow(static_cast<double>(K), 1.0 / (spec.d() + 1.0));
    const double dev = std::abs(ratio / predicted - 1.0);
    worst = std::max(worst, dev);
    if (ratio < previous) monotone = false;
    previous = ratio;
    r.csv_rows.push_back({static_cast<double>(K), ratio, predicted, dev});
    r.extras.emplace_back("ratio_K" + std::to_string(K), ratio);
  }
  r.extras.emplace_back("max_rel_dev", worst);
  r.extras.emplace_back("monotone", monotone ? 1.0 : 0.0);
  r.pass = worst <= opts.coloring_tol;
  r.wall_seconds = seconds_since(t0);
  return r;
}

ExperimentReport run_profile(const MultiplicitySpec& spec, std::int64_t M, double x1, double x2, int grid_points,
                             std::int64_t count, std::uint64_t seed, const ExperimentOptions& opts) {
  if (grid_points < 1) throw std::invalid_argument("profile needs a nonempty grid");
  if (!(x1 > 0.0 && x2 > x1)) throw std::invalid_argument("profile needs 0 < x1 < x2");
  const auto t0 = Clock::now();
  const EquilibriumSolution eq = solve_b(spec, static_cast<double>(M));
  const double b = eq.b;
  const double d = spec.d();
  const double scale = std::pow(b, d) / spec.Q();

  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  std::vector<std::int64_t> first_level(grid.size());
  std::vector<double> limit(grid.size());
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = grid_points == 1 ? x1 : x1 + (x2 - x1) * i / (grid_points - 1);
    first_level[i] = static_cast<std::int64_t>(std::floor(grid[i] / b)) + 1;  // smallest j > x/b
    limit[i] = bose_integral(d, grid[i]);
  }

  ExperimentReport r;
  r.kind = "profile";
  r.spec = spec.to_string();
  r.M = static_cast<double>(M);
  r.count = count;
  r.seed = seed;
  r.statistic = "sup_discrepancy";
  r.b = b;
  r.Nbar = eq.Nbar;
  r.threshold = eq.Nbar;
  r.regime = "variable";
  r.delta = opts.epsilon;

  const Draw draw = draw_variable(spec, M, b, count, seed, opts);
  r.backend = draw.backend;
  auto sup_discrepancy = [&](const Configuration& c) {
    // Tail sums sum_{j >= l} N_j from a reverse cumulative pass.
    const auto& n = c.counts();
    std::vector<double> tail(n.size() + 1, 0.0);
    for (std::size_t j = n.size(); j-- > 1;) tail[j] = tail[j + 1] + static_cast<double>(n[j]);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto l = static_cast<std::size_t>(first_level[i]);
      const double s = l < tail.size() ? tail[l] : 0.0;
      sup = std::max(sup, std::abs(scale * s - limit[i]));
    }
    return sup;
  };
  const auto sups = values_with_weights(draw.batch, sup_discrepancy);
  const WeightedMean over =
      weighted_mean(draw.batch, [&](const Configuration& c) { return sup_discrepancy(c) > opts.epsilon ? 1.0 : 0.0; });
  const WeightedMean mean = weighted_mean(draw.batch, sup_discrepancy);
  const WeightedMean first = weighted_mean(draw.batch, [&](const Configuration& c) {
    double s = 0.0;
    for (std::int64_t j = first_level[0]; j <= c.max_level(); ++j) s += static_cast<double>(c.count(j));
    return scale * s;
  });
  r.empirical_tail = over.mean;
  r.std_error = over.std_error;
  r.extras = {{"median_sup", quantile(sups, 0.5)},
              {"mean_sup", mean.mean},
              {"q90_sup", quantile(sups, 0.9)},
              {"mean_scaled_tail_x1", first.mean},
              {"mean_scaled_tail_x1_stderr", first.std_error},
              {"x1", x1},
              {"x2", x2},
              {"grid_points", static_cast<double>(grid_points)}};
  r.csv_header = {"sample_id", "sup_discrepancy", "weight"};
  for (std::size_t i = 0; i < sups.size(); ++i) r.csv_rows.push_back({static_cast<double>(i), sups[i].first, sups[i].second});
  r.pass = true;
  r.wall_seconds = seconds_since(t0);
  return r;
}

}  // namespace boselab
