// Command-line front end for the boselab library.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "boselab/equilibrium.hpp"
#include "boselab/errors.hpp"
#include "boselab/exact_oracle.hpp"
#include "boselab/experiments.hpp"
#include "boselab/saddlepoint.hpp"
#include "boselab/sampler.hpp"
#include "boselab/special_sums.hpp"
#include "boselab/weight_table.hpp"
#include "json.hpp"

using namespace boselab;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitBreach = 2;

std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("BOSELAB_SEED"); env != nullptr && *env != '\0')
    return std::stoull(env);
  return seed;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

std::string big_to_string(const BigInt& x) { return x.str(); }

std::string sample_csv(const SampleBatch& batch, std::size_t width) {
  std::int64_t jmax = 0;
  for (const auto& c : batch.configurations) jmax = std::max(jmax, c.max_level());
  const auto dense = static_cast<std::int64_t>(std::min<std::size_t>(width, static_cast<std::size_t>(jmax + 1)));
  const bool sparse = jmax + 1 > dense;
  std::ostringstream os;
  os.precision(17);
  os << "sample_id,energy,particles";
  for (std::int64_t j = 0; j < dense; ++j) os << ",N_" << j;
  if (sparse) os << ",tail";
  os << ",weight\n";
  for (std::size_t i = 0; i < batch.configurations.size(); ++i) {
    const auto& c = batch.configurations[i];
    os << i << ',' << c.energy() << ',' << c.particles();
    for (std::int64_t j = 0; j < dense; ++j) os << ',' << c.count(j);
    if (sparse) {
      os << ',';
      bool first = true;
      for (std::int64_t j = dense; j <= c.max_level(); ++j)
        if (c.count(j) > 0) {
          os << (first ? "" : " ") << j << ':' << c.count(j);
          first = false;
        }
    }
    os << ',' << batch.weights[i] << '\n';
  }
  return os.str();
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoll(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted integer partitions, Bose-Einstein statistics and condensation"};
  app.require_subcommand(1);

  std::string spec_text = "power:d=3,Q=1,q0=1";
  double M = 0.0;
  std::int64_t M_int = 0;
  std::int64_t N = -1;
  double tol = 1e-12;
  std::string out_path;

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the energy equation for b and Nbar");
  solve->add_option("--spec", spec_text, "Multiplicity rule")->required();
  solve->add_option("--M", M, "Energy bound")->required();
  solve->add_option("--tol", tol, "Relative residual tolerance");

  // threshold
  std::int64_t K = 1;
  double N_real = -1.0;
  auto* thresh = app.add_subcommand("threshold", "Condensation threshold and regime");
  thresh->add_option("--spec", spec_text)->required();
  thresh->add_option("--M", M)->required();
  thresh->add_option("--K", K, "Number of colours");
  thresh->add_option("--N", N_real, "Particle number to classify");

  // beta-mu
  auto* betamu = app.add_subcommand("beta-mu", "Grand-canonical parameters in the normal regime");
  betamu->add_option("--spec", spec_text)->required();
  betamu->add_option("--M", M)->required();
  betamu->add_option("--N", N_real)->required();

  // sums
  double s_exp = 1.0, b_val = 1.0, d_val = 3.0, x_val = 1.0;
  std::int64_t l_val = 1;
  auto* sums = app.add_subcommand("sums", "Bose-type sums and integrals");
  sums->require_subcommand(1);
  auto* sums_bose = sums->add_subcommand("bose", "sum_{j>=l} j^s / (e^{bj} - 1)");
  sums_bose->add_option("--s", s_exp)->required();
  sums_bose->add_option("--b", b_val)->required();
  sums_bose->add_option("--l", l_val);
  auto* sums_int = sums->add_subcommand("integral", "int_x^inf y^{d-1} / (e^y - 1) dy");
  sums_int->add_option("--d", d_val)->required();
  sums_int->add_option("--x", x_val)->required();

  // weights
  bool exact_int = false;
  auto* weights = app.add_subcommand("weights", "w(Omega_M^0), w(Omega_M) or W(Omega_{M,N})");
  weights->add_option("--spec", spec_text)->required();
  weights->add_option("--M", M_int)->required();
  weights->add_option("--N", N, "Fixed particle number");
  weights->add_flag("--exact-int", exact_int, "Require exact integer arithmetic");

  // coeffs
  std::int64_t M_max = 0;
  auto* coeffs = app.add_subcommand("coeffs", "Generating-function coefficients");
  coeffs->add_option("--spec", spec_text)->required();
  coeffs->add_option("--Mmax", M_max)->required();
  coeffs->add_flag("--exact-int", exact_int);

  // enumerate
  std::string format = "csv";
  std::int64_t cap = kEnumerationCap;
  auto* enumer = app.add_subcommand("enumerate", "List Omega_M or Omega_{M,N} with weights");
  enumer->add_option("--spec", spec_text)->required();
  enumer->add_option("--M", M_int)->required();
  enumer->add_option("--N", N);
  enumer->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  enumer->add_option("--cap", cap);

  // sample
  std::int64_t count = 1000;
  std::uint64_t seed = 1;
  std::string scheme = "exact";
  std::size_t width = 32;
  auto* sample = app.add_subcommand("sample", "Draw configurations from P_M or P_{M,N}");
  sample->add_option("--spec", spec_text)->required();
  sample->add_option("--M", M_int)->required();
  sample->add_option("--N", N);
  sample->add_option("--count", count)->required();
  sample->add_option("--seed", seed);
  sample->add_option("--scheme", scheme)->check(CLI::IsMember({"exact", "boltzmann"}));
  sample->add_option("--width", width, "Dense N_j columns before the sparse tail");
  sample->add_option("--out", out_path);

  // saddle
  std::string bounds_list;
  auto* saddle = app.add_subcommand("saddle", "Contour-integral weight and saddle-point quantities");
  saddle->add_option("--spec", spec_text)->required();
  saddle->add_option("--M", M_int)->required();
  saddle->add_option("--check-bounds", bounds_list, "Comma-separated M grid");

  // experiment
  std::string chi_text = "loglog", csv_path, f_text = "ones", K_text = "2,4,16";
  double x1 = 0.5, x2 = 3.0, bar = 0.05;
  int grid = 26;
  auto* experiment = app.add_subcommand("experiment", "Seeded experiment drivers with JSON reports");
  experiment->require_subcommand(1);
  auto add_common = [&](CLI::App* sc, bool sampling) {
    sc->add_option("--spec", spec_text)->required();
    sc->add_option("--M", M)->required();
    sc->add_option("--out", out_path);
    sc->add_option("--csv", csv_path);
    if (sampling) {
      sc->add_option("--count", count);
      sc->add_option("--seed", seed);
      sc->add_option("--chi", chi_text);
      sc->add_option("--bar", bar);
    }
  };
  auto* ex_dev = experiment->add_subcommand("deviation", "Concentration of linear statistics under P_M");
  add_common(ex_dev, true);
  ex_dev->add_option("--f", f_text, "ones | tail:<l> | alt | zero | custom:[...]");
  auto* ex_cond = experiment->add_subcommand("condense", "Condensate fluctuations under P_{M,N}");
  add_common(ex_cond, true);
  ex_cond->add_option("--N", N)->required();
  auto* ex_col = experiment->add_subcommand("coloring", "Threshold scaling under K-colouring");
  add_common(ex_col, false);
  ex_col->add_option("--K", K_text, "Comma-separated K values");
  auto* ex_prof = experiment->add_subcommand("profile", "Convergence to the Bose-Einstein profile");
  add_common(ex_prof, true);
  ex_prof->add_option("--x1", x1);
  ex_prof->add_option("--x2", x2);
  ex_prof->add_option("--grid", grid);

  CLI11_PARSE(app, argc, argv);

  try {
    const MultiplicitySpec spec = MultiplicitySpec::parse(spec_text);
    json j;
    if (*solve) {
      const EquilibriumSolution s = solve_b(spec, M, tol);
      j = {{"M", s.M}, {"b", s.b}, {"Nbar", s.Nbar}, {"residual", s.residual}, {"j_cut", s.j_cut}};
    } else if (*thresh) {
      j["M"] = M;
      j["threshold"] = threshold(spec, M);
      if (K != 1) {
        j["K"] = K;
        j["coloring_threshold"] = coloring_threshold(spec, M, K);
      }
      if (N_real >= 0.0) {
        const Regime r = classify(spec, M, N_real);
        j["N"] = N_real;
        j["regime"] = r.kind == RegimeKind::condensed ? "condensed" : "normal";
      }
    } else if (*betamu) {
      const GrandCanonicalSolution g = solve_beta_mu(spec, M, N_real);
      j = {{"beta", g.beta}, {"mu", g.mu}, {"residual_N", g.residual_N}, {"residual_M", g.residual_M}};
    } else if (*sums) {
      if (*sums_bose) {
        const SumResult r = bose_sum(s_exp, b_val, l_val);
        j = {{"value", r.value}, {"remainder_bound", r.remainder_bound}};
      } else {
        j = {{"value", bose_integral(d_val, x_val)}};
      }
    } else if (*weights) {
      if (exact_int && !spec.is_integral()) throw std::invalid_argument("--exact-int needs integer multiplicities");
      Weight w;
      if (N >= 0) {
        j["kind"] = "fixed";
        j["N"] = N;
        w = exact_int ? make_weight(exact_fixed_weight(spec, M_int, N)) : weight_fixed(spec, M_int, N);
      } else {
        j["kind"] = "energy";
        w = exact_int ? make_weight(exact_energy_weights(spec, M_int)[M_int]) : weight_exact_energy(spec, M_int);
      }
      j["M"] = M_int;
      j["log_weight"] = w.log_value;
      if (w.exact) j["exact"] = big_to_string(*w.exact);
      if (N < 0) {
        const Weight c = weight_cumulative(spec, M_int);
        j["log_cumulative"] = c.log_value;
        if (c.exact) j["cumulative_exact"] = big_to_string(*c.exact);
      }
    } else if (*coeffs) {
      if (exact_int) {
        for (const auto& c : gen_function_coeffs_exact(spec, M_max)) j.push_back(big_to_string(c));
      } else {
        j = gen_function_coeffs(spec, M_max);
      }
    } else if (*enumer) {
      EnumerationOptions opts;
      opts.cap = cap;
      if (N >= 0) opts.N = N;
      std::ostringstream os;
      os.precision(17);
      if (format == "csv") os << "energy,particles,occupations,weight\n";
      enumerate(
          spec, M_int,
          [&](const EnumeratedConfig& e) {
            if (format == "csv") {
              os << e.config.energy() << ',' << e.config.particles() << ",\"" << e.config.to_string() << "\","
                 << e.weight << '\n';
            } else {
              json row = {{"energy", e.config.energy()},
                          {"particles", e.config.particles()},
                          {"occupations", e.config.counts()},
                          {"weight", e.weight}};
              if (spec.is_integral()) row["exact_weight"] = big_to_string(e.exact_weight);
              j.push_back(row);
            }
          },
          opts);
      if (format == "csv") {
        emit(os.str(), out_path);
        return kExitPass;
      }
    } else if (*sample) {
      const std::uint64_t s = effective_seed(seed);
      SampleBatch batch;
      if (N >= 0) {
        if (scheme != "exact") throw std::invalid_argument("fixed-N sampling supports only the exact scheme");
        batch = sample_fixed(WeightTable::fixed(spec, M_int, N), M_int, N, s, count);
      } else if (scheme == "exact") {
        batch = sample_variable(WeightTable::variable(spec, M_int), M_int, s, count);
      } else {
        batch = sample_boltzmann(spec, solve_b(spec, static_cast<double>(M_int)).b, M_int, s, count);
      }
      emit(sample_csv(batch, width), out_path);
      return kExitPass;
    } else if (*saddle) {
      const ActionProfile a = action(spec, static_cast<double>(M_int));
      const ContourWeight c = contour_weight(spec, M_int);
      const Weight w = weight_exact_energy(spec, M_int);
      j = {{"M", M_int},
           {"b", a.b},
           {"log_weight_contour", c.log_weight},
           {"log_weight_exact", w.log_value},
           {"rel_err", std::expm1(c.log_weight - w.log_value)},
           {"S_M", a.S_M},
           {"S2", a.S2},
           {"S3_bound", a.S3_bound},
           {"K", a.K},
           {"zone_fractions",
            {c.zone_integral[0] / c.integral, c.zone_integral[1] / c.integral, c.zone_integral[2] / c.integral}}};
      int status = kExitPass;
      if (!bounds_list.empty()) {
        const BoundsReport rep = check_bounds(spec, parse_list(bounds_list));
        json rows = json::array();
        for (const auto& r : rep.rows)
          rows.push_back({{"M", r.M},
                          {"r1", r.r1},
                          {"delta", r.delta},
                          {"log_w_deviation", r.log_w_deviation},
                          {"log_bound", r.log_bound},
                          {"upper_bound_ok", r.upper_bound_ok}});
        j["bounds"] = {{"rows", rows}, {"r1_min", rep.r1_min}, {"r1_max", rep.r1_max}, {"r1_ok", rep.r1_ok},
                       {"upper_bounds_ok", rep.upper_bounds_ok}};
        if (!rep.r1_ok || !rep.upper_bounds_ok) status = kExitBreach;
      }
      emit(j.dump(2), out_path);
      return status;
    } else if (*experiment) {
      ExperimentOptions opts;
      opts.bar = bar;
      const std::uint64_t s = effective_seed(seed);
      const ChiFunction chi = ChiFunction::parse(chi_text);
      ExperimentReport r;
      if (*ex_dev)
        r = run_deviation(spec, static_cast<std::int64_t>(M), LevelCoefficients::parse(f_text), count, s, chi, opts);
      else if (*ex_cond)
        r = run_condensation(spec, static_cast<std::int64_t>(M), N, count, s, chi, opts);
      else if (*ex_col)
        r = run_coloring(spec, M, parse_list(K_text), opts);
      else
        r = run_profile(spec, static_cast<std::int64_t>(M), x1, x2, grid, count, s, opts);
      emit(r.to_json(), out_path);
      if (!csv_path.empty()) emit(r.to_csv(), csv_path);
      return r.pass ? kExitPass : kExitBreach;
    }
    emit(j.dump(2), out_path);
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
