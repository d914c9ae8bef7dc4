#include "boselab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "boselab/errors.hpp"
#include "boselab/special_sums.hpp"

namespace boselab {
namespace {

constexpr int kMaxBisection = 400;

// Caches q_j so repeated series evaluations inside the solvers skip pow().
class LevelCache {
 public:
  explicit LevelCache(const MultiplicitySpec& spec) : spec_(spec), q_(1, 0.0) {}

  double operator()(std::int64_t j) {
    if (j >= static_cast<std::int64_t>(q_.size())) {
      const auto want = std::max<std::int64_t>(j + 1, static_cast<std::int64_t>(q_.size()) * 2);
      for (auto i = static_cast<std::int64_t>(q_.size()); i < want; ++i) q_.push_back(spec_(i));
    }
    return q_[static_cast<std::size_t>(j)];
  }
  const MultiplicitySpec& spec() const { return spec_; }

 private:
  const MultiplicitySpec& spec_;
  std::vector<double> q_;
};

// sum_{j>=l} j^power q_j / (e^{beta j + mu} - 1), tail below abs_tol.
SeriesSum bose_series(LevelCache& q, double beta, double mu, int power, std::int64_t l, double abs_tol) {
  const double p = q.spec().d() - 1.0 + power;
  auto term = [&](std::int64_t j) {
    const double jd = static_cast<double>(j);
    const double w = power == 0 ? 1.0 : jd;
    return w * q(j) / std::expm1(beta * jd + mu);
  };
  auto tail = [&](std::int64_t J) {
    const double em = -std::expm1(-beta * static_cast<double>(J));
    return q.spec().envelope_constant(J) * power_exp_tail_bound(p, beta, static_cast<double>(J)) / em;
  };
  return detail::truncated_sum(term, l, beta, tail, abs_tol);
}

double lower_bound_first(LevelCache& q, double beta, double mu, int power, std::int64_t l) {
  const double jd = static_cast<double>(l);
  return (power == 0 ? 1.0 : jd) * q(l) / std::expm1(beta * jd + mu);
}

}  // namespace

double energy_sum(const MultiplicitySpec& spec, double b, double abs_tol, std::int64_t* j_cut) {
  if (!(b > 0.0)) throw std::domain_error("energy series needs b > 0");
  LevelCache q(spec);
  const auto r = bose_series(q, b, 0.0, 1, 1, abs_tol);
  if (j_cut) *j_cut = r.last_term;
  return r.value;
}

EquilibriumSolution solve_b(const MultiplicitySpec& spec, double M, double tol) {
  if (!(M > 0.0)) throw std::domain_error("solve_b needs M > 0");
  if (!(tol > 0.0)) throw std::domain_error("solve_b needs tol > 0");
  LevelCache q(spec);
  const double series_tol = std::min(tol, 1e-14) * M / 10.0;
  auto lhs = [&](double b) { return bose_series(q, b, 0.0, 1, 1, series_tol).value; };

  const double d = spec.d();
  const double b_star = std::pow(spec.Q() * gamma_zeta(d + 1.0) / M, 1.0 / (d + 1.0));
  double lo = b_star / 8.0;
  double hi = b_star * 8.0;
  int guard = 0;
  while (lhs(lo) <= M) {
    hi = lo;
    lo /= 8.0;
    if (++guard > 200) throw NumericError("solve_b: could not bracket the root from below");
  }
  while (lhs(hi) >= M) {
    lo = hi;
    hi *= 8.0;
    if (++guard > 200) throw NumericError("solve_b: could not bracket the root from above");
  }
  int it = 0;
  for (; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (lhs(mid) > M)
      lo = mid;
    else
      hi = mid;
  }
  EquilibriumSolution sol;
  sol.M = M;
  sol.iterations = it;
  const SeriesSum at_lo = bose_series(q, lo, 0.0, 1, 1, series_tol);
  const SeriesSum at_hi = bose_series(q, hi, 0.0, 1, 1, series_tol);
  const bool pick_lo = std::abs(at_lo.value - M) <= std::abs(at_hi.value - M);
  sol.b = pick_lo ? lo : hi;
  sol.residual = (pick_lo ? at_lo.value : at_hi.value) - M;
  sol.j_cut = pick_lo ? at_lo.last_term : at_hi.last_term;
  if (std::abs(sol.residual) > tol * std::max(1.0, M))
    throw NumericError("solve_b: residual " + std::to_string(sol.residual) + " exceeds tolerance");
  sol.Nbar = total_occupation(spec, sol.b);
  return sol;
}

double occupation(const MultiplicitySpec& spec, double b, std::int64_t j) {
  if (!(b > 0.0)) throw std::domain_error("occupation needs b > 0");
  if (j < 1) throw std::domain_error("occupation needs j >= 1");
  return spec(j) / std::expm1(b * static_cast<double>(j));
}

double total_occupation(const MultiplicitySpec& spec, double b, double rel_tol) {
  return cumulative_tail(spec, b, 1, rel_tol);
}

double cumulative_tail(const MultiplicitySpec& spec, double b, std::int64_t l, double rel_tol) {
  if (!(b > 0.0)) throw std::domain_error("occupation sums need b > 0");
  if (l < 1) throw std::domain_error("cumulative_tail needs l >= 1");
  LevelCache q(spec);
  return bose_series(q, b, 0.0, 0, l, rel_tol * lower_bound_first(q, b, 0.0, 0, l)).value;
}

ChiFunction ChiFunction::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant chi must be positive");
  ChiFunction f;
  f.kind_ = Kind::constant;
  f.value_ = c;
  return f;
}

ChiFunction ChiFunction::parse(std::string_view id) {
  if (id == "loglog") return {};
  if (id.rfind("const:", 0) == 0) {
    const std::string v(id.substr(6));
    std::size_t pos = 0;
    double c = 0.0;
    try {
      c = std::stod(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != v.size() || v.empty()) throw std::invalid_argument("bad chi constant '" + v + "'");
    return constant(c);
  }
  throw std::invalid_argument("unknown chi '" + std::string(id) + "' (use loglog or const:<v>)");
}

double ChiFunction::operator()(double x) const {
  if (kind_ == Kind::constant) return value_;
  return 1.0 + std::log1p(std::log1p(x));
}

std::string ChiFunction::id() const {
  if (kind_ == Kind::loglog) return "loglog";
  std::string s = std::to_string(value_);
  return "const:" + s;
}

DeltaSpec deviation_radius(double Nbar, double d, const ChiFunction& chi) {
  if (!(Nbar > std::numbers::e)) throw std::domain_error("deviation radius needs Nbar > e");
  if (!(d > 1.0)) throw std::domain_error("deviation radius needs d > 1");
  const double ln = std::log(Nbar);
  DeltaSpec out{chi, Nbar, d, 0.0};
  if (d > 2.0)
    out.delta = std::sqrt(Nbar * ln) * chi(Nbar);
  else
    out.delta = std::pow(Nbar, 1.0 / d) * ln * chi(Nbar);
  return out;
}

double threshold(const MultiplicitySpec& spec, double M, double tol) { return solve_b(spec, M, tol).Nbar; }

Regime classify(const MultiplicitySpec& spec, double M, double N, double tol) {
  const double t = threshold(spec, M, tol);
  return {N > t ? RegimeKind::condensed : RegimeKind::normal, t, N};
}

double grand_canonical_occupation(const MultiplicitySpec& spec, double beta, double mu, std::int64_t j) {
  if (j < 0) throw std::domain_error("level must be >= 0");
  const double q = j == 0 ? spec.q0() : spec(j);
  return q / std::expm1(beta * static_cast<double>(j) + mu);
}

GrandCanonicalSolution solve_beta_mu(const MultiplicitySpec& spec, double M, double N, double tol) {
  if (!(N > 0.0)) throw std::domain_error("solve_beta_mu needs N > 0");
  const EquilibriumSolution eq = solve_b(spec, M, tol);
  if (N > eq.Nbar)
    throw RegimeError("N = " + std::to_string(N) + " exceeds the threshold " + std::to_string(eq.Nbar) +
                      "; the system is condensed");
  LevelCache q(spec);
  auto series = [&](double beta, double mu, int power) {
    const double first = lower_bound_first(q, beta, mu, power, 1);
    return bose_series(q, beta, mu, power, 1, 1e-16 * first).value;
  };
  auto particles = [&](double beta, double mu) { return spec.q0() / std::expm1(mu) + series(beta, mu, 0); };

  // Particle count is decreasing in mu, from +inf at mu -> 0.
  auto solve_mu = [&](double beta) {
    double hi = 1.0;
    while (particles(beta, hi) > N) hi *= 2.0;
    double lo = hi / 2.0;
    while (particles(beta, lo) < N) {
      hi = lo;
      lo /= 2.0;
      if (lo < 1e-300) throw NumericError("solve_beta_mu: mu underflow");
    }
    for (int i = 0; i < kMaxBisection; ++i) {
      const double mid = std::sqrt(lo * hi);
      if (!(mid > lo && mid < hi)) break;
      if (particles(beta, mid) > N)
        lo = mid;
      else
        hi = mid;
    }
    const double r_lo = std::abs(particles(beta, lo) - N);
    const double r_hi = std::abs(particles(beta, hi) - N);
    return r_lo <= r_hi ? lo : hi;
  };
  // Energy at the particle-matched mu is decreasing in beta; beta <= b.
  auto energy = [&](double beta) { return series(beta, solve_mu(beta), 1); };
  double hi = eq.b;
  double lo = eq.b / 2.0;
  int guard = 0;
  while (energy(lo) < M) {
    hi = lo;
    lo /= 2.0;
    if (++guard > 200) throw NumericError("solve_beta_mu: could not bracket beta");
  }
  for (int i = 0; i < kMaxBisection; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (energy(mid) > M)
      lo = mid;
    else
      hi = mid;
  }
  GrandCanonicalSolution best;
  double best_score = std::numeric_limits<double>::infinity();
  for (double beta : {lo, hi}) {
    const double mu = solve_mu(beta);
    GrandCanonicalSolution s{beta, mu, particles(beta, mu) - N, series(beta, mu, 1) - M};
    const double score = std::abs(s.residual_M) / std::max(1.0, M);
    if (score < best_score) {
      best_score = score;
      best = s;
    }
  }
  if (std::abs(best.residual_N) > tol * std::max(1.0, N) || std::abs(best.residual_M) > tol * std::max(1.0, M))
    throw NumericError("solve_beta_mu: residuals exceed tolerance");
  return best;
}

CondensedProfile condensed_profile(const MultiplicitySpec& spec, double M, double N, double tol) {
  const EquilibriumSolution eq = solve_b(spec, M, tol);
  if (!(N > eq.Nbar))
    throw RegimeError("N = " + std::to_string(N) + " does not exceed the threshold " + std::to_string(eq.Nbar));
  return {N - eq.Nbar, eq.b, eq.Nbar};
}

double coloring_threshold(const MultiplicitySpec& spec, double M, std::int64_t K, double tol) {
  if (K < 1) throw std::invalid_argument("number of colours must be >= 1");
  return threshold(spec.scaled(static_cast<double>(K)), M, tol);
}

}  // namespace boselab
