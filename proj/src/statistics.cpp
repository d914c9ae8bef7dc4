#include "boselab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "boselab/equilibrium.hpp"

namespace boselab {

LevelCoefficients LevelCoefficients::zero() { return {}; }

LevelCoefficients LevelCoefficients::all_ones() {
  LevelCoefficients f;
  f.kind_ = Kind::all_ones;
  return f;
}

LevelCoefficients LevelCoefficients::tail_from(std::int64_t l) {
  if (l < 1) throw std::invalid_argument("tail_from needs l >= 1");
  LevelCoefficients f;
  f.kind_ = Kind::tail_from;
  f.l_ = l;
  return f;
}

LevelCoefficients LevelCoefficients::alternating() {
  LevelCoefficients f;
  f.kind_ = Kind::alternating;
  return f;
}

LevelCoefficients LevelCoefficients::custom(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("custom coefficients must be finite");
  LevelCoefficients f;
  f.kind_ = Kind::custom;
  f.values_ = std::move(values);
  return f;
}

LevelCoefficients LevelCoefficients::parse(const std::string& text) {
  if (text == "ones" || text == "all_ones") return all_ones();
  if (text == "zero") return zero();
  if (text == "alt" || text == "alternating") return alternating();
  if (text.rfind("tail:", 0) == 0) return tail_from(std::stoll(text.substr(5)));
  if (text.rfind("custom:[", 0) == 0 && text.back() == ']') {
    std::vector<double> values;
    std::stringstream ss(text.substr(8, text.size() - 9));
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    return custom(std::move(values));
  }
  throw std::invalid_argument("unknown coefficient choice '" + text + "'");
}

double LevelCoefficients::operator()(std::int64_t j) const noexcept {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::all_ones:
      return j >= 1 ? 1.0 : 0.0;
    case Kind::tail_from:
      return j >= l_ ? 1.0 : 0.0;
    case Kind::alternating:
      return j >= 1 ? (j % 2 == 0 ? 1.0 : -1.0) : 0.0;
    case Kind::custom:
      return j >= 0 && j < static_cast<std::int64_t>(values_.size()) ? values_[j] : 0.0;
  }
  return 0.0;
}

double LevelCoefficients::sup_abs() const noexcept {
  if (kind_ == Kind::zero) return 0.0;
  if (kind_ != Kind::custom) return 1.0;
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

std::string LevelCoefficients::to_string() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::all_ones:
      return "ones";
    case Kind::tail_from:
      return "tail:" + std::to_string(l_);
    case Kind::alternating:
      return "alt";
    case Kind::custom: {
      std::ostringstream os;
      os.precision(17);
      os << "custom:[";
      for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
      os << ']';
      return os.str();
    }
  }
  return "zero";
}

double LevelCoefficients::apply(const Configuration& c) const {
  const auto& n = c.counts();
  double s = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j)
    if (n[j] != 0) s += (*this)(static_cast<std::int64_t>(j)) * static_cast<double>(n[j]);
  return s;
}

namespace {

// Levels beyond j_cut have occupation below q_j e^{-60}.
std::int64_t cut_for(double rate) {
  return static_cast<std::int64_t>(std::ceil(60.0 / rate)) + 1;
}

}  // namespace

ReferenceProfile ReferenceProfile::variable(const MultiplicitySpec& spec, double M) {
  ReferenceProfile p(spec);
  const EquilibriumSolution eq = solve_b(spec, M);
  p.kind_ = Kind::variable;
  p.b_ = eq.b;
  p.Nbar_ = eq.Nbar;
  p.j_cut_ = cut_for(eq.b);
  return p;
}

ReferenceProfile ReferenceProfile::fixed(const MultiplicitySpec& spec, double M, double N) {
  ReferenceProfile p(spec);
  const Regime r = classify(spec, M, N);
  if (r.kind == RegimeKind::condensed) {
    const CondensedProfile c = condensed_profile(spec, M, N);
    p.kind_ = Kind::fixed_condensed;
    p.b_ = c.b;
    p.Nbar_ = c.Nbar;
    p.N0bar_ = c.N0bar;
    p.j_cut_ = cut_for(c.b);
    return p;
  }
  const GrandCanonicalSolution g = solve_beta_mu(spec, M, N);
  p.kind_ = Kind::fixed_normal;
  p.b_ = g.beta;
  p.mu_ = g.mu;
  p.N0bar_ = grand_canonical_occupation(spec, g.beta, g.mu, 0);
  p.Nbar_ = N - p.N0bar_;
  p.j_cut_ = cut_for(g.beta);
  return p;
}

double ReferenceProfile::occupation(std::int64_t j) const {
  if (j < 0) throw std::invalid_argument("levels are nonnegative");
  if (j == 0) return N0bar_;
  if (kind_ == Kind::fixed_normal) return grand_canonical_occupation(spec_, b_, mu_, j);
  return boselab::occupation(spec_, b_, j);
}

double ReferenceProfile::linear(const LevelCoefficients& f) const {
  switch (f.kind()) {
    case LevelCoefficients::Kind::zero:
      return 0.0;
    case LevelCoefficients::Kind::all_ones:
      if (kind_ != Kind::fixed_normal) return Nbar_;
      break;
    case LevelCoefficients::Kind::tail_from:
      if (kind_ != Kind::fixed_normal) return cumulative_tail(spec_, b_, f.l());
      break;
    default:
      break;
  }
  double s = f(0) * N0bar_;
  double c = 0.0;  // Neumaier compensation
  for (std::int64_t j = 1; j <= j_cut_; ++j) {
    const double fj = f(j);
    if (fj == 0.0) continue;
    const double t = fj * occupation(j);
    const double u = s + t;
    c += std::abs(s) >= std::abs(t) ? (s - u) + t : (t - u) + s;
    s = u;
  }
  return s + c;
}

}  // namespace boselab
