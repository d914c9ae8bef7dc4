#include "boselab/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace boselab {
namespace {

bool is_whole(double x) { return std::isfinite(x) && x == std::floor(x); }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in multiplicity spec: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("bad number in multiplicity spec: '" + s + "'");
  return v;
}

// "d=3,Q=1,q0=1" -> callback(key, value)
template <class F>
void parse_params(const std::string& body, F&& on_param) {
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + item + "'");
    on_param(trim(item.substr(0, eq)), parse_number(trim(item.substr(eq + 1))));
  }
}

// `K` receives the optional colour factor, applied by the caller.
MultiplicitySpec parse_rule(const std::string& rule, double& K) {
  auto colon = rule.find(':');
  std::string head = trim(rule.substr(0, colon));
  std::string body = colon == std::string::npos ? std::string{} : rule.substr(colon + 1);
  double d = 0.0, Q = 1.0, q0 = 1.0;
  bool have_d = false;
  parse_params(body, [&](const std::string& k, double v) {
    if (k == "d") {
      d = v;
      have_d = true;
    } else if (k == "Q") {
      Q = v;
    } else if (k == "q0") {
      q0 = v;
    } else if (k == "K") {
      K = v;
    } else {
      throw std::invalid_argument("unknown multiplicity parameter '" + k + "'");
    }
  });
  if (!have_d) throw std::invalid_argument("multiplicity rule '" + head + "' needs d=");
  if (head == "power") return MultiplicitySpec::power_law(d, Q, q0);
  if (head == "osc") {
    if (!is_whole(d)) throw std::invalid_argument("oscillator needs integer d");
    return MultiplicitySpec::oscillator(static_cast<int>(d), q0);
  }
  throw std::invalid_argument("unknown multiplicity rule '" + head + "'");
}

}  // namespace

MultiplicitySpec MultiplicitySpec::power_law(double d, double Q, double q0) {
  if (!(d > 1.0)) throw std::invalid_argument("multiplicity dimension d must exceed 1");
  if (!(Q > 0.0)) throw std::invalid_argument("power-law coefficient Q must be positive");
  if (!(q0 >= 1.0)) throw std::invalid_argument("ground multiplicity q0 must be >= 1");
  MultiplicitySpec s;
  s.kind_ = s.tail_kind_ = MultiplicityKind::power_law;
  s.d_ = d;
  s.Q_ = Q;
  s.q0_ = q0;
  s.refresh_integrality();
  return s;
}

MultiplicitySpec MultiplicitySpec::oscillator(int d, double q0) {
  if (d < 2) throw std::invalid_argument("oscillator multiplicities need integer d >= 2");
  if (!(q0 >= 1.0)) throw std::invalid_argument("ground multiplicity q0 must be >= 1");
  MultiplicitySpec s;
  s.kind_ = s.tail_kind_ = MultiplicityKind::oscillator;
  s.d_ = d;
  s.Q_ = 1.0 / std::tgamma(static_cast<double>(d));
  s.q0_ = q0;
  s.refresh_integrality();
  return s;
}

MultiplicitySpec MultiplicitySpec::tabled(std::vector<double> prefix, const MultiplicitySpec& tail) {
  if (tail.kind_ == MultiplicityKind::tabled_with_power_tail)
    throw std::invalid_argument("table tail must be a power or oscillator rule");
  for (double v : prefix)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("tabled multiplicities must be positive");
  MultiplicitySpec s = tail;
  s.kind_ = MultiplicityKind::tabled_with_power_tail;
  s.tail_kind_ = tail.kind_;
  s.table_ = std::move(prefix);
  s.refresh_integrality();
  return s;
}

MultiplicitySpec MultiplicitySpec::parse(std::string_view text) {
  std::string t = trim(text);
  if (t.rfind("table:", 0) == 0) {
    auto semi = t.find(';');
    if (semi == std::string::npos) throw std::invalid_argument("table spec needs ';<tail rule>'");
    std::string list = trim(t.substr(6, semi - 6));
    if (list.size() < 2 || list.front() != '[' || list.back() != ']')
      throw std::invalid_argument("table values must be bracketed: [a,b,...]");
    std::vector<double> values;
    std::stringstream ss(list.substr(1, list.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) values.push_back(parse_number(item));
    }
    double K = 1.0;
    auto tail = parse_rule(t.substr(semi + 1), K);
    return tabled(std::move(values), tail).scaled(K);
  }
  double K = 1.0;
  auto spec = parse_rule(t, K);
  return spec.scaled(K);
}

std::string MultiplicitySpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == MultiplicityKind::tabled_with_power_tail) {
    os << "table:[";
    for (std::size_t i = 0; i < table_.size(); ++i) os << (i ? "," : "") << table_[i];
    os << "];";
  }
  if (tail_kind_ == MultiplicityKind::oscillator)
    os << "osc:d=" << d_ << ",q0=" << q0_;
  else
    os << "power:d=" << d_ << ",Q=" << Q_ << ",q0=" << q0_;
  if (scale_ != 1.0) os << ",K=" << scale_;
  return os.str();
}

double MultiplicitySpec::Q() const noexcept { return scale_ * Q_; }

double MultiplicitySpec::tail_value(std::int64_t j) const {
  if (tail_kind_ == MultiplicityKind::oscillator) {
    // C(j+d-1, d-1) = prod_{i=1}^{d-1} (j+i)/i
    double c = 1.0;
    const int dm1 = static_cast<int>(d_) - 1;
    for (int i = 1; i <= dm1; ++i) c = c * static_cast<double>(j + i) / i;
    return c;
  }
  return Q_ * std::pow(static_cast<double>(j), d_ - 1.0);
}

double MultiplicitySpec::operator()(std::int64_t j) const {
  if (j < 1) throw std::out_of_range("multiplicity index must be >= 1");
  if (j <= static_cast<std::int64_t>(table_.size())) return scale_ * table_[j - 1];
  return scale_ * tail_value(j);
}

void MultiplicitySpec::refresh_integrality() {
  bool ok = is_whole(scale_) && is_whole(q0_);
  for (double v : table_) ok = ok && is_whole(v);
  if (tail_kind_ == MultiplicityKind::power_law) ok = ok && is_whole(Q_) && is_whole(d_);
  integral_ = ok;
}

std::int64_t MultiplicitySpec::integral_at(std::int64_t j) const {
  if (!integral_) throw std::logic_error("multiplicities are not integral");
  if (j < 1) throw std::out_of_range("multiplicity index must be >= 1");
  const auto k = static_cast<std::int64_t>(scale_);
  if (j <= static_cast<std::int64_t>(table_.size())) return k * static_cast<std::int64_t>(table_[j - 1]);
  __int128 c = 1;
  if (tail_kind_ == MultiplicityKind::oscillator) {
    const int dm1 = static_cast<int>(d_) - 1;
    for (int i = 1; i <= dm1; ++i) c = c * (j + i) / i;
  } else {
    c = static_cast<std::int64_t>(Q_);
    for (int i = 0; i < static_cast<int>(d_) - 1; ++i) c *= j;
  }
  c *= k;
  if (c > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("integral multiplicity exceeds 64 bits");
  return static_cast<std::int64_t>(c);
}

std::int64_t MultiplicitySpec::integral_q0() const {
  if (!integral_) throw std::logic_error("multiplicities are not integral");
  return static_cast<std::int64_t>(q0_);
}

double MultiplicitySpec::envelope_constant(std::int64_t j_from) const {
  j_from = std::max<std::int64_t>(j_from, 1);
  double B = 0.0;
  for (std::int64_t j = j_from; j <= static_cast<std::int64_t>(table_.size()); ++j)
    B = std::max(B, (*this)(j) / std::pow(static_cast<double>(j), d_ - 1.0));
  const std::int64_t t0 = std::max<std::int64_t>(j_from, static_cast<std::int64_t>(table_.size()) + 1);
  if (tail_kind_ == MultiplicityKind::oscillator) {
    // prod (j+i)/(i j) decreases in j, so its value at t0 bounds the tail.
    double c = 1.0;
    const int dm1 = static_cast<int>(d_) - 1;
    for (int i = 1; i <= dm1; ++i) c *= (1.0 + static_cast<double>(i) / t0) / i;
    B = std::max(B, scale_ * c);
  } else {
    B = std::max(B, scale_ * Q_);
  }
  return B;
}

MultiplicitySpec MultiplicitySpec::scaled(double K) const {
  if (!(K > 0.0)) throw std::invalid_argument("multiplicity scale must be positive");
  MultiplicitySpec s = *this;
  s.scale_ *= K;
  s.refresh_integrality();
  return s;
}

MultiplicitySpec MultiplicitySpec::with_q0(double q0) const {
  if (!(q0 >= 1.0)) throw std::invalid_argument("ground multiplicity q0 must be >= 1");
  MultiplicitySpec s = *this;
  s.q0_ = q0;
  s.refresh_integrality();
  return s;
}

bool verify_envelope(const MultiplicitySpec& spec, double B1, double B2, std::int64_t j_max) {
  if (B1 > B2) throw std::invalid_argument("envelope needs B1 <= B2");
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const double p = std::pow(static_cast<double>(j), spec.d() - 1.0);
    const double q = spec(j);
    if (q < B1 * p || q > B2 * p) return false;
  }
  return true;
}

}  // namespace boselab
