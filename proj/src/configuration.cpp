#include "boselab/configuration.hpp"

#include <sstream>
#include <stdexcept>

namespace boselab {

Configuration::Configuration(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    if (counts_[j] < 0) throw std::invalid_argument("occupation numbers must be nonnegative");
    energy_ += static_cast<std::int64_t>(j) * counts_[j];
    particles_ += counts_[j];
  }
  trim();
}

Configuration::Configuration(std::initializer_list<std::pair<std::int64_t, std::int64_t>> level_counts) {
  for (const auto& [level, n] : level_counts) set(level, count(level) + n);
}

void Configuration::set(std::int64_t level, std::int64_t n) {
  if (level < 0) throw std::invalid_argument("levels are nonnegative");
  if (n < 0) throw std::invalid_argument("occupation numbers must be nonnegative");
  if (level >= static_cast<std::int64_t>(counts_.size())) {
    if (n == 0) return;
    counts_.resize(static_cast<std::size_t>(level) + 1, 0);
  }
  const std::int64_t old = counts_[level];
  counts_[level] = n;
  energy_ += level * (n - old);
  particles_ += n - old;
  trim();
}

void Configuration::trim() {
  while (!counts_.empty() && counts_.back() == 0) counts_.pop_back();
}

std::string Configuration::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    if (counts_[j] == 0) continue;
    os << (first ? "" : " ") << j << ':' << counts_[j];
    first = false;
  }
  return os.str();
}

}  // namespace boselab
