#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace boselab {

/// Finitely supported occupation sequence {N_j}, j >= 0, with cached energy
/// sum j N_j and particle count sum N_j. Level 0 is only populated by the
/// fixed-particle-number system.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<std::int64_t> counts);
  Configuration(std::initializer_list<std::pair<std::int64_t, std::int64_t>> level_counts);

  std::int64_t count(std::int64_t level) const noexcept {
    return level >= 0 && level < static_cast<std::int64_t>(counts_.size()) ? counts_[level] : 0;
  }
  void set(std::int64_t level, std::int64_t n);

  std::int64_t energy() const noexcept { return energy_; }
  std::int64_t particles() const noexcept { return particles_; }
  /// Highest occupied level, or -1 for the empty configuration.
  std::int64_t max_level() const noexcept { return static_cast<std::int64_t>(counts_.size()) - 1; }
  /// Counts indexed by level, trimmed so the last entry is nonzero.
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  /// "j:n" pairs for the occupied levels, e.g. "1:2 3:1".
  std::string to_string() const;

  friend bool operator==(const Configuration& a, const Configuration& b) { return a.counts_ == b.counts_; }
  friend bool operator<(const Configuration& a, const Configuration& b) { return a.counts_ < b.counts_; }

 private:
  void trim();
  std::vector<std::int64_t> counts_;
  std::int64_t energy_ = 0;
  std::int64_t particles_ = 0;
};

}  // namespace boselab
