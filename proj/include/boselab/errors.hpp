#pragma once

#include <stdexcept>
#include <string>

namespace boselab {

/// Raised when a query falls in the wrong condensation regime (for example,
/// asking for (beta, mu) above the threshold).
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A weight table or enumeration would exceed its configured budget.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, long long suggested_stride = 0)
      : std::runtime_error(what), suggested_stride_(suggested_stride) {}
  long long suggested_stride() const noexcept { return suggested_stride_; }

 private:
  long long suggested_stride_;
};

/// Quadrature or root finding failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Importance sampler acceptance fell below the usable level.
class EfficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace boselab
