#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "boselab/multiplicity.hpp"
#include "boselab/equilibrium.hpp"
#include "boselab/statistics.hpp"

namespace boselab {

/// Quantities of the saddle-point analysis at the root b of the energy
/// equation.
struct ActionProfile {
  double M = 0.0;
  double b = 0.0;
  /// S(M) = b M + sum_j q_j ln(1 / (1 - e^{-bj}))
  double S_M = 0.0;
  /// S''(0) = -sum_j q_j j^2 e^{bj} / (e^{bj} - 1)^2
  double S2 = 0.0;
  /// sum_j q_j j^3 (e^{2bj} + e^{bj}) / (e^{bj} - 1)^3, which dominates |S'''|.
  double S3_bound = 0.0;
  /// (e^b / 2) sum_j q_j e^{bj/2} / (e^{bj/2} - 1)^2
  double K = 0.0;
  double Nbar = 0.0;
};

ActionProfile action(const MultiplicitySpec& spec, double M, double tol = 1e-12);

/// Levels kept in the phase: min(M, j) with b j >= 60 beyond the cut.
std::int64_t phase_levels(double M, double b);

/// S(phi) = i M phi + sum_{j<=J} q_j ln[(1 - e^{-bj}) / (1 - e^{-bj - ij phi})]
/// on the principal branch. J = 0 selects phase_levels(M, b).
std::complex<double> phase(const MultiplicitySpec& spec, double M, double b, double phi, std::int64_t J = 0);

/// Second central difference of Re S at 0 with step 1e-4 b^{(d+2)/2}.
double phase_curvature_fd(const MultiplicitySpec& spec, double M, double b);

struct ContourWeight {
  double log_weight = 0.0;  // log of the contour integral result
  double S_J = 0.0;         // b M + sum_{j<=J} q_j ln(1/(1 - e^{-bj}))
  double integral = 0.0;    // (1/2pi) int_{-pi}^{pi} e^{S(phi)} dphi
  double imag_rel = 0.0;    // |imaginary part| / real part
  std::array<double, 3> zone_integral{};  // D1, D2, D3 contributions to `integral`
  std::array<double, 3> zone_bounds{};    // right ends of D1, D2, D3 on [0, pi]
  std::int64_t levels = 0;
  int intervals = 0;
};

/// Zone constants; D1 = |phi| < delta1 b^{1+d/3}, D2 up to delta2 b.
inline constexpr double kZoneDelta1 = 1.0;
inline constexpr double kZoneDelta2 = 1.0;

/// w(Omega_M^0) as e^{S_J} (1/2pi) int e^{S(phi)} dphi over the three zones.
ContourWeight contour_weight(const MultiplicitySpec& spec, std::int64_t M, double rel_tol = 1e-11);

struct F21Check {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// lhs = Re Phi(x) - Re Phi(x + iy), rhs = (1/5) sum_j q_j e^{-jx} (1 - cos jy)
/// with Phi(xi) = sum_j q_j ln(1/(1 - e^{-j xi})).
F21Check verify_f21(const MultiplicitySpec& spec, double xi_re, double xi_im);

struct BoundsRow {
  std::int64_t M = 0;
  double b = 0.0;
  double S_M = 0.0;
  double K = 0.0;
  double log_w_cumulative = 0.0;
  double r1 = 0.0;  // w(Omega_M) e^{-S(M)} b^{-d/2-1}
  double delta = 0.0;
  double log_w_deviation = 0.0;                // log w(Omega_M(Delta)); -inf when empty
  std::vector<double> c_values;                // c in {0, b/4, b/2}
  std::vector<double> log_bound;               // S(M) - c Delta + c^2 K
  bool upper_bound_ok = true;
  bool exhaustive = false;                     // enumeration rather than the table
};

struct BoundsReport {
  std::vector<BoundsRow> rows;
  double r1_min = 0.0;
  double r1_max = 0.0;
  bool r1_ok = false;           // min > 0 and max/min < 100
  bool upper_bounds_ok = false;
};

/// Checks the lower bound on w(Omega_M) and the exponential upper bound on
/// w(Omega_M(Delta)) = w{sum_j f_j (N_j - Nbar_j) > Delta, energy <= M}.
/// f must be zero or all_ones unless every M fits the enumeration cap.
BoundsReport check_bounds(const MultiplicitySpec& spec, const std::vector<std::int64_t>& M_grid,
                          const LevelCoefficients& f = LevelCoefficients::all_ones(), const ChiFunction& chi = {});

}  // namespace boselab
