#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyproj/projection.hpp"

// Slow reference projections used only to check the fast routines. Nothing
// here shares code with projection.cpp beyond the vector type aliases.

namespace polyproj::oracle {

/// sum_{i in subset} x_i - sum_{i not in subset} x_i <= bound, with an odd
/// subset and bound = |subset| - 1.
struct ParityInequality {
  FacetIndicator subset;
  double bound;

  [[nodiscard]] double slack(std::span<const double> x) const;
};

inline constexpr int kMinOracleDim = 2;
inline constexpr int kMaxEnumerationDim = 16;
inline constexpr int kMaxDykstraDim = 10;

/// All 2^(d-1) odd-cardinality subsets of {0..d-1}. Requires 2 <= d <= 16.
std::vector<ParityInequality> enumerate_parity_inequalities(int d);

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(long iterations, double last_step);
  [[nodiscard]] long iterations() const noexcept { return iterations_; }
  [[nodiscard]] double last_step() const noexcept { return last_step_; }

 private:
  long iterations_;
  double last_step_;
};

struct DykstraResult {
  RealVector x;
  long iterations = 0;      // full sweeps over every constraint set
  double last_step = 0.0;   // l2 movement accumulated over the final sweep
};

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr long kDefaultMaxIterations = 1'000'000;

/// Dykstra's alternating projections over the unit cube and every parity
/// half-space, keeping one correction vector per set. A sweep visits each
/// set once; iteration stops when the root-sum-square of all iterate moves
/// within a sweep drops below `tol`. Requires 2 <= d <= 10 and tol > 0.
/// Throws ConvergenceError after `max_iter` sweeps.
DykstraResult dykstra_pp(std::span<const double> v, double tol = kDefaultTolerance,
                         long max_iter = kDefaultMaxIterations);

RealVector dykstra_pp_oracle(std::span<const double> v, double tol = kDefaultTolerance,
                             long max_iter = kDefaultMaxIterations);

/// Bisection on tau over [min(v) - 1, max(v)] for sum max(v_i - tau, 0) = 1,
/// until the bracket is narrower than `tol`.
RealVector bisection_simplex_oracle(std::span<const double> v, double tol = 1e-13);

/// max over all parity inequalities of the violation (0 if satisfied),
/// together with violation of the cube bounds. Requires d <= 16.
double parity_polytope_violation(std::span<const double> x);

}  // namespace polyproj::oracle
