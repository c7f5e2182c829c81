#include "polyproj/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace polyproj::oracle {
namespace {

void require_dim(std::size_t d, int max_dim, const char* what) {
  if (d < static_cast<std::size_t>(kMinOracleDim) || d > static_cast<std::size_t>(max_dim)) {
    throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(d) +
                                " outside [2, " + std::to_string(max_dim) + "]");
  }
}

// Odd subsets as bitmasks, in increasing mask order.
std::vector<std::uint32_t> odd_masks(int d) {
  std::vector<std::uint32_t> masks;
  masks.reserve(std::size_t{1} << (d - 1));
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << d); ++m) {
    if (std::popcount(m) % 2 == 1) masks.push_back(m);
  }
  return masks;
}

}  // namespace

double ParityInequality::slack(std::span<const double> x) const {
  double lhs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) lhs += subset[i] ? x[i] : -x[i];
  return bound - lhs;
}

std::vector<ParityInequality> enumerate_parity_inequalities(int d) {
  require_dim(static_cast<std::size_t>(std::max(d, 0)), kMaxEnumerationDim,
              "enumerate_parity_inequalities");
  std::vector<ParityInequality> out;
  for (std::uint32_t m : odd_masks(d)) {
    FacetIndicator subset(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) subset[i] = (m >> i) & 1U;
    out.push_back({std::move(subset), static_cast<double>(std::popcount(m) - 1)});
  }
  return out;
}

ConvergenceError::ConvergenceError(long iterations, double last_step)
    : std::runtime_error("Dykstra iteration did not converge after " + std::to_string(iterations) +
                         " sweeps (last step " + std::to_string(last_step) + ")"),
      iterations_(iterations),
      last_step_(last_step) {}

DykstraResult dykstra_pp(std::span<const double> v, double tol, long max_iter) {
  require_dim(v.size(), kMaxDykstraDim, "dykstra_pp");
  if (!(tol > 0.0)) throw std::invalid_argument("dykstra_pp: tol must be positive");
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("dykstra_pp: non-finite component");
  }
  const int d = static_cast<int>(v.size());
  const auto masks = odd_masks(d);
  std::vector<double> bounds(masks.size());
  for (std::size_t k = 0; k < masks.size(); ++k) bounds[k] = std::popcount(masks[k]) - 1.0;

  // Half-space corrections are always multiples of the constraint normal,
  // so one scalar per constraint suffices: p_k = lambda_k * a_k.
  std::vector<double> lambda(masks.size(), 0.0);
  std::vector<double> cube_correction(static_cast<std::size_t>(d), 0.0);
  RealVector x(v.begin(), v.end());
  const double dd = d;

  double step = 0.0;
  for (long sweep = 1; sweep <= max_iter; ++sweep) {
    double moved_sq = 0.0;
    for (int i = 0; i < d; ++i) {
      const double y = x[i] + cube_correction[i];
      const double projected = std::clamp(y, 0.0, 1.0);
      cube_correction[i] = y - projected;
      moved_sq += (projected - x[i]) * (projected - x[i]);
      x[i] = projected;
    }
    for (std::size_t k = 0; k < masks.size(); ++k) {
      const std::uint32_t m = masks[k];
      double ax = 0.0;
      for (int i = 0; i < d; ++i) ax += ((m >> i) & 1U) ? x[i] : -x[i];
      const double next = std::max(0.0, lambda[k] + (ax - bounds[k]) / dd);
      const double delta = lambda[k] - next;
      if (delta != 0.0) {
        for (int i = 0; i < d; ++i) x[i] += ((m >> i) & 1U) ? delta : -delta;
        moved_sq += delta * delta * dd;
      }
      lambda[k] = next;
    }
    step = std::sqrt(moved_sq);
    if (step < tol) return {std::move(x), sweep, step};
  }
  throw ConvergenceError(max_iter, step);
}

RealVector dykstra_pp_oracle(std::span<const double> v, double tol, long max_iter) {
  return dykstra_pp(v, tol, max_iter).x;
}

RealVector bisection_simplex_oracle(std::span<const double> v, double tol) {
  if (v.empty()) throw std::invalid_argument("bisection_simplex_oracle: empty vector");
  if (!(tol > 0.0)) throw std::invalid_argument("bisection_simplex_oracle: tol must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  double lo = *lo_it - 1.0;  // mass >= 1 here
  double hi = *hi_it;        // mass == 0 here
  auto mass = [&](double tau) {
    double s = 0.0;
    for (double x : v) s += std::max(x - tau, 0.0);
    return s;
  };
  for (int guard = 0; guard < 2000 && hi - lo > tol; ++guard) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mass(mid) >= 1.0 ? lo : hi) = mid;
  }
  const double tau = 0.5 * (lo + hi);
  RealVector w(v.size());
  std::transform(v.begin(), v.end(), w.begin(), [tau](double x) { return std::max(x - tau, 0.0); });
  return w;
}

double parity_polytope_violation(std::span<const double> x) {
  require_dim(x.size(), kMaxEnumerationDim, "parity_polytope_violation");
  double worst = 0.0;
  for (double xi : x) worst = std::max({worst, -xi, xi - 1.0});
  for (const auto& ineq : enumerate_parity_inequalities(static_cast<int>(x.size()))) {
    worst = std::max(worst, -ineq.slack(x));
  }
  return worst;
}

}  // namespace polyproj::oracle
