#include "polyproj/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace polyproj {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite component");
  }
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

// Threshold s_rho for the simplex scaled to `z` (z = 1 for S_d).
double simplex_threshold(std::span<const double> v, double z) {
  std::vector<double> mu(v.begin(), v.end());
  std::sort(mu.begin(), mu.end(), std::greater<>());
  double prefix = 0.0;
  double threshold = mu.front() - z;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    prefix += mu[i];
    const double s = (prefix - z) / static_cast<double>(i + 1);
    if (mu[i] > s) threshold = s;
  }
  return threshold;
}

}  // namespace

RealVector project_unit_cube(std::span<const double> v) {
  require_finite(v, "project_unit_cube");
  RealVector out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::clamp(x, 0.0, 1.0); });
  return out;
}

RealVector transform_tf(std::span<const double> v, std::span<const std::uint8_t> f) {
  require_same_length(v.size(), f.size(), "transform_tf");
  RealVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f[i] ? 1.0 - v[i] : v[i];
  return out;
}

FacetIndicator cut_search(std::span<const double> v_hat) {
  require_finite(v_hat, "cut_search");
  FacetIndicator f(v_hat.size());
  int weight = 0;
  for (std::size_t i = 0; i < v_hat.size(); ++i) {
    f[i] = v_hat[i] > 0.5 ? 1 : 0;
    weight += f[i];
  }
  if (weight % 2 == 0) {
    std::size_t closest = 0;
    for (std::size_t i = 1; i < v_hat.size(); ++i) {
      if (std::abs(0.5 - v_hat[i]) < std::abs(0.5 - v_hat[closest])) closest = i;
    }
    f[closest] ^= 1;
  }
  return f;
}

bool pp_membership_test(std::span<const double> v, std::span<const std::uint8_t> f) {
  require_same_length(v.size(), f.size(), "pp_membership_test");
  const RealVector clamped = project_unit_cube(transform_tf(v, f));
  double sum = 0.0;
  for (double x : clamped) sum += x;
  return sum >= 1.0;
}

RealVector project_simplex(std::span<const double> v) {
  require_finite(v, "project_simplex");
  const double threshold = simplex_threshold(v, 1.0);
  RealVector w(v.size());
  std::transform(v.begin(), v.end(), w.begin(),
                 [threshold](double x) { return std::clamp(x - threshold, 0.0, 1.0); });
  return w;
}

RealVector project_parity_polytope(std::span<const double> v) {
  require_finite(v, "project_parity_polytope");
  if (v.size() < 2) {
    throw std::invalid_argument("project_parity_polytope: dimension must be >= 2");
  }
  RealVector v_hat = project_unit_cube(v);
  const FacetIndicator f = cut_search(v_hat);
  if (pp_membership_test(v, f)) return v_hat;
  return transform_tf(project_simplex(transform_tf(v, f)), f);
}

RealVector project_l1_ball(std::span<const double> v, double radius) {
  require_finite(v, "project_l1_ball");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("project_l1_ball: radius must be positive and finite");
  }
  double norm = 0.0;
  RealVector magnitude(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    magnitude[i] = std::abs(v[i]);
    norm += magnitude[i];
  }
  if (norm <= radius) return {v.begin(), v.end()};
  const double threshold = simplex_threshold(magnitude, radius);
  RealVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::copysign(std::max(magnitude[i] - threshold, 0.0), v[i]);
  }
  return out;
}

}  // namespace polyproj
