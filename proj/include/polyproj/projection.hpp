#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Exact (double precision) Euclidean projections onto the unit cube, the
// probability simplex, the l1 ball and the parity polytope.
//
// The parity polytope PP_d is the convex hull of the even-weight vertices of
// [0,1]^d. Its projection runs in two branches: when the cube projection of v
// already lies in PP_d it is the answer; otherwise the answer is
// T_f(project_simplex(T_f(v))) for the facet pattern f chosen by cut_search.
//
// All functions are pure. Inputs must be non-empty and finite; violations
// throw std::invalid_argument.

namespace polyproj {

using RealVector = std::vector<double>;
/// Binary facet pattern, one entry per coordinate, each 0 or 1.
using FacetIndicator = std::vector<std::uint8_t>;

/// Componentwise clamp to [0, 1].
RealVector project_unit_cube(std::span<const double> v);

/// T_f(v)_i = 1 - v_i where f_i = 1, v_i otherwise. An involution.
RealVector transform_tf(std::span<const double> v, std::span<const std::uint8_t> f);

/// Facet pattern for a point of the unit cube: f_i = [v_hat_i > 1/2], and if
/// that has even weight the coordinate closest to 1/2 (lowest index on ties)
/// is flipped. The result always has odd weight.
FacetIndicator cut_search(std::span<const double> v_hat);

/// True iff sum(clamp(T_f(v))) >= 1, which for f = cut_search(clamp(v)) is
/// equivalent to clamp(v) lying in the parity polytope.
bool pp_membership_test(std::span<const double> v, std::span<const std::uint8_t> f);

/// Sort-and-threshold simplex projection: mu = v sorted descending,
/// s_i = (sum_{j<=i} mu_j - 1) / i, rho = max{i : mu_i > s_i},
/// w_i = max(v_i - s_rho, 0).
RealVector project_simplex(std::span<const double> v);

/// Projection onto PP_d. Requires d >= 2.
RealVector project_parity_polytope(std::span<const double> v);

/// Projection onto {x : ||x||_1 <= radius} through the simplex scaled to
/// `radius`, with signs restored. Requires radius > 0.
RealVector project_l1_ball(std::span<const double> v, double radius);

}  // namespace polyproj
