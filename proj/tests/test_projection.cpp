#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "polyproj/projection.hpp"

using namespace polyproj;
using doctest::Approx;

namespace {

void check_close(const RealVector& got, const RealVector& want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

double dist(const RealVector& a, const RealVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

RealVector random_vector(std::mt19937_64& rng, int d, double sigma) {
  std::normal_distribution<double> g(0.5, sigma);
  RealVector v(static_cast<std::size_t>(d));
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("unit cube clamp") {
  CHECK(project_unit_cube(RealVector{0.5, -2.0, 3.0}) == RealVector{0.5, 0.0, 1.0});
  CHECK(project_unit_cube(RealVector{0.2, 0.8}) == RealVector{0.2, 0.8});
  CHECK(project_unit_cube(RealVector{1.0, 0.0}) == RealVector{1.0, 0.0});
}

TEST_CASE("similarity transform") {
  const FacetIndicator f{1, 0, 0};
  CHECK(transform_tf(RealVector{0.9, 0.1, 0.05}, f) == RealVector{1 - 0.9, 0.1, 0.05});
  CHECK(transform_tf(RealVector{0.3, 0.7}, FacetIndicator{0, 0}) == RealVector{0.3, 0.7});
  CHECK(transform_tf(transform_tf(RealVector{0.3}, FacetIndicator{1}), FacetIndicator{1})[0] ==
        Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(transform_tf(RealVector{0.3, 0.1}, FacetIndicator{1}), std::invalid_argument);
}

TEST_CASE("cut search") {
  CHECK(cut_search(RealVector{0.9, 0.8, 0.1}) == FacetIndicator{1, 0, 0});
  CHECK(cut_search(RealVector{0.9, 0.1, 0.05}) == FacetIndicator{1, 0, 0});
  // tie in distance: the lowest index is the one flipped
  CHECK(cut_search(RealVector{0.6, 0.6}) == FacetIndicator{0, 1});
  // exactly one half is not above the threshold
  CHECK(cut_search(RealVector{0.5, 0.2, 0.1}) == FacetIndicator{1, 0, 0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    RealVector v(7);
    for (auto& x : v) x = u(rng);
    const auto f = cut_search(v);
    CHECK(std::accumulate(f.begin(), f.end(), 0) % 2 == 1);
  }
}

TEST_CASE("membership test") {
  CHECK(pp_membership_test(RealVector{0.9, 0.8, 0.1}, FacetIndicator{1, 0, 0}));
  CHECK_FALSE(pp_membership_test(RealVector{0.9, 0.1, 0.05}, FacetIndicator{1, 0, 0}));
  const RealVector c{0.5, 0.5, 0.5};
  CHECK(pp_membership_test(c, cut_search(project_unit_cube(c))));
  CHECK_THROWS_AS(pp_membership_test(c, FacetIndicator{1}), std::invalid_argument);
}

TEST_CASE("simplex examples") {
  check_close(project_simplex(RealVector{0, 0, 0}), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  check_close(project_simplex(RealVector{2, 0}), {1, 0});
  check_close(project_simplex(RealVector{0.1, 0.1, 0.05}), {0.35, 0.35, 0.30});
  CHECK(project_simplex(RealVector{-7.5}) == RealVector{1.0});
}

TEST_CASE("parity polytope examples") {
  check_close(project_parity_polytope(RealVector{0.5, 0.5, 0.5}), {0.5, 0.5, 0.5});
  check_close(project_parity_polytope(RealVector{1, 1, 1}), {2.0 / 3, 2.0 / 3, 2.0 / 3});
  check_close(project_parity_polytope(RealVector{0.9, 0.1, 0.05}), {0.65, 0.35, 0.30});
  // even vertices are fixed points
  check_close(project_parity_polytope(RealVector{1, 1, 0, 0}), {1, 1, 0, 0});
  CHECK_THROWS_AS(project_parity_polytope(RealVector{0.3}), std::invalid_argument);
}

TEST_CASE("l1 ball") {
  CHECK(project_l1_ball(RealVector{0.2, -0.1}, 1.0) == RealVector{0.2, -0.1});
  check_close(project_l1_ball(RealVector{2, 0}, 1.0), {1, 0});
  check_close(project_l1_ball(RealVector{-2, 0}, 1.0), {-1, 0});
  check_close(project_l1_ball(RealVector{3, -1}, 2.0), {2, 0});
  const auto w = project_l1_ball(RealVector{1, -2, 3, -0.5}, 1.5);
  double n1 = 0;
  for (double x : w) n1 += std::abs(x);
  CHECK(n1 == Approx(1.5));
  CHECK_THROWS_AS(project_l1_ball(RealVector{1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(project_l1_ball(RealVector{1}, -1.0), std::invalid_argument);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(project_simplex(RealVector{}), std::invalid_argument);
  CHECK_THROWS_AS(project_unit_cube(RealVector{}), std::invalid_argument);
  CHECK_THROWS_AS(project_simplex(RealVector{1, NAN}), std::invalid_argument);
  CHECK_THROWS_AS(project_parity_polytope(RealVector{1, INFINITY}), std::invalid_argument);
}

TEST_CASE("feasibility") {
  std::mt19937_64 rng(21);
  for (int d = 2; d <= 12; ++d) {
    for (int t = 0; t < 500; ++t) {
      const auto v = random_vector(rng, d, 2.0);
      const auto w = project_simplex(v);
      CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1) <= 1e-12);
      CHECK(*std::min_element(w.begin(), w.end()) >= -1e-15);
      const auto x = project_parity_polytope(v);
      for (double xi : x) CHECK((xi >= 0 && xi <= 1));
    }
  }
}

TEST_CASE("idempotence, non-expansiveness, clamp commutes with the flip, permutation symmetry") {
  std::mt19937_64 rng(22);
  std::bernoulli_distribution coin(0.5);
  for (int d = 2; d <= 16; ++d) {
    CAPTURE(d);
    for (int t = 0; t < 300; ++t) {
      const auto u = random_vector(rng, d, 1.5);
      const auto v = random_vector(rng, d, 1.5);
      for (auto* proj : {&project_unit_cube, &project_simplex, &project_parity_polytope}) {
        const auto pu = (*proj)(u);
        CHECK(dist((*proj)(pu), pu) <= 1e-12);
        CHECK(dist(pu, (*proj)(v)) <= dist(u, v) + 1e-12);
      }
      FacetIndicator f(static_cast<std::size_t>(d));
      for (auto& b : f) b = coin(rng);
      CHECK(transform_tf(project_unit_cube(u), f) == project_unit_cube(transform_tf(u, f)));

      std::vector<int> perm(static_cast<std::size_t>(d));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      RealVector up(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) up[i] = u[perm[i]];
      const auto a = project_parity_polytope(u);
      const auto b = project_parity_polytope(up);
      for (int i = 0; i < d; ++i) CHECK(std::abs(b[i] - a[perm[i]]) <= 1e-12);
    }
  }
}
