#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "polyproj/oracle.hpp"
#include "polyproj/projection.hpp"

using namespace polyproj;
using namespace polyproj::oracle;

namespace {

double dist(const RealVector& a, const RealVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("inequality enumeration") {
  CHECK(enumerate_parity_inequalities(2).size() == 2);
  CHECK(enumerate_parity_inequalities(3).size() == 4);
  CHECK(enumerate_parity_inequalities(4).size() == 8);
  CHECK(enumerate_parity_inequalities(16).size() == 32768);
  for (const auto& q : enumerate_parity_inequalities(5)) {
    const int w = std::accumulate(q.subset.begin(), q.subset.end(), 0);
    CHECK(w % 2 == 1);
    CHECK(q.bound == w - 1);
  }
  const auto d2 = enumerate_parity_inequalities(2);
  CHECK(d2[0].bound == 0);
  CHECK(d2[1].bound == 0);
  CHECK_THROWS_AS(enumerate_parity_inequalities(1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_parity_inequalities(17), std::invalid_argument);
}

TEST_CASE("violation measure") {
  CHECK(parity_polytope_violation(RealVector{0.5, 0.5, 0.5}) <= 0);
  CHECK(parity_polytope_violation(RealVector{1, 1, 1}) == doctest::Approx(1.0));
  CHECK(parity_polytope_violation(RealVector{1, 0, 0}) == doctest::Approx(1.0));
  CHECK(parity_polytope_violation(RealVector{1, 1, 0}) <= 1e-15);
}

TEST_CASE("Dykstra examples") {
  const auto c = dykstra_pp(RealVector{0.5, 0.5, 0.5});
  CHECK(dist(c.x, {0.5, 0.5, 0.5}) <= 1e-9);
  CHECK(dist(dykstra_pp_oracle(RealVector{1, 1, 1}), {2.0 / 3, 2.0 / 3, 2.0 / 3}) <= 1e-8);
  CHECK(dist(dykstra_pp_oracle(RealVector{0.9, 0.1, 0.05}), {0.65, 0.35, 0.30}) <= 1e-8);
}

TEST_CASE("Dykstra reports convergence and fails loudly") {
  const RealVector v{3.0, -2.0, 1.7, 0.4, 2.2};
  const auto r = dykstra_pp(v);
  CHECK(r.iterations >= 1);
  CHECK(r.last_step < 1e-9);
  CHECK_THROWS_AS(dykstra_pp(v, 1e-9, 1), ConvergenceError);
  try {
    dykstra_pp(v, 1e-9, 2);
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.last_step() > 0);
  }
  CHECK_THROWS_AS(dykstra_pp(RealVector{0.1}), std::invalid_argument);
  CHECK_THROWS_AS(dykstra_pp(RealVector(11, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(dykstra_pp(v, 0.0), std::invalid_argument);
}

TEST_CASE("bisection oracle") {
  const auto a = bisection_simplex_oracle(RealVector{0, 0, 0});
  for (double x : a) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(dist(bisection_simplex_oracle(RealVector{2, 0}), {1, 0}) <= 1e-12);
  CHECK(dist(bisection_simplex_oracle(RealVector{5}), {1}) <= 1e-12);
  CHECK_THROWS_AS(bisection_simplex_oracle(RealVector{}), std::invalid_argument);
}

TEST_CASE("oracle outputs are feasible") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0, 4);
  for (int d = 2; d <= 8; ++d) {
    for (int t = 0; t < 100; ++t) {
      RealVector v(static_cast<std::size_t>(d));
      for (auto& x : v) x = g(rng);
      CHECK(parity_polytope_violation(dykstra_pp_oracle(v)) <= 1e-8);
      const auto s = bisection_simplex_oracle(v);
      CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("fast projections agree with the oracles, including argmin ties") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> g(0.5, 1.0);
  for (int d = 2; d <= 8; ++d) {
    for (int t = 0; t < 300; ++t) {
      RealVector v(static_cast<std::size_t>(d));
      for (auto& x : v) x = g(rng);
      CHECK(dist(project_parity_polytope(v), dykstra_pp_oracle(v)) <= 1e-6);
      CHECK(dist(project_simplex(v), bisection_simplex_oracle(v)) <= 1e-9);
    }
  }
  // ties in the distance to 1/2
  for (const RealVector& v : {RealVector{0.6, 0.6}, RealVector{0.6, 0.4, 0.6, 0.4},
                              RealVector{0.7, 0.7, 0.3, 0.9}, RealVector{0.5, 0.5, 0.5, 0.5}}) {
    CHECK(dist(project_parity_polytope(v), dykstra_pp_oracle(v)) <= 1e-6);
  }
}
