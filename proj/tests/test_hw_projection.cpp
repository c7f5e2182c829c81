#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "polyproj/experiments.hpp"
#include "polyproj/hw_projection.hpp"
#include "polyproj/projection.hpp"

using namespace polyproj;

namespace {

constexpr FixedPointFormat s1_6{1, 6};

double dist(const RealVector& a, const RealVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

FixedVector random_fixed(std::mt19937_64& rng, int d, const FixedPointFormat& fmt, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealVector v(static_cast<std::size_t>(d));
  for (auto& x : v) x = u(rng);
  return quantize(v, fmt);
}

}  // namespace

TEST_CASE("configuration checks") {
  CHECK_NOTHROW(validate({3, s1_6, {0, 7}}, HwMode::simplex));
  CHECK_THROWS_AS(validate({3, s1_6, {1, 7}}, HwMode::simplex), std::invalid_argument);
  CHECK_THROWS_AS(validate({1, s1_6, s1_6}, HwMode::parity_polytope), std::invalid_argument);
  CHECK_THROWS_AS(validate({0, s1_6, s1_6}, HwMode::simplex), std::invalid_argument);
  CHECK_THROWS_AS(validate({3, {-1, 6}, s1_6}, HwMode::simplex), std::invalid_argument);
  const HwProjector p({3, s1_6, s1_6});
  CHECK_THROWS_AS(p.project_simplex(quantize(RealVector{0.1, 0.2}, s1_6)), std::invalid_argument);
  CHECK_THROWS_AS(p.project_simplex(quantize(RealVector{0.1, 0.2, 0.3}, {0, 7})), std::invalid_argument);
  CHECK(parse_hw_mode("pp") == HwMode::parity_polytope);
  CHECK(parse_hw_mode("sort") == HwMode::sort_only);
  CHECK_THROWS_AS(parse_hw_mode("bogus"), std::invalid_argument);
}

TEST_CASE("simplex examples") {
  const auto w = to_doubles(hw_project_simplex(quantize(RealVector{0, 0, 0}, s1_6), {3, s1_6, s1_6}));
  for (double x : w) CHECK(std::abs(x - 1.0 / 3) <= 1.0 / 64);
  const FixedPointFormat s3_4{3, 4};
  const auto e = hw_project_simplex(quantize(RealVector{2, 0}, s3_4), {2, s3_4, s3_4});
  CHECK(to_doubles(e) == RealVector{1.0, 0.0});
  CHECK(e[0].format() == s3_4);
}

TEST_CASE("parity polytope examples") {
  const HwProjector p({3, s1_6, s1_6});
  const auto q = quantize(RealVector{0.5, 0.5, 0.5}, s1_6);
  const auto in = p.project_pp_detail(q);
  CHECK(in.membership);
  CHECK(to_doubles(in.output) == to_doubles(q));

  const auto out = p.project_pp_detail(quantize(RealVector{0.9, 0.1, 0.05}, s1_6));
  CHECK_FALSE(out.membership);
  CHECK(out.facet == FacetIndicator{1, 0, 0});
  CHECK(dist(to_doubles(out.output), {0.65, 0.35, 0.30}) <= 2.0 / 64 * std::sqrt(3.0));
}

TEST_CASE("operation trace does not depend on the data") {
  std::mt19937_64 rng(41);
  for (int d : {2, 3, 9, 17}) {
    const FixedPointFormat fmt{2, 9};
    const HwProjector p({d, fmt, fmt});
    OpTrace ref_s, ref_p;
    p.project_simplex(random_fixed(rng, d, fmt, -4, 4), &ref_s);
    p.project_pp(random_fixed(rng, d, fmt, -4, 4), &ref_p);
    CHECK(ref_s.size() > 0);
    for (int t = 0; t < 30; ++t) {
      // mixes the cube branch, the facet branch, even and odd weights
      const double spread = t % 3 == 0 ? 0.4 : 4.0;
      OpTrace ts, tp;
      p.project_simplex(random_fixed(rng, d, fmt, 0.5 - spread, 0.5 + spread), &ts);
      p.project_pp(random_fixed(rng, d, fmt, 0.5 - spread, 0.5 + spread), &tp);
      CHECK(ts == ref_s);
      CHECK(tp == ref_p);
    }
  }
}

TEST_CASE("outputs are feasible after truncation") {
  std::mt19937_64 rng(42);
  for (int d : {2, 3, 5, 9, 16, 33}) {
    for (const FixedPointFormat fmt : {FixedPointFormat{0, 3}, FixedPointFormat{0, 11}, FixedPointFormat{1, 6},
                                       FixedPointFormat{3, 8}, FixedPointFormat{2, 13}}) {
      const FixedPointFormat outf{1, fmt.width() - 2};
      // Output truncation alone costs under d ulps. The rounded reciprocals
      // add |S - 1| * 2^-(F_out + ceil(log2 d) + 1) to s_rho, with
      // |S - 1| <= d 2^I + 1, so inputs with integer bits get a wider bound.
      const double bound = fmt.integer_bits == 0
                               ? d * outf.ulp()
                               : (d * (1.0 + std::ldexp(1.0, fmt.integer_bits - 1)) + 0.5) * outf.ulp();
      const HwProjector p({d, fmt, outf});
      for (int t = 0; t < 300; ++t) {
        const auto q = random_fixed(rng, d, fmt, fmt.min_value(), fmt.max_value());
        const auto w = to_doubles(p.project_simplex(q));
        CHECK(*std::min_element(w.begin(), w.end()) >= 0.0);
        CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) <= bound);
        for (double x : to_doubles(p.project_pp(q))) CHECK((x >= 0.0 && x <= 1.0));
      }
    }
  }
}

TEST_CASE("error shrinks as fraction bits are added") {
  const int d = 4;
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<RealVector> inputs(10000, RealVector(d));
  for (auto& v : inputs)
    for (auto& x : v) x = u(rng);
  for (auto target : {ProjectionTarget::simplex, ProjectionTarget::pp}) {
    std::vector<FormatPair> formats;
    for (int f = 4; f <= 15; ++f) formats.push_back({{1, f}, {1, f}});
    const auto recs = precision_sweep(target, d, inputs, formats, {QuantizeMode::round_nearest_even, false, 0});
    REQUIRE(recs.size() == formats.size());
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      CAPTURE(recs[i].format);
      CHECK(recs[i + 1].mean_normalized_sq_error <= recs[i].mean_normalized_sq_error);
    }
  }
}

TEST_CASE("unit cube error at widths 4, 8, 16") {
  const auto inputs = gen_uniform_cube(3, 10000, 44);
  const auto formats = unit_cube_family(4, 16);
  const auto recs = precision_sweep(ProjectionTarget::pp, 3, inputs, {formats[0], formats[4], formats[12]},
                                    {QuantizeMode::round_nearest_even, false, 0});
  CHECK(recs[2].mean_normalized_sq_error < recs[1].mean_normalized_sq_error);
  CHECK(recs[1].mean_normalized_sq_error < recs[0].mean_normalized_sq_error);
}

TEST_CASE("area and depth report") {
  const auto r2 = area_delay_report({2, s1_6, s1_6}, HwMode::simplex);
  CHECK(r2.comparator_count == 1);
  for (int d : {2, 3, 8, 9, 16, 17, 100}) {
    const long sorter = network_metrics(build_batcher(d)).size;
    const int sort_depth = network_metrics(build_batcher(d)).depth;
    for (auto mode : {HwMode::simplex, HwMode::parity_polytope, HwMode::sort_only}) {
      const auto r = area_delay_report({d, s1_6, s1_6}, mode);
      CHECK(r.comparator_count == sorter);
      CHECK(r.critical_depth >= sort_depth);
      CHECK(r.adder_count >= 0);
      CHECK(r.multiplier_count >= 0);
      CHECK(to_csv_row(r) == to_csv_row(area_delay_report({d, s1_6, s1_6}, mode)));
    }
    CHECK(area_delay_report({d, s1_6, s1_6}, HwMode::sort_only).critical_depth == sort_depth);
  }
  const auto at = [&](int d) { return area_delay_report({d, s1_6, s1_6}, HwMode::sort_only).comparator_count; };
  const double average = static_cast<double>(at(64) - at(32)) / 32.0;
  CHECK(static_cast<double>(at(65) - at(64)) > average);
  CHECK(area_delay_csv_header() == "dimension,mode,comparators,adders,multipliers,depth");
  CHECK(to_csv_row(area_delay_report({8, s1_6, s1_6}, HwMode::sort_only)) == "8,sort,19,0,0,6");
}
