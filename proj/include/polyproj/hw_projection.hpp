#pragma once

#include <span>
#include <string>
#include <vector>

#include "polyproj/fixed_point.hpp"
#include "polyproj/prefix.hpp"
#include "polyproj/projection.hpp"
#include "polyproj/sorting_network.hpp"
#include "polyproj/trace.hpp"

// Fixed-point circuit models of the simplex and parity-polytope projections.
//
// Every stage runs unconditionally and branches are realised as selects, so
// the operation schedule depends only on the configuration. Internal values
// grow as needed to stay exact:
//   - prefix sums of d values carry ceil(log2 d) extra integer bits,
//   - the constants 1/i are rounded to F_out + ceil(log2 d) fraction bits,
//   - products keep all fraction bits.
// The only precision loss after input quantization is the reciprocal
// rounding and the final truncation to the output format.

namespace polyproj {

struct HwProjectionConfig {
  int dimension = 0;
  FixedPointFormat input_format;
  FixedPointFormat output_format;
};

enum class HwMode { simplex, parity_polytope, sort_only };

std::string to_string(HwMode mode);
/// Accepts "simplex", "pp"/"parity_polytope" and "sort"/"sort_only".
HwMode parse_hw_mode(std::string_view text);

/// Throws std::invalid_argument for invalid formats, unequal input/output
/// widths, dimension < 1, or dimension < 2 in parity-polytope mode.
void validate(const HwProjectionConfig& cfg, HwMode mode);

struct AreaDelayReport {
  int dimension = 0;
  HwMode mode = HwMode::simplex;
  long comparator_count = 0;  // compare-and-swap units of the sorting network
  long adder_count = 0;       // adders, subtractors and magnitude comparators
  long multiplier_count = 0;  // constant multipliers
  int critical_depth = 0;     // arithmetic stages on the longest path
};

/// Header matching to_csv_row: dimension,mode,comparators,adders,multipliers,depth
std::string area_delay_csv_header();
std::string to_csv_row(const AreaDelayReport& report);

AreaDelayReport area_delay_report(const HwProjectionConfig& cfg, HwMode mode);

struct HwPpDetail {
  FixedVector output;
  FacetIndicator facet;
  bool membership = false;  // true when the cube branch was selected
};

/// Circuit for one configuration. Holds the sorting and scan networks and
/// the reciprocal constants; immutable after construction and safe to share
/// between threads.
class HwProjector {
 public:
  explicit HwProjector(HwProjectionConfig cfg);

  [[nodiscard]] const HwProjectionConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const ComparatorNetwork& sort_network() const noexcept { return sort_; }
  [[nodiscard]] const ScanNetwork& scan_network() const noexcept { return scan_; }

  /// Inputs must have length `dimension` and carry `input_format`.
  FixedVector project_simplex(std::span<const FixedValue> v, OpTrace* trace = nullptr) const;
  FixedVector project_pp(std::span<const FixedValue> v, OpTrace* trace = nullptr) const;
  HwPpDetail project_pp_detail(std::span<const FixedValue> v, OpTrace* trace = nullptr) const;

  /// Simplex stage on values of any common format, before output truncation.
  FixedVector simplex_internal(std::span<const FixedValue> v, OpTrace* trace) const;

 private:
  void check_input(std::span<const FixedValue> v) const;

  HwProjectionConfig cfg_;
  ComparatorNetwork sort_;
  ScanNetwork scan_;
  FixedVector reciprocals_;
};

FixedVector hw_project_simplex(std::span<const FixedValue> v, const HwProjectionConfig& cfg);
FixedVector hw_project_pp(std::span<const FixedValue> v, const HwProjectionConfig& cfg);

}  // namespace polyproj
