#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyproj/fixed_point.hpp"
#include "polyproj/hw_projection.hpp"
#include "polyproj/projection.hpp"

// Random input generators and the precision / scaling sweeps.
//
// All randomness comes from std::mt19937_64 seeded explicitly; identical
// arguments give identical results on the same standard library.

namespace polyproj {

inline constexpr const char* kRngName = "mt19937_64";
inline constexpr const char* kCsvSchema = "polyproj-csv/1";

std::vector<RealVector> gen_uniform_cube(int d, int n, std::uint64_t seed);
/// Independent N(0, variance) components. Throws if variance <= 0.
std::vector<RealVector> gen_gaussian(int d, int n, std::uint64_t seed, double variance = 16.0);

enum class ProjectionTarget { pp, simplex };

std::string to_string(ProjectionTarget target);
ProjectionTarget parse_target(std::string_view text);

struct FormatPair {
  FixedPointFormat input;
  FixedPointFormat output;
};

/// sQ0.(W-1) in and out, the natural format for inputs in the unit cube.
std::vector<FormatPair> unit_cube_family(int min_width, int max_width);
/// Input s<integer_bits>.(W-1-integer_bits), output s1.(W-2). Widths below
/// the family's minimum (1 + integer_bits, and at least 2) are skipped.
std::vector<FormatPair> integer_bit_family(int integer_bits, int min_width, int max_width);

struct ExperimentRecord {
  std::string experiment;  // "input_quantization" or "<target>_projection"
  int dimension = 0;
  std::string format;  // input format descriptor
  std::string output_format;
  int width = 0;
  long trials = 0;
  double mean_normalized_sq_error = 0.0;
  double error_bar = 0.0;  // standard error of the mean
};

struct SweepOptions {
  QuantizeMode quantize_mode = QuantizeMode::round_nearest_even;
  bool include_input_error = true;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// For every format pair: quantize the inputs, run the fixed-point
/// projection and compare with the double-precision projection of the
/// unquantized input, recording the mean of ||.||^2 / d and its standard
/// error. When requested, the input quantization error ||q(v) - v||^2 / d is
/// recorded as a separate curve.
std::vector<ExperimentRecord> precision_sweep(ProjectionTarget target, int d,
                                              const std::vector<RealVector>& inputs,
                                              const std::vector<FormatPair>& formats,
                                              const SweepOptions& options = {});

/// One report per dimension, with an s1.6 datapath. Dimensions must lie in
/// [2, 1024].
std::vector<AreaDelayReport> scaling_sweep(const std::vector<int>& dims, HwMode mode);

std::string precision_csv_header();
std::string to_csv_row(const ExperimentRecord& record);

/// CSV with a leading '#' metadata line (schema, rng, and `metadata`).
void write_precision_csv(std::ostream& os, const std::vector<ExperimentRecord>& records,
                         const std::string& metadata);
void write_scaling_csv(std::ostream& os, const std::vector<AreaDelayReport>& reports,
                       const std::string& metadata);

/// Parses "a-b" ranges and comma lists, e.g. "2-16" or "8,16,32" or "2-4,9".
std::vector<int> parse_int_list(std::string_view text);

/// Reads whitespace-separated vectors, one per non-empty line.
std::vector<RealVector> read_vectors(std::istream& is);

}  // namespace polyproj
