#include "polyproj/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace polyproj {
namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return buf;
}

void require_positive(int value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

// Runs body(begin, end) over [0, n) split into contiguous chunks.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back([=] { body(begin, end); });
  }
}

double normalized_sq_error(std::span<const double> a, std::span<const double> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e += (a[i] - b[i]) * (a[i] - b[i]);
  return e / static_cast<double>(a.size());
}

// Serial reduction in index order keeps results independent of threading.
std::pair<double, double> mean_and_stderr(const std::vector<double>& errors) {
  const double n = static_cast<double>(errors.size());
  double sum = 0.0;
  for (double e : errors) sum += e;
  const double mean = sum / n;
  if (errors.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double e : errors) ss += (e - mean) * (e - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

int parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::vector<RealVector> gen_uniform_cube(int d, int n, std::uint64_t seed) {
  require_positive(d, "dimension");
  require_positive(n, "sample count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<RealVector> out(static_cast<std::size_t>(n), RealVector(static_cast<std::size_t>(d)));
  for (auto& v : out) {
    for (auto& x : v) x = unit(rng);
  }
  return out;
}

std::vector<RealVector> gen_gaussian(int d, int n, std::uint64_t seed, double variance) {
  require_positive(d, "dimension");
  require_positive(n, "sample count");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("variance must be positive and finite");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  std::vector<RealVector> out(static_cast<std::size_t>(n), RealVector(static_cast<std::size_t>(d)));
  for (auto& v : out) {
    for (auto& x : v) x = normal(rng);
  }
  return out;
}

std::string to_string(ProjectionTarget target) {
  return target == ProjectionTarget::pp ? "pp" : "simplex";
}

ProjectionTarget parse_target(std::string_view text) {
  if (text == "pp" || text == "parity_polytope") return ProjectionTarget::pp;
  if (text == "simplex") return ProjectionTarget::simplex;
  throw std::invalid_argument("unknown target '" + std::string(text) + "' (pp, simplex)");
}

std::vector<FormatPair> unit_cube_family(int min_width, int max_width) {
  std::vector<FormatPair> out;
  for (int w = std::max(min_width, 2); w <= max_width; ++w) {
    const FixedPointFormat fmt{0, w - 1};
    validate(fmt);
    out.push_back({fmt, fmt});
  }
  return out;
}

std::vector<FormatPair> integer_bit_family(int integer_bits, int min_width, int max_width) {
  if (integer_bits < 0) throw std::invalid_argument("integer bits must be non-negative");
  std::vector<FormatPair> out;
  for (int w = std::max({min_width, 2, integer_bits + 1}); w <= max_width; ++w) {
    const FixedPointFormat in{integer_bits, w - 1 - integer_bits};
    const FixedPointFormat outf{1, w - 2};
    validate(in);
    validate(outf);
    out.push_back({in, outf});
  }
  return out;
}

std::vector<ExperimentRecord> precision_sweep(ProjectionTarget target, int d,
                                              const std::vector<RealVector>& inputs,
                                              const std::vector<FormatPair>& formats,
                                              const SweepOptions& options) {
  if (inputs.empty()) throw std::invalid_argument("precision_sweep: no inputs");
  if (formats.empty()) throw std::invalid_argument("precision_sweep: no formats");
  for (const auto& v : inputs) {
    if (static_cast<int>(v.size()) != d) {
      throw std::invalid_argument("precision_sweep: input of dimension " +
                                  std::to_string(v.size()) + ", expected " + std::to_string(d));
    }
  }
  const HwMode mode = target == ProjectionTarget::pp ? HwMode::parity_polytope : HwMode::simplex;
  for (const auto& f : formats) validate(HwProjectionConfig{d, f.input, f.output}, mode);

  std::vector<RealVector> exact(inputs.size());
  parallel_chunks(inputs.size(), options.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      exact[t] = target == ProjectionTarget::pp ? project_parity_polytope(inputs[t])
                                                : project_simplex(inputs[t]);
    }
  });

  std::vector<ExperimentRecord> records;
  const std::string projection_name = to_string(target) + "_projection";
  for (const auto& f : formats) {
    const HwProjector circuit({d, f.input, f.output});
    std::vector<double> proj_err(inputs.size());
    std::vector<double> input_err(inputs.size());
    parallel_chunks(inputs.size(), options.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t t = b; t < e; ++t) {
        const FixedVector q = quantize(inputs[t], f.input, options.quantize_mode);
        const FixedVector w = target == ProjectionTarget::pp ? circuit.project_pp(q)
                                                             : circuit.project_simplex(q);
        proj_err[t] = normalized_sq_error(to_doubles(w), exact[t]);
        input_err[t] = normalized_sq_error(to_doubles(q), inputs[t]);
      }
    });
    const auto emit = [&](const std::string& name, const std::vector<double>& errors) {
      const auto [mean, se] = mean_and_stderr(errors);
      records.push_back({name, d, f.input.to_string(), f.output.to_string(), f.input.width(),
                         static_cast<long>(errors.size()), mean, se});
    };
    if (options.include_input_error) emit("input_quantization", input_err);
    emit(projection_name, proj_err);
  }
  // Rows ordered by (experiment, dimension, format); formats keep caller order.
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.experiment < b.experiment; });
  return records;
}

std::vector<AreaDelayReport> scaling_sweep(const std::vector<int>& dims, HwMode mode) {
  std::vector<AreaDelayReport> out;
  out.reserve(dims.size());
  for (int d : dims) {
    if (d < 2 || d > 1024) {
      throw std::invalid_argument("scaling_sweep: dimension " + std::to_string(d) +
                                  " outside [2, 1024]");
    }
    out.push_back(area_delay_report({d, {1, 6}, {1, 6}}, mode));
  }
  return out;
}

std::string precision_csv_header() {
  return "experiment,dimension,width,input_format,output_format,trials,mean_normalized_sq_error,"
         "error_bar";
}

std::string to_csv_row(const ExperimentRecord& r) {
  return r.experiment + "," + std::to_string(r.dimension) + "," + std::to_string(r.width) + "," +
         r.format + "," + r.output_format + "," + std::to_string(r.trials) + "," +
         format_real(r.mean_normalized_sq_error) + "," + format_real(r.error_bar);
}

void write_precision_csv(std::ostream& os, const std::vector<ExperimentRecord>& records,
                         const std::string& metadata) {
  os << "# " << kCsvSchema << " rng=" << kRngName;
  if (!metadata.empty()) os << " " << metadata;
  os << "\n" << precision_csv_header() << "\n";
  for (const auto& r : records) os << to_csv_row(r) << "\n";
}

void write_scaling_csv(std::ostream& os, const std::vector<AreaDelayReport>& reports,
                       const std::string& metadata) {
  os << "# " << kCsvSchema;
  if (!metadata.empty()) os << " " << metadata;
  os << "\n" << area_delay_csv_header() << "\n";
  for (const auto& r : reports) os << to_csv_row(r) << "\n";
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(parse_int(item));
    } else {
      const int lo = parse_int(item.substr(0, dash));
      const int hi = parse_int(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("empty range '" + std::string(item) + "'");
      for (int x = lo; x <= hi; ++x) out.push_back(x);
    }
    start = comma + 1;
  }
  return out;
}

std::vector<RealVector> read_vectors(std::istream& is) {
  std::vector<RealVector> out;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    RealVector v;
    std::string token;
    while (ls >> token) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw std::invalid_argument("not a number: '" + token + "'");
      v.push_back(x);
    }
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace polyproj
