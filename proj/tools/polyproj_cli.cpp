// polyproj: project vectors, run precision / scaling sweeps, self-check.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "polyproj/experiments.hpp"
#include "polyproj/oracle.hpp"
#include "polyproj/sorting_network.hpp"

namespace {

using namespace polyproj;

struct ProjectArgs {
  std::string target = "pp";
  double radius = 1.0;
  std::string format;
  std::string output_format;
  std::string file;
  std::vector<double> values;
};

struct PrecisionArgs {
  std::string target = "pp";
  int dim = 3;
  int trials = 10000;
  std::uint64_t seed = 1;
  std::string formats;
  std::string family = "cube";
  std::string widths = "2-16";
  std::string inputs = "cube";
  double variance = 16.0;
  std::string mode = "rne";
  unsigned threads = 0;
  std::string out;
};

struct ScalingArgs {
  std::string dims = "2-1024";
  std::string mode = "all";
  std::string out;
};

struct VerifyArgs {
  int trials = 1000;
  std::uint64_t random_trials = 100000;
  std::uint64_t seed = 1;
};

void print_vector(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) std::printf(i ? " %.10g" : "%.10g", x[i] + 0.0);  // no "-0"
  std::printf("\n");
}

// One format pair per comma item: "sI.F" (same in and out) or "sI.F:sJ.G".
std::vector<FormatPair> parse_format_list(const std::string& text) {
  std::vector<FormatPair> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    const auto in = FixedPointFormat::parse(item.substr(0, colon));
    const auto outf = colon == std::string::npos ? in : FixedPointFormat::parse(item.substr(colon + 1));
    out.push_back({in, outf});
  }
  return out;
}

// "cube" or "int<I>", e.g. "int3".
std::vector<FormatPair> family_formats(const std::string& family, const std::string& widths) {
  const auto ws = parse_int_list(widths);
  if (ws.empty()) throw std::invalid_argument("empty width list");
  std::vector<FormatPair> out;
  for (int w : ws) {
    std::vector<FormatPair> one;
    if (family == "cube") {
      one = unit_cube_family(w, w);
    } else if (family.rfind("int", 0) == 0) {
      one = integer_bit_family(std::stoi(family.substr(3)), w, w);
    } else {
      throw std::invalid_argument("unknown family '" + family + "' (cube, int<I>)");
    }
    out.insert(out.end(), one.begin(), one.end());
  }
  return out;
}

QuantizeMode parse_quantize_mode(const std::string& s) {
  if (s == "rne") return QuantizeMode::round_nearest_even;
  if (s == "truncate") return QuantizeMode::truncate;
  throw std::invalid_argument("unknown quantize mode '" + s + "' (rne, truncate)");
}

// Writes to the named file, or stdout when the name is empty or "-".
template <class Writer>
void with_output(const std::string& path, Writer write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(os);
}

int run_project(const ProjectArgs& a) {
  std::vector<RealVector> vectors;
  if (!a.file.empty()) {
    std::ifstream is(a.file);
    if (!is) throw std::runtime_error("cannot open '" + a.file + "'");
    vectors = read_vectors(is);
  }
  if (!a.values.empty()) vectors.push_back(a.values);
  if (vectors.empty()) throw std::invalid_argument("no input vector (pass values or --file)");

  for (const auto& v : vectors) {
    if (!a.format.empty()) {
      const auto in = FixedPointFormat::parse(a.format);
      const auto out = a.output_format.empty() ? in : FixedPointFormat::parse(a.output_format);
      const HwProjectionConfig cfg{static_cast<int>(v.size()), in, out};
      const FixedVector q = quantize(v, in);
      if (a.target == "pp") {
        print_vector(to_doubles(hw_project_pp(q, cfg)));
      } else if (a.target == "simplex") {
        print_vector(to_doubles(hw_project_simplex(q, cfg)));
      } else {
        throw std::invalid_argument("--format is only supported for pp and simplex");
      }
      continue;
    }
    if (a.target == "pp") {
      print_vector(project_parity_polytope(v));
    } else if (a.target == "simplex") {
      print_vector(project_simplex(v));
    } else if (a.target == "cube") {
      print_vector(project_unit_cube(v));
    } else if (a.target == "l1") {
      print_vector(project_l1_ball(v, a.radius));
    } else {
      throw std::invalid_argument("unknown target '" + a.target + "' (pp, simplex, cube, l1)");
    }
  }
  return 0;
}

int run_precision(const PrecisionArgs& a) {
  const ProjectionTarget target = parse_target(a.target);
  const auto formats = a.formats.empty() ? family_formats(a.family, a.widths)
                                         : parse_format_list(a.formats);
  std::vector<RealVector> inputs;
  if (a.inputs == "cube") {
    inputs = gen_uniform_cube(a.dim, a.trials, a.seed);
  } else if (a.inputs == "gaussian") {
    inputs = gen_gaussian(a.dim, a.trials, a.seed, a.variance);
  } else {
    throw std::invalid_argument("unknown input distribution '" + a.inputs + "' (cube, gaussian)");
  }
  SweepOptions opt;
  opt.quantize_mode = parse_quantize_mode(a.mode);
  opt.threads = a.threads;
  const auto records = precision_sweep(target, a.dim, inputs, formats, opt);

  std::ostringstream meta;
  meta << "seed=" << a.seed << " inputs=" << a.inputs;
  if (a.inputs == "gaussian") meta << " variance=" << a.variance;
  meta << " quantize=" << a.mode;
  with_output(a.out, [&](std::ostream& os) { write_precision_csv(os, records, meta.str()); });
  return 0;
}

int run_scaling(const ScalingArgs& a) {
  const auto dims = parse_int_list(a.dims);
  std::vector<AreaDelayReport> reports;
  const std::vector<HwMode> modes =
      a.mode == "all" ? std::vector<HwMode>{HwMode::parity_polytope, HwMode::simplex, HwMode::sort_only}
                      : std::vector<HwMode>{parse_hw_mode(a.mode)};
  for (HwMode m : modes) {
    const auto r = scaling_sweep(dims, m);
    reports.insert(reports.end(), r.begin(), r.end());
  }
  with_output(a.out, [&](std::ostream& os) { write_scaling_csv(os, reports, "datapath=s1.6"); });
  return 0;
}

int run_verify(const VerifyArgs& a) {
  bool ok = true;
  const auto report = [&ok](bool pass, const std::string& what) {
    std::printf("%s %s\n", pass ? "PASS" : "FAIL", what.c_str());
    ok = ok && pass;
  };

  for (int d = 2; d <= 8; ++d) {
    double worst_pp = 0.0, worst_simplex = 0.0;
    for (const auto& batch : {gen_uniform_cube(d, a.trials, a.seed + d),
                              gen_gaussian(d, a.trials, a.seed + 100 + d)}) {
      for (const auto& v : batch) {
        const auto x = project_parity_polytope(v);
        const auto y = oracle::dykstra_pp_oracle(v);
        const auto s = project_simplex(v);
        const auto t = oracle::bisection_simplex_oracle(v);
        double e1 = 0.0, e2 = 0.0;
        for (int i = 0; i < d; ++i) {
          e1 += (x[i] - y[i]) * (x[i] - y[i]);
          e2 += (s[i] - t[i]) * (s[i] - t[i]);
        }
        worst_pp = std::max(worst_pp, std::sqrt(e1));
        worst_simplex = std::max(worst_simplex, std::sqrt(e2));
      }
    }
    char line[160];
    std::snprintf(line, sizeof line, "oracle d=%d pp=%.2e simplex=%.2e", d, worst_pp,
                  worst_simplex);
    report(worst_pp <= 1e-6 && worst_simplex <= 1e-9, line);
  }

  for (int n = 1; n <= 64; ++n) {
    const auto net = build_batcher(n);
    const auto z = n <= kMaxOptimalLanes ? verify_zero_one(net)
                                         : verify_zero_one_random(net, a.random_trials, a.seed);
    report(z.sorts, "zero-one n=" + std::to_string(n) + " (" + std::to_string(z.patterns_checked) +
                        (z.exhaustive ? " exhaustive)" : " random)"));
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-polytope and simplex projection toolkit"};
  app.require_subcommand(1);

  ProjectArgs pa;
  auto* project = app.add_subcommand("project", "Project one or more vectors");
  project->add_option("values", pa.values, "Vector components");
  project->add_option("--target", pa.target, "pp, simplex, cube or l1")->capture_default_str();
  project->add_option("--radius", pa.radius, "l1 ball radius")->capture_default_str();
  project->add_option("--format", pa.format, "Run the fixed-point circuit in this format, e.g. s1.6");
  project->add_option("--output-format", pa.output_format, "Circuit output format (default: --format)");
  project->add_option("--file", pa.file, "Whitespace-separated vectors, one per line")
      ->check(CLI::ExistingFile);

  PrecisionArgs pr;
  auto* precision = app.add_subcommand("sweep-precision", "Fixed-point error versus bit width");
  precision->add_option("--target", pr.target, "pp or simplex")->capture_default_str();
  precision->add_option("--dim", pr.dim, "Dimension")->capture_default_str()->check(CLI::Range(2, 1024));
  precision->add_option("--trials", pr.trials, "Vectors per format")->capture_default_str()->check(CLI::PositiveNumber);
  precision->add_option("--seed", pr.seed, "RNG seed")->capture_default_str();
  precision->add_option("--formats", pr.formats, "Explicit list: sI.F or sI.F:sJ.G, comma separated");
  precision->add_option("--family", pr.family, "cube or int<I> (ignored with --formats)")->capture_default_str();
  precision->add_option("--widths", pr.widths, "Widths for --family, e.g. 2-16")->capture_default_str();
  precision->add_option("--inputs", pr.inputs, "cube or gaussian")->capture_default_str();
  precision->add_option("--variance", pr.variance, "Gaussian variance")->capture_default_str();
  precision->add_option("--quantize", pr.mode, "rne or truncate")->capture_default_str();
  precision->add_option("--threads", pr.threads, "Worker threads, 0 = all cores")->capture_default_str();
  precision->add_option("--out", pr.out, "CSV path (default stdout)");

  ScalingArgs sc;
  auto* scaling = app.add_subcommand("sweep-scaling", "Area and depth proxies versus dimension");
  scaling->add_option("--dims", sc.dims, "Dimensions, e.g. 2-1024")->capture_default_str();
  scaling->add_option("--mode", sc.mode, "pp, simplex, sort or all")->capture_default_str();
  scaling->add_option("--out", sc.out, "CSV path (default stdout)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Oracle agreement and sorting-network checks");
  verify->add_option("--trials", va.trials, "Vectors per distribution and dimension")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--random-trials", va.random_trials, "Random zero-one checks for n > 16")->capture_default_str();
  verify->add_option("--seed", va.seed, "RNG seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*project) return run_project(pa);
    if (*precision) return run_precision(pr);
    if (*scaling) return run_scaling(sc);
    if (*verify) return run_verify(va);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
