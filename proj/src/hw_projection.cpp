#include "polyproj/hw_projection.hpp"

#include <stdexcept>

namespace polyproj {
namespace {

FixedValue constant(std::int64_t integer_value, const FixedPointFormat& fmt) {
  return {integer_value * (std::int64_t{1} << fmt.fraction_bits), fmt};
}

FixedValue mux(bool select_first, const FixedValue& first, const FixedValue& second,
               OpTrace* trace, int lane) {
  if (!(first.format() == second.format())) {
    throw std::logic_error("mux operands in different formats: " + first.format().to_string() +
                           " vs " + second.format().to_string());
  }
  trace_op(trace, OpKind::select, lane);
  return select_first ? first : second;
}

bool greater(const FixedValue& a, const FixedValue& b, OpTrace* trace, int lane) {
  trace_op(trace, OpKind::compare, lane);
  return a > b;
}

// Clamp to [0, 1] within the operand's own format (which must hold 1).
FixedValue clamp_unit(const FixedValue& x, OpTrace* trace, int lane) {
  const FixedValue zero = constant(0, x.format());
  const FixedValue one = constant(1, x.format());
  const FixedValue upper = mux(greater(x, one, trace, lane), one, x, trace, lane);
  return mux(greater(zero, x, trace, lane), zero, upper, trace, lane);
}

// Balanced adder tree with a fixed accumulation format wide enough for the
// whole sum, so no intermediate saturates.
FixedValue sum_tree(FixedVector level, const FixedPointFormat& sum_fmt, OpTrace* trace) {
  for (auto& x : level) x = extend_to(x, sum_fmt);
  while (level.size() > 1) {
    FixedVector next;
    for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
      next.push_back(truncate_to(fixed_add(level[k], level[k + 1]), sum_fmt));
      trace_op(trace, OpKind::add, static_cast<int>(k), static_cast<int>(k + 1));
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

bool xor_reduce(std::vector<std::uint8_t> level, OpTrace* trace) {
  while (level.size() > 1) {
    std::vector<std::uint8_t> next;
    for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
      next.push_back(level[k] ^ level[k + 1]);
      trace_op(trace, OpKind::logic, static_cast<int>(k), static_cast<int>(k + 1));
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front() != 0;
}

int log2_ceil_or_zero(int d) { return d <= 1 ? 0 : ceil_log2(d); }

}  // namespace

std::string to_string(HwMode mode) {
  switch (mode) {
    case HwMode::simplex: return "simplex";
    case HwMode::parity_polytope: return "pp";
    case HwMode::sort_only: return "sort";
  }
  return "unknown";
}

HwMode parse_hw_mode(std::string_view text) {
  if (text == "simplex") return HwMode::simplex;
  if (text == "pp" || text == "parity_polytope") return HwMode::parity_polytope;
  if (text == "sort" || text == "sort_only") return HwMode::sort_only;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (simplex, pp, sort)");
}

void validate(const HwProjectionConfig& cfg, HwMode mode) {
  validate(cfg.input_format);
  validate(cfg.output_format);
  if (cfg.input_format.width() != cfg.output_format.width()) {
    throw std::invalid_argument("input and output formats must have equal width (" +
                                cfg.input_format.to_string() + " vs " +
                                cfg.output_format.to_string() + ")");
  }
  if (cfg.dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  if (mode == HwMode::parity_polytope && cfg.dimension < 2) {
    throw std::invalid_argument("parity polytope projection needs dimension >= 2");
  }
}

HwProjector::HwProjector(HwProjectionConfig cfg)
    : cfg_(cfg),
      sort_((validate(cfg, HwMode::simplex), build_batcher(cfg.dimension))),
      scan_(ScanNetwork::ladner_fischer(cfg.dimension)) {
  const FixedPointFormat recip_fmt{
      1, cfg_.output_format.fraction_bits + log2_ceil_or_zero(cfg_.dimension)};
  validate(recip_fmt);
  reciprocals_.reserve(static_cast<std::size_t>(cfg_.dimension));
  for (int i = 1; i <= cfg_.dimension; ++i) {
    reciprocals_.push_back(quantize(1.0 / i, recip_fmt, QuantizeMode::round_nearest_even));
  }
}

void HwProjector::check_input(std::span<const FixedValue> v) const {
  if (static_cast<int>(v.size()) != cfg_.dimension) {
    throw std::invalid_argument("expected " + std::to_string(cfg_.dimension) +
                                " components, got " + std::to_string(v.size()));
  }
  for (const auto& x : v) {
    if (!(x.format() == cfg_.input_format)) {
      throw std::invalid_argument("component in format " + x.format().to_string() +
                                  ", expected " + cfg_.input_format.to_string());
    }
  }
}

FixedVector HwProjector::simplex_internal(std::span<const FixedValue> v, OpTrace* trace) const {
  const int d = cfg_.dimension;
  const FixedPointFormat in_fmt = v.front().format();
  const FixedPointFormat sum_fmt{in_fmt.integer_bits + log2_ceil_or_zero(d), in_fmt.fraction_bits};

  // mu = descending sort, then S_i = mu_1 + ... + mu_i.
  FixedVector mu = apply_network(sort_, v, SortDirection::descending, trace);
  for (auto& x : mu) x = extend_to(x, sum_fmt);
  const FixedVector prefix = apply_scan(
      scan_, std::span<const FixedValue>(mu),
      [&sum_fmt](const FixedValue& a, const FixedValue& b) {
        return truncate_to(fixed_add(a, b), sum_fmt);
      },
      trace);

  // s_i = (S_i - 1) * (1/i), and the candidate bits mu_i > s_i.
  const FixedValue one = constant(1, {1, in_fmt.fraction_bits});
  FixedVector thresholds;
  std::vector<std::uint8_t> candidate(static_cast<std::size_t>(d));
  thresholds.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const FixedValue shifted = fixed_sub(prefix[i], one);
    trace_op(trace, OpKind::sub, i);
    thresholds.push_back(fixed_mul_const(shifted, reciprocals_[i]));
    trace_op(trace, OpKind::mul, i);
    candidate[i] = greater(mu[i], thresholds[i], trace, i) ? 1 : 0;
  }

  // s_rho through a one-hot select on the largest candidate index.
  const auto rho = max_index(candidate, trace);
  FixedValue s_rho = constant(0, thresholds.front().format());
  for (int i = 0; i < d; ++i) s_rho = mux(rho[i] != 0, thresholds[i], s_rho, trace, i);

  // w_i = max(v_i - s_rho, 0) on the unsorted inputs.
  const FixedPointFormat v_fmt{in_fmt.integer_bits, s_rho.format().fraction_bits};
  FixedVector w;
  w.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const FixedValue diff = fixed_sub(extend_to(v[i], v_fmt), s_rho);
    trace_op(trace, OpKind::sub, i);
    const FixedValue zero = constant(0, diff.format());
    w.push_back(mux(greater(zero, diff, trace, i), zero, diff, trace, i));
  }
  return w;
}

FixedVector HwProjector::project_simplex(std::span<const FixedValue> v, OpTrace* trace) const {
  check_input(v);
  FixedVector w = simplex_internal(v, trace);
  for (int i = 0; i < cfg_.dimension; ++i) {
    w[i] = truncate_to(w[i], cfg_.output_format);
    trace_op(trace, OpKind::truncate, i);
  }
  return w;
}

HwPpDetail HwProjector::project_pp_detail(std::span<const FixedValue> v, OpTrace* trace) const {
  validate(cfg_, HwMode::parity_polytope);
  check_input(v);
  const int d = cfg_.dimension;
  const FixedPointFormat in_fmt = cfg_.input_format;
  const int frac = in_fmt.fraction_bits;

  // v_hat = clamp(v, 0, 1) in a format that can hold 1.
  const FixedPointFormat hat_fmt{std::max(in_fmt.integer_bits, 1), frac};
  FixedVector v_hat;
  v_hat.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) v_hat.push_back(clamp_unit(extend_to(v[i], hat_fmt), trace, i));

  // Threshold pattern and its parity.
  const FixedPointFormat half_fmt{0, std::max(frac, 1)};
  const FixedValue half{std::int64_t{1} << (half_fmt.fraction_bits - 1), half_fmt};
  FacetIndicator f(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) f[i] = greater(v_hat[i], half, trace, i) ? 1 : 0;
  const bool even = !xor_reduce(f, trace);

  // Distance to 1/2 and the argmin flip, applied only when the weight is even.
  const FixedPointFormat dist_in{hat_fmt.integer_bits, half_fmt.fraction_bits};
  FixedVector distance;
  distance.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const FixedValue diff = fixed_sub(half, extend_to(v_hat[i], dist_in));
    trace_op(trace, OpKind::sub, i);
    const FixedValue neg = fixed_neg(diff);
    trace_op(trace, OpKind::sub, i);
    distance.push_back(mux(greater(constant(0, diff.format()), diff, trace, i), neg,
                           extend_to(diff, neg.format()), trace, i));
  }
  const auto closest = argmin_tree(std::span<const FixedValue>(distance), trace);
  for (int i = 0; i < d; ++i) {
    f[i] ^= static_cast<std::uint8_t>(even && closest.indicator[i]);
    trace_op(trace, OpKind::logic, i);
  }

  // v_tilde = T_f(v).
  const FixedValue one_in = constant(1, {1, frac});
  FixedVector v_tilde;
  v_tilde.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const FixedValue flipped = fixed_sub(one_in, v[i]);
    trace_op(trace, OpKind::sub, i);
    v_tilde.push_back(mux(f[i] != 0, flipped, extend_to(v[i], flipped.format()), trace, i));
  }

  // Membership: 1' clamp(v_tilde) >= 1 on the full-width sum.
  FixedVector clamped;
  clamped.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) clamped.push_back(clamp_unit(v_tilde[i], trace, i));
  const FixedPointFormat member_fmt{v_tilde.front().format().integer_bits + log2_ceil_or_zero(d),
                                    frac};
  const FixedValue clamp_sum = sum_tree(std::move(clamped), member_fmt, trace);
  trace_op(trace, OpKind::compare);
  const bool member = !(one_in > clamp_sum);

  // Simplex branch: T_f(project_simplex(v_tilde)).
  const FixedVector u = simplex_internal(v_tilde, trace);
  const FixedValue one_u = constant(1, {1, u.front().format().fraction_bits});
  FixedVector facet_point;
  facet_point.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const FixedValue flipped = fixed_sub(one_u, u[i]);
    trace_op(trace, OpKind::sub, i);
    facet_point.push_back(mux(f[i] != 0, flipped, extend_to(u[i], flipped.format()), trace, i));
  }

  // Select the branch, clamp into [0,1] and truncate to the output format.
  const FixedPointFormat out_fmt = common_format(hat_fmt, facet_point.front().format());
  HwPpDetail detail;
  detail.output.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const FixedValue chosen =
        mux(member, extend_to(v_hat[i], out_fmt), extend_to(facet_point[i], out_fmt), trace, i);
    detail.output.push_back(truncate_to(clamp_unit(chosen, trace, i), cfg_.output_format));
    trace_op(trace, OpKind::truncate, i);
  }
  detail.facet = std::move(f);
  detail.membership = member;
  return detail;
}

FixedVector HwProjector::project_pp(std::span<const FixedValue> v, OpTrace* trace) const {
  return project_pp_detail(v, trace).output;
}

FixedVector hw_project_simplex(std::span<const FixedValue> v, const HwProjectionConfig& cfg) {
  return HwProjector(cfg).project_simplex(v);
}

FixedVector hw_project_pp(std::span<const FixedValue> v, const HwProjectionConfig& cfg) {
  validate(cfg, HwMode::parity_polytope);
  return HwProjector(cfg).project_pp(v);
}

std::string area_delay_csv_header() { return "dimension,mode,comparators,adders,multipliers,depth"; }

std::string to_csv_row(const AreaDelayReport& r) {
  return std::to_string(r.dimension) + "," + to_string(r.mode) + "," +
         std::to_string(r.comparator_count) + "," + std::to_string(r.adder_count) + "," +
         std::to_string(r.multiplier_count) + "," + std::to_string(r.critical_depth);
}

AreaDelayReport area_delay_report(const HwProjectionConfig& cfg, HwMode mode) {
  validate(cfg, mode);
  const int d = cfg.dimension;
  const int lg = log2_ceil_or_zero(d);
  const NetworkMetrics sort = network_metrics(build_batcher(d));
  const ScanNetwork scan = ScanNetwork::ladner_fischer(d);

  AreaDelayReport r;
  r.dimension = d;
  r.mode = mode;
  r.comparator_count = sort.size;
  r.critical_depth = sort.depth;
  if (mode == HwMode::sort_only) return r;

  // Simplex: prefix sum, subtract 1, multiply by 1/i, compare mu_i > s_i,
  // max-index scan plus its final AND, one-hot select of s_rho (OR tree),
  // subtract from v_i, clamp at zero.
  r.adder_count = scan.node_count() + 3L * d;
  r.multiplier_count = d;
  r.critical_depth += scan.depth() + 1 + 1 + 1 + (scan.depth() + 1) + lg + 1 + 1;
  if (mode == HwMode::simplex) return r;

  // Parity polytope around the simplex core: cube clamp and threshold,
  // parity (XOR tree) in parallel with distance, abs and the argmin tree,
  // flip, T_f on the way in and out, output clamp and branch select. The
  // membership sum runs alongside the simplex core and is off the critical
  // path.
  r.adder_count += 2L * d       // clamp and 1/2 threshold
                   + 2L * d     // distance and its negation
                   + (d - 1)    // argmin tree nodes
                   + d          // 1 - v_i
                   + 2L * d     // membership clamp
                   + (d - 1)    // membership sum
                   + 1          // >= 1 test
                   + d          // 1 - u_i
                   + 2L * d;    // output clamp
  const int front = 2 + std::max(lg, 2 + lg) + 1 + 1;
  r.critical_depth += front + 1 + 2 + 1;
  return r;
}

}  // namespace polyproj
