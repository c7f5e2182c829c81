#include "polyproj/prefix.hpp"

#include <algorithm>
#include <bit>

namespace polyproj {

int ceil_log2(int n) {
  if (n < 1) throw std::invalid_argument("ceil_log2: argument must be >= 1");
  return std::bit_width(static_cast<unsigned>(n - 1));
}

// Ladner & Fischer's P_0 / P_1 recursion over value ids.
//
//   P_0(m): split at the largest power of two L < m, scan the left part
//           with P_1 and the right part with P_0, then fold the left total
//           into every right output.
//   P_1(m): combine adjacent pairs, scan the pair results with P_0, then
//           fix up the even positions with one more combine.
//
// The left total of P_1 is ready one stage before its other outputs, which
// is what keeps P_0 at exactly ceil(log2 m) stages.
class ScanBuilder {
 public:
  explicit ScanBuilder(int n) : n_(n), stage_of_(static_cast<std::size_t>(n), 0) {}

  ScanNetwork build() {
    std::vector<int> inputs(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) inputs[i] = i;
    ScanNetwork net;
    net.n_ = n_;
    net.outputs_ = p0(inputs);
    net.nodes_ = std::move(nodes_);
    net.depth_ = 0;
    for (const auto& node : net.nodes_) net.depth_ = std::max(net.depth_, node.stage);
    return net;
  }

 private:
  int combine(int lhs, int rhs) {
    const int stage = std::max(stage_of_[lhs], stage_of_[rhs]) + 1;
    nodes_.push_back({lhs, rhs, stage});
    stage_of_.push_back(stage);
    return n_ + static_cast<int>(nodes_.size()) - 1;
  }

  std::vector<int> p0(const std::vector<int>& xs) {
    const int m = static_cast<int>(xs.size());
    if (m == 1) return xs;
    const int left_size = 1 << (ceil_log2(m) - 1);
    std::vector<int> out = p1({xs.begin(), xs.begin() + left_size});
    const std::vector<int> right = p0({xs.begin() + left_size, xs.end()});
    const int total = out.back();
    for (int r : right) out.push_back(combine(total, r));
    return out;
  }

  std::vector<int> p1(const std::vector<int>& xs) {
    const int m = static_cast<int>(xs.size());
    if (m == 1) return xs;
    std::vector<int> pairs;
    for (int k = 0; k + 1 < m; k += 2) pairs.push_back(combine(xs[k], xs[k + 1]));
    if (m % 2 == 1) pairs.push_back(xs[m - 1]);
    const std::vector<int> reduced = p0(pairs);
    std::vector<int> out(static_cast<std::size_t>(m));
    out[0] = xs[0];
    for (int j = 1; j < m; ++j) {
      if (j % 2 == 1) {
        out[j] = reduced[j / 2];
      } else if (j == m - 1) {
        out[j] = reduced[j / 2];  // unpaired tail already folded in by P_0
      } else {
        out[j] = combine(reduced[j / 2 - 1], xs[j]);
      }
    }
    return out;
  }

  int n_;
  std::vector<int> stage_of_;
  std::vector<ScanNode> nodes_;
};

ScanNetwork ScanNetwork::ladner_fischer(int n) {
  if (n < 1) throw std::invalid_argument("ladner_fischer: lane count must be >= 1");
  return ScanBuilder(n).build();
}

std::vector<std::uint8_t> max_index(std::span<const std::uint8_t> bits, OpTrace* trace) {
  const int n = static_cast<int>(bits.size());
  if (n == 0) throw std::invalid_argument("max_index: empty input");
  // none_above[i] = AND of !bits[j] over j >= i, computed as a prefix scan
  // over the reversed sequence.
  std::vector<std::uint8_t> reversed_low(bits.size());
  for (int i = 0; i < n; ++i) reversed_low[i] = bits[n - 1 - i] ? 0 : 1;
  const auto scanned = apply_scan(
      ScanNetwork::ladner_fischer(n), std::span<const std::uint8_t>(reversed_low),
      [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a & b; }, trace);
  std::vector<std::uint8_t> out(bits.size());
  for (int i = 0; i < n; ++i) {
    const std::uint8_t none_above = i == n - 1 ? 1 : scanned[n - 2 - i];
    out[i] = (bits[i] ? 1 : 0) & none_above;
    trace_op(trace, OpKind::logic, i);
  }
  return out;
}

void to_json(nlohmann::json& j, const ScanNetwork& net) {
  auto nodes = nlohmann::json::array();
  for (const auto& node : net.nodes()) nodes.push_back({node.lhs, node.rhs, node.stage});
  j = nlohmann::json{{"n", net.lanes()},
                     {"depth", net.depth()},
                     {"nodes", std::move(nodes)},
                     {"outputs", net.outputs()}};
}

}  // namespace polyproj
