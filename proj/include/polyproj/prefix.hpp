#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyproj/trace.hpp"

// Circuit-shaped parallel primitives: the Ladner-Fischer prefix network,
// the one-hot argmin tree and the max-index (last set bit) selector.

namespace polyproj {

/// One binary combine. Operands and result are value ids: ids [0, n) are the
/// inputs, node k produces id n + k. `lhs` always covers the lower indices,
/// so non-commutative operators see their operands in sequence order.
struct ScanNode {
  int lhs;
  int rhs;
  int stage;

  friend bool operator==(const ScanNode&, const ScanNode&) = default;
};

/// A prefix-computation DAG. outputs()[i] is the value id holding
/// x_0 op x_1 op ... op x_i.
class ScanNetwork {
 public:
  /// Ladner and Fischer's minimum-depth construction: depth ceil(log2 n)
  /// with fewer than 4n combine nodes.
  static ScanNetwork ladner_fischer(int n);

  [[nodiscard]] int lanes() const noexcept { return n_; }
  [[nodiscard]] const std::vector<ScanNode>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<int>& outputs() const noexcept { return outputs_; }
  [[nodiscard]] int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] int depth() const noexcept { return depth_; }

 private:
  int n_ = 0;
  int depth_ = 0;
  std::vector<ScanNode> nodes_;
  std::vector<int> outputs_;

  friend class ScanBuilder;
};

int ceil_log2(int n);

template <class T, class Op>
std::vector<T> apply_scan(const ScanNetwork& net, std::span<const T> values, Op op,
                          OpTrace* trace = nullptr) {
  if (static_cast<int>(values.size()) != net.lanes()) {
    throw std::invalid_argument("apply_scan: " + std::to_string(values.size()) +
                                " values for a " + std::to_string(net.lanes()) + "-lane scan");
  }
  std::vector<T> ids(values.begin(), values.end());
  ids.reserve(values.size() + net.nodes().size());
  for (const auto& node : net.nodes()) {
    T combined = op(ids[node.lhs], ids[node.rhs]);
    ids.push_back(std::move(combined));
    trace_op(trace, OpKind::scan_combine, node.lhs, node.rhs);
  }
  std::vector<T> out;
  out.reserve(values.size());
  for (int id : net.outputs()) out.push_back(ids[id]);
  return out;
}

/// Inclusive prefix scan through a freshly built Ladner-Fischer network.
/// `op` must be associative. An empty input yields an empty output.
template <class T, class Op>
std::vector<T> ladner_fischer_scan(std::span<const T> values, Op op, OpTrace* trace = nullptr) {
  if (values.empty()) return {};
  return apply_scan(ScanNetwork::ladner_fischer(static_cast<int>(values.size())), values, op, trace);
}

template <class T>
struct ArgminResult {
  T min_value;
  std::vector<std::uint8_t> indicator;  // one-hot
};

/// Balanced min-tree. Each node keeps the smaller child and zeroes the
/// other child's indicator; on equal values the left (lower index) child
/// wins.
template <class T>
ArgminResult<T> argmin_tree(std::span<const T> values, OpTrace* trace = nullptr) {
  if (values.empty()) throw std::invalid_argument("argmin_tree: empty input");
  struct Partial {
    T value;
    int lo;
    int index;
  };
  std::vector<Partial> level;
  level.reserve(values.size());
  for (int i = 0; i < static_cast<int>(values.size()); ++i) level.push_back({values[i], i, i});
  while (level.size() > 1) {
    std::vector<Partial> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
      const Partial& l = level[k];
      const Partial& r = level[k + 1];
      next.push_back(r.value < l.value ? Partial{r.value, l.lo, r.index} : l);
      trace_op(trace, OpKind::min_node, l.lo, r.lo);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  std::vector<std::uint8_t> onehot(values.size(), 0);
  onehot[level.front().index] = 1;
  return {level.front().value, std::move(onehot)};
}

template <class T>
ArgminResult<T> argmin_tree(const std::vector<T>& values, OpTrace* trace = nullptr) {
  return argmin_tree(std::span<const T>(values), trace);
}

/// One-hot marker of the highest-index set bit; all zeros for an all-zero
/// input. Evaluated as a suffix AND-scan over the complemented bits on the
/// Ladner-Fischer network.
std::vector<std::uint8_t> max_index(std::span<const std::uint8_t> bits, OpTrace* trace = nullptr);

void to_json(nlohmann::json& j, const ScanNetwork& net);

}  // namespace polyproj
