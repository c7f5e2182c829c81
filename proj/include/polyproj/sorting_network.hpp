#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyproj/trace.hpp"

// Data-independent comparator networks.
//
// Lanes are numbered from 0. An ascending comparator (lo, hi) leaves the
// smaller value on lane `lo`; a descending application flips every
// comparator's orientation instead of negating data.

namespace polyproj {

struct Comparator {
  int lo;
  int hi;

  friend bool operator==(const Comparator&, const Comparator&) = default;
};

class ComparatorNetwork {
 public:
  ComparatorNetwork() = default;

  /// Validates that every pair satisfies 0 <= lo < hi < lanes and that no
  /// lane appears twice within a stage. Throws std::invalid_argument.
  ComparatorNetwork(int lanes, std::vector<std::vector<Comparator>> stages);

  /// Builds a network from a serial comparator list, placing each
  /// comparator in the earliest stage after the previous use of its lanes.
  static ComparatorNetwork from_sequence(int lanes, std::span<const Comparator> comparators);

  [[nodiscard]] int lanes() const noexcept { return lanes_; }
  [[nodiscard]] const std::vector<std::vector<Comparator>>& stages() const noexcept { return stages_; }
  [[nodiscard]] int size() const noexcept;
  [[nodiscard]] int depth() const noexcept { return static_cast<int>(stages_.size()); }
  /// Comparators in stage order.
  [[nodiscard]] std::vector<Comparator> comparators() const;

  friend bool operator==(const ComparatorNetwork&, const ComparatorNetwork&) = default;

 private:
  int lanes_ = 0;
  std::vector<std::vector<Comparator>> stages_;
};

struct NetworkMetrics {
  int size;   // comparator count, area proxy
  int depth;  // stage count, delay proxy

  friend bool operator==(const NetworkMetrics&, const NetworkMetrics&) = default;
};

NetworkMetrics network_metrics(const ComparatorNetwork& net);

inline constexpr int kMaxOptimalLanes = 16;

/// Delay-optimal network for 1 <= n <= 16.
ComparatorNetwork build_optimal_network(int n);

/// Known optimal depth for n <= 16 (0 for n = 1).
int optimal_depth(int n);

/// Batcher's odd-even merge sort. Blocks of up to 16 lanes are sorted with
/// the delay-optimal networks; n <= 16 returns build_optimal_network(n).
/// Other sizes are built for the next power of two and pruned.
ComparatorNetwork build_batcher(int n);

/// Batcher's construction all the way down to single lanes, no table.
ComparatorNetwork build_batcher_pure(int n);

/// Keeps lanes [0, n), dropping comparators that touch the others. Removed
/// lanes behave as +infinity in ascending order, so the result still sorts.
ComparatorNetwork prune_lanes(const ComparatorNetwork& net, int n);

enum class SortDirection { ascending, descending };

template <class T>
std::vector<T> apply_network(const ComparatorNetwork& net, std::span<const T> values,
                             SortDirection direction = SortDirection::ascending,
                             OpTrace* trace = nullptr) {
  if (static_cast<int>(values.size()) != net.lanes()) {
    throw std::invalid_argument("apply_network: " + std::to_string(values.size()) +
                                " values for a " + std::to_string(net.lanes()) + "-lane network");
  }
  std::vector<T> v(values.begin(), values.end());
  const bool asc = direction == SortDirection::ascending;
  for (const auto& stage : net.stages()) {
    for (const auto& c : stage) {
      T& a = v[c.lo];
      T& b = v[c.hi];
      if (asc ? (b < a) : (a < b)) std::swap(a, b);
      trace_op(trace, OpKind::compare_swap, c.lo, c.hi);
    }
  }
  return v;
}

template <class T>
std::vector<T> apply_network(const ComparatorNetwork& net, const std::vector<T>& values,
                             SortDirection direction = SortDirection::ascending,
                             OpTrace* trace = nullptr) {
  return apply_network(net, std::span<const T>(values), direction, trace);
}

struct ZeroOneReport {
  bool sorts = false;
  bool exhaustive = false;
  std::uint64_t patterns_checked = 0;
  /// A 0/1 input that the network fails to sort, when one was found.
  std::optional<std::vector<std::uint8_t>> counterexample;
};

inline constexpr int kMaxExhaustiveLanes = 24;

/// Zero-one principle check. Exhaustive over all 2^n binary inputs when
/// n <= 24, otherwise `random_trials` random binary inputs of uniformly
/// random weight drawn from `seed`.
ZeroOneReport verify_zero_one(const ComparatorNetwork& net,
                              std::uint64_t random_trials = 1'000'000, std::uint64_t seed = 1);

/// Randomized check only, regardless of lane count.
ZeroOneReport verify_zero_one_random(const ComparatorNetwork& net, std::uint64_t trials,
                                     std::uint64_t seed);

void to_json(nlohmann::json& j, const ComparatorNetwork& net);
void from_json(const nlohmann::json& j, ComparatorNetwork& net);

}  // namespace polyproj
