#pragma once

#include <cstdint>
#include <vector>

namespace polyproj {

enum class OpKind : std::uint8_t {
  compare_swap,
  scan_combine,
  min_node,
  compare,
  add,
  sub,
  mul,
  select,
  logic,
  truncate,
};

/// One primitive operation and the lanes it touched. Never carries data.
struct TraceEntry {
  OpKind kind;
  int a = -1;
  int b = -1;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Records the data-independent schedule of a circuit evaluation, so that
/// two runs on different inputs can be compared for input invariance.
class OpTrace {
 public:
  void record(OpKind kind, int a = -1, int b = -1) { entries_.push_back({kind, a, b}); }
  [[nodiscard]] const std::vector<TraceEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  void clear() noexcept { entries_.clear(); }

  friend bool operator==(const OpTrace&, const OpTrace&) = default;

 private:
  std::vector<TraceEntry> entries_;
};

inline void trace_op(OpTrace* trace, OpKind kind, int a = -1, int b = -1) {
  if (trace != nullptr) trace->record(kind, a, b);
}

}  // namespace polyproj
