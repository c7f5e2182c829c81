#include "polyproj/sorting_network.hpp"

#include <array>
#include <bit>
#include <numeric>
#include <random>

namespace polyproj {
namespace {

using Layers = std::vector<std::vector<Comparator>>;

// Delay-optimal networks for even lane counts; odd counts are obtained by
// pruning the next even table. 4 and 8 are Batcher's networks, the others
// were found by a SAT search over fixed-depth layers and reduced by removing
// redundant comparators. All are exhaustively checked in the test suite.
const Layers& optimal_table(int n) {
  static const Layers t2 = {{{0, 1}}};
  static const Layers t4 = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{1, 2}}};
  static const Layers t6 = {{{0, 5}, {1, 3}, {2, 4}},
                            {{1, 2}, {3, 4}},
                            {{0, 3}, {2, 5}},
                            {{0, 1}, {2, 3}, {4, 5}},
                            {{1, 2}, {3, 4}}};
  static const Layers t8 = {{{0, 1}, {2, 3}, {4, 5}, {6, 7}},
                            {{0, 2}, {1, 3}, {4, 6}, {5, 7}},
                            {{1, 2}, {5, 6}},
                            {{0, 4}, {1, 5}, {2, 6}, {3, 7}},
                            {{2, 4}, {3, 5}},
                            {{1, 2}, {3, 4}, {5, 6}}};
  static const Layers t10 = {{{0, 1}, {2, 5}, {3, 6}, {4, 7}, {8, 9}},
                             {{0, 6}, {1, 8}, {2, 4}, {3, 9}, {5, 7}},
                             {{0, 2}, {1, 3}, {4, 5}, {6, 8}, {7, 9}},
                             {{0, 1}, {2, 7}, {3, 5}, {4, 6}, {8, 9}},
                             {{1, 2}, {3, 4}, {5, 6}, {7, 8}},
                             {{1, 3}, {2, 4}, {5, 7}, {6, 8}},
                             {{2, 3}, {4, 5}, {6, 7}}};
  static const Layers t12 = {{{0, 8}, {1, 7}, {2, 6}, {3, 11}, {4, 10}, {5, 9}},
                             {{0, 1}, {2, 5}, {3, 4}, {6, 9}, {7, 8}, {10, 11}},
                             {{0, 4}, {1, 5}, {2, 3}, {6, 7}, {8, 10}, {9, 11}},
                             {{0, 2}, {1, 3}, {4, 5}, {6, 8}, {7, 9}, {10, 11}},
                             {{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}},
                             {{2, 3}, {4, 5}, {6, 7}, {8, 9}},
                             {{2, 4}, {3, 6}, {5, 8}, {7, 9}},
                             {{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}}};
  static const Layers t16 = {
      {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}, {12, 13}, {14, 15}},
      {{0, 2}, {1, 3}, {4, 6}, {5, 7}, {8, 10}, {9, 11}, {12, 14}, {13, 15}},
      {{0, 4}, {1, 5}, {2, 6}, {3, 7}, {8, 12}, {9, 13}, {10, 14}, {11, 15}},
      {{0, 8}, {1, 9}, {2, 10}, {3, 11}, {4, 12}, {5, 13}, {6, 14}, {7, 15}},
      {{1, 4}, {2, 8}, {3, 10}, {5, 6}, {7, 11}, {9, 12}, {13, 14}},
      {{3, 12}, {4, 8}, {5, 10}, {6, 9}, {7, 13}},
      {{1, 2}, {3, 8}, {5, 6}, {7, 12}, {9, 10}, {11, 13}},
      {{2, 4}, {3, 5}, {6, 8}, {7, 9}, {10, 12}, {11, 14}},
      {{3, 4}, {5, 6}, {7, 8}, {9, 10}, {11, 12}, {13, 14}}};
  switch (n) {
    case 2: return t2;
    case 4: return t4;
    case 6: return t6;
    case 8: return t8;
    case 10: return t10;
    case 12: return t12;
    case 16: return t16;
    default: throw std::logic_error("no optimal table for " + std::to_string(n) + " lanes");
  }
}

int table_size_for(int n) {
  if (n <= 2) return 2;
  if (n <= 4) return 4;
  if (n <= 6) return 6;
  if (n <= 8) return 8;
  if (n <= 10) return 10;
  if (n <= 12) return 12;
  return 16;
}

int next_pow2(int n) { return static_cast<int>(std::bit_ceil(static_cast<unsigned>(n))); }

// Serial comparator list of Batcher's odd-even merge sort on `p2` lanes
// (a power of two), where blocks of `base` lanes are assumed already
// handled by the caller.
void append_batcher_merges(std::vector<Comparator>& out, int p2, int base) {
  for (int p = base; p < p2; p <<= 1) {
    for (int k = p; k >= 1; k >>= 1) {
      for (int j = k % p; j + k < p2; j += 2 * k) {
        for (int i = 0; i < std::min(k, p2 - j - k); ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) out.push_back({i + j, i + j + k});
        }
      }
    }
  }
}

bool sorted_words(std::span<const std::uint64_t> lanes, std::uint64_t valid, int& bad_bit) {
  std::uint64_t bad = 0;
  for (std::size_t i = 0; i + 1 < lanes.size(); ++i) bad |= lanes[i] & ~lanes[i + 1];
  bad &= valid;
  if (bad == 0) return true;
  bad_bit = std::countr_zero(bad);
  return false;
}

void run_sliced(const std::vector<Comparator>& comps, std::vector<std::uint64_t>& w) {
  for (const auto& c : comps) {
    const std::uint64_t a = w[c.lo];
    const std::uint64_t b = w[c.hi];
    w[c.lo] = a & b;
    w[c.hi] = a | b;
  }
}

std::vector<std::uint8_t> extract_pattern(const std::vector<std::uint64_t>& input, int bit) {
  std::vector<std::uint8_t> p(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) p[i] = (input[i] >> bit) & 1U;
  return p;
}

}  // namespace

ComparatorNetwork::ComparatorNetwork(int lanes, std::vector<std::vector<Comparator>> stages)
    : lanes_(lanes), stages_(std::move(stages)) {
  if (lanes_ < 0) throw std::invalid_argument("network lane count must be non-negative");
  std::vector<int> seen(static_cast<std::size_t>(lanes_), -1);
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    for (const auto& c : stages_[s]) {
      if (c.lo < 0 || c.lo >= c.hi || c.hi >= lanes_) {
        throw std::invalid_argument("comparator (" + std::to_string(c.lo) + "," +
                                    std::to_string(c.hi) + ") invalid for " +
                                    std::to_string(lanes_) + " lanes");
      }
      const int tag = static_cast<int>(s);
      if (seen[c.lo] == tag || seen[c.hi] == tag) {
        throw std::invalid_argument("lane used twice in stage " + std::to_string(s));
      }
      seen[c.lo] = seen[c.hi] = tag;
    }
  }
}

ComparatorNetwork ComparatorNetwork::from_sequence(int lanes,
                                                   std::span<const Comparator> comparators) {
  std::vector<int> ready(static_cast<std::size_t>(std::max(lanes, 0)), 0);
  std::vector<std::vector<Comparator>> stages;
  for (const auto& c : comparators) {
    if (c.lo < 0 || c.lo >= c.hi || c.hi >= lanes) {
      throw std::invalid_argument("comparator out of range in from_sequence");
    }
    const int s = std::max(ready[c.lo], ready[c.hi]);
    if (s == static_cast<int>(stages.size())) stages.emplace_back();
    stages[s].push_back(c);
    ready[c.lo] = ready[c.hi] = s + 1;
  }
  return {lanes, std::move(stages)};
}

int ComparatorNetwork::size() const noexcept {
  int total = 0;
  for (const auto& s : stages_) total += static_cast<int>(s.size());
  return total;
}

std::vector<Comparator> ComparatorNetwork::comparators() const {
  std::vector<Comparator> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (const auto& s : stages_) out.insert(out.end(), s.begin(), s.end());
  return out;
}

NetworkMetrics network_metrics(const ComparatorNetwork& net) { return {net.size(), net.depth()}; }

int optimal_depth(int n) {
  static constexpr std::array<int, 17> depths = {0, 0, 1, 3, 3, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9, 9, 9};
  if (n < 1 || n > kMaxOptimalLanes) {
    throw std::invalid_argument("optimal depth is tabulated for 1..16 lanes, got " +
                                std::to_string(n));
  }
  return depths[n];
}

ComparatorNetwork prune_lanes(const ComparatorNetwork& net, int n) {
  if (n < 0 || n > net.lanes()) throw std::invalid_argument("prune_lanes: lane count out of range");
  std::vector<Comparator> kept;
  for (const auto& c : net.comparators()) {
    if (c.hi < n) kept.push_back(c);
  }
  return ComparatorNetwork::from_sequence(n, kept);
}

ComparatorNetwork build_optimal_network(int n) {
  if (n < 1 || n > kMaxOptimalLanes) {
    throw std::invalid_argument("optimal networks cover 1..16 lanes, got " + std::to_string(n));
  }
  if (n == 1) return ComparatorNetwork(1, {});
  const int base = table_size_for(n);
  ComparatorNetwork full(base, optimal_table(base));
  return base == n ? full : prune_lanes(full, n);
}

ComparatorNetwork build_batcher_pure(int n) {
  if (n < 1) throw std::invalid_argument("build_batcher: lane count must be >= 1");
  const int p2 = next_pow2(n);
  std::vector<Comparator> seq;
  append_batcher_merges(seq, p2, 1);
  return prune_lanes(ComparatorNetwork::from_sequence(p2, seq), n);
}

ComparatorNetwork build_batcher(int n) {
  if (n < 1) throw std::invalid_argument("build_batcher: lane count must be >= 1");
  if (n <= kMaxOptimalLanes) return build_optimal_network(n);
  const int p2 = next_pow2(n);
  std::vector<Comparator> seq;
  const auto block = build_optimal_network(kMaxOptimalLanes).comparators();
  for (int offset = 0; offset < p2; offset += kMaxOptimalLanes) {
    for (const auto& c : block) seq.push_back({c.lo + offset, c.hi + offset});
  }
  append_batcher_merges(seq, p2, kMaxOptimalLanes);
  return prune_lanes(ComparatorNetwork::from_sequence(p2, seq), n);
}

ZeroOneReport verify_zero_one_random(const ComparatorNetwork& net, std::uint64_t trials,
                                     std::uint64_t seed) {
  const int n = net.lanes();
  ZeroOneReport report{true, false, 0, std::nullopt};
  if (n <= 1) return report;
  const auto comps = net.comparators();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight_dist(0, n);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> input(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> work;
  while (report.patterns_checked < trials) {
    const std::uint64_t batch = std::min<std::uint64_t>(64, trials - report.patterns_checked);
    std::fill(input.begin(), input.end(), 0);
    for (std::uint64_t k = 0; k < batch; ++k) {
      std::iota(order.begin(), order.end(), 0);
      const int w = weight_dist(rng);
      for (int i = 0; i < w; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
        input[order[i]] |= std::uint64_t{1} << k;
      }
    }
    work = input;
    run_sliced(comps, work);
    const std::uint64_t valid = batch == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << batch) - 1;
    int bad = 0;
    report.patterns_checked += batch;
    if (!sorted_words(work, valid, bad)) {
      report.sorts = false;
      report.counterexample = extract_pattern(input, bad);
      return report;
    }
  }
  return report;
}

ZeroOneReport verify_zero_one(const ComparatorNetwork& net, std::uint64_t random_trials,
                              std::uint64_t seed) {
  const int n = net.lanes();
  if (n > kMaxExhaustiveLanes) return verify_zero_one_random(net, random_trials, seed);

  ZeroOneReport report{true, true, 0, std::nullopt};
  const auto comps = net.comparators();
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t per_word = std::min<std::uint64_t>(64, total);
  const std::uint64_t valid = per_word == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << per_word) - 1;

  // Lanes below 6 vary inside a word; higher lanes are constant per word.
  static constexpr std::array<std::uint64_t, 6> low_masks = {
      0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
      0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
  std::vector<std::uint64_t> input(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> work;
  for (std::uint64_t base = 0; base < total; base += per_word) {
    for (int i = 0; i < n; ++i) {
      input[i] = i < 6 ? low_masks[i] : (((base >> i) & 1U) ? ~std::uint64_t{0} : 0);
    }
    work = input;
    run_sliced(comps, work);
    int bad = 0;
    report.patterns_checked += per_word;
    if (!sorted_words(work, valid, bad)) {
      report.sorts = false;
      report.counterexample = extract_pattern(input, bad);
      return report;
    }
  }
  return report;
}

void to_json(nlohmann::json& j, const ComparatorNetwork& net) {
  auto stages = nlohmann::json::array();
  for (const auto& s : net.stages()) {
    auto stage = nlohmann::json::array();
    for (const auto& c : s) stage.push_back({c.lo, c.hi});
    stages.push_back(std::move(stage));
  }
  j = nlohmann::json{{"n", net.lanes()}, {"stages", std::move(stages)}};
}

void from_json(const nlohmann::json& j, ComparatorNetwork& net) {
  std::vector<std::vector<Comparator>> stages;
  for (const auto& s : j.at("stages")) {
    auto& stage = stages.emplace_back();
    for (const auto& c : s) stage.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  }
  net = ComparatorNetwork(j.at("n").get<int>(), std::move(stages));
}

}  // namespace polyproj
