#pragma once

// Exhaustive ground truth at small n. Every set partition of [2n] is pushed
// through psi (fold j+n onto j) and phi (the multiset of folded blocks); the
// images that separate each j from j+n are exactly the 2-covers of [n].

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cover_census/exact_kernel.hpp"

namespace cover_census {

/// Elements are 1-based throughout the public interface.
using Element = std::uint32_t;
using Block = std::vector<Element>;

/// Bit (e-1) represents element e.
using BlockMask = std::uint64_t;

inline constexpr std::size_t kDefaultOracleLimit = 6;
inline constexpr std::size_t kMaxGroundSize = 64;

class SetPartition {
 public:
  SetPartition() = default;

  explicit SetPartition(std::vector<std::uint8_t> rgs) : rgs_(std::move(rgs)) {
    if (rgs_.size() > kMaxGroundSize) throw std::invalid_argument("SetPartition: ground set too large");
    std::uint8_t next = 0;
    for (auto label : rgs_) {
      if (label > next) throw std::invalid_argument("SetPartition: not a restricted growth string");
      if (label == next) ++next;
    }
    blocks_ = next;
  }

  /// Builds the restricted growth string of a partition given by its blocks.
  static SetPartition from_blocks(std::size_t ground_size, const std::vector<Block>& blocks) {
    std::vector<int> label(ground_size, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw std::invalid_argument("SetPartition: empty block");
      for (Element e : blocks[b]) {
        if (e == 0 || e > ground_size || label[e - 1] != -1)
          throw std::invalid_argument("SetPartition: blocks do not partition the ground set");
        label[e - 1] = static_cast<int>(b);
      }
    }
    std::vector<std::uint8_t> rgs(ground_size);
    std::vector<int> renumber(blocks.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < ground_size; ++i) {
      if (label[i] == -1) throw std::invalid_argument("SetPartition: element not covered");
      if (renumber[label[i]] == -1) renumber[label[i]] = next++;
      rgs[i] = static_cast<std::uint8_t>(renumber[label[i]]);
    }
    return SetPartition(std::move(rgs));
  }

  std::size_t ground_size() const noexcept { return rgs_.size(); }
  std::size_t block_count() const noexcept { return blocks_; }
  const std::vector<std::uint8_t>& rgs() const noexcept { return rgs_; }

  std::vector<BlockMask> block_masks() const {
    std::vector<BlockMask> masks(blocks_, 0);
    for (std::size_t i = 0; i < rgs_.size(); ++i) masks[rgs_[i]] |= BlockMask{1} << i;
    return masks;
  }

  std::vector<Block> blocks() const {
    std::vector<Block> out(blocks_);
    for (std::size_t i = 0; i < rgs_.size(); ++i) out[rgs_[i]].push_back(static_cast<Element>(i + 1));
    return out;
  }

  bool operator==(const SetPartition&) const = default;
  auto operator<=>(const SetPartition&) const = default;

 private:
  std::vector<std::uint8_t> rgs_;
  std::size_t blocks_ = 0;
};

inline Block mask_to_block(BlockMask mask) {
  Block out;
  while (mask != 0) {
    out.push_back(static_cast<Element>(std::countr_zero(mask) + 1));
    mask &= mask - 1;
  }
  return out;
}

inline BlockMask block_to_mask(const Block& block, std::size_t ground_size) {
  BlockMask mask = 0;
  for (Element e : block) {
    if (e == 0 || e > ground_size) throw std::invalid_argument("element outside the ground set");
    mask |= BlockMask{1} << (e - 1);
  }
  return mask;
}

inline BlockMask psi_mask(BlockMask block, std::size_t n) {
  const BlockMask low = n >= 64 ? ~BlockMask{0} : (BlockMask{1} << n) - 1;
  return (block | (block >> n)) & low;
}

/// psi(S) = {j : j in S or j+n in S} for S a subset of [2n].
inline Block psi(const Block& block, std::size_t n) {
  return mask_to_block(psi_mask(block_to_mask(block, 2 * n), n));
}

/// A multiset of nonempty blocks over [n] in which every element occurs in
/// exactly two blocks. Canonical form: each block ascending, blocks in
/// lexicographic order with duplicates adjacent.
class TwoCover {
 public:
  TwoCover(std::size_t n, std::vector<Block> blocks) : n_(n), blocks_(std::move(blocks)) {
    if (n > kMaxGroundSize) throw std::invalid_argument("TwoCover: n too large");
    std::vector<int> occurrences(n, 0);
    for (auto& b : blocks_) {
      if (b.empty()) throw std::invalid_argument("TwoCover: empty block");
      std::sort(b.begin(), b.end());
      if (std::adjacent_find(b.begin(), b.end()) != b.end())
        throw std::invalid_argument("TwoCover: repeated element inside a block");
      for (Element e : b) {
        if (e == 0 || e > n) throw std::invalid_argument("TwoCover: element outside [n]");
        ++occurrences[e - 1];
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (occurrences[j] != 2)
        throw std::invalid_argument("TwoCover: element " + std::to_string(j + 1) + " does not lie in exactly 2 blocks");
    std::sort(blocks_.begin(), blocks_.end());
  }

  static TwoCover from_masks(std::size_t n, const std::vector<BlockMask>& masks) {
    std::vector<Block> blocks;
    blocks.reserve(masks.size());
    for (auto m : masks) blocks.push_back(mask_to_block(m));
    return TwoCover(n, std::move(blocks));
  }

  std::size_t n() const noexcept { return n_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  /// No repeated block.
  bool proper() const { return duplicate_pairs() == 0; }

  /// No two blocks share two elements (no repeated incidence-matrix column).
  bool restricted() const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
        std::size_t shared = 0;
        auto a = blocks_[i].begin();
        auto b = blocks_[j].begin();
        while (a != blocks_[i].end() && b != blocks_[j].end()) {
          if (*a < *b) {
            ++a;
          } else if (*b < *a) {
            ++b;
          } else {
            if (++shared >= 2) return false;
            ++a;
            ++b;
          }
        }
      }
    return true;
  }

  /// Number of unordered pairs of equal blocks. A block occurs at most twice.
  std::size_t duplicate_pairs() const {
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + 1 < blocks_.size(); ++i)
      if (blocks_[i] == blocks_[i + 1]) ++pairs;
    return pairs;
  }

  bool operator==(const TwoCover&) const = default;
  auto operator<=>(const TwoCover&) const = default;

 private:
  std::size_t n_;
  std::vector<Block> blocks_;
};

/// Simple graph on [n], adjacency stored as one bitmask row per vertex.
class LabeledGraph {
 public:
  explicit LabeledGraph(std::size_t n) : adjacency_(n, 0) {
    if (n > kMaxGroundSize) throw std::invalid_argument("LabeledGraph: too many vertices");
  }

  LabeledGraph(std::size_t n, const std::vector<std::pair<Element, Element>>& edges) : LabeledGraph(n) {
    for (auto [a, b] : edges) add_edge(a, b);
  }

  void add_edge(Element a, Element b) {
    if (a == b) throw std::invalid_argument("LabeledGraph: self-loop");
    if (a == 0 || b == 0 || a > vertex_count() || b > vertex_count())
      throw std::invalid_argument("LabeledGraph: vertex outside [n]");
    adjacency_[a - 1] |= BlockMask{1} << (b - 1);
    adjacency_[b - 1] |= BlockMask{1} << (a - 1);
  }

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }

  bool adjacent(Element a, Element b) const {
    return (adjacency_.at(a - 1) >> (b - 1)) & 1U;
  }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (auto row : adjacency_) twice += static_cast<std::size_t>(std::popcount(row));
    return twice / 2;
  }

  const std::vector<BlockMask>& adjacency() const noexcept { return adjacency_; }

  bool operator==(const LabeledGraph&) const = default;
  auto operator<=>(const LabeledGraph&) const = default;

 private:
  std::vector<BlockMask> adjacency_;
};

/// Visits every partition of [N] in lexicographic restricted-growth-string
/// order whose string starts with `prefix`. The visitor receives the string.
template <typename Visitor>
void for_each_partition(std::size_t N, Visitor&& visit, const std::vector<std::uint8_t>& prefix = {}) {
  if (N > kMaxGroundSize) throw std::invalid_argument("for_each_partition: ground set too large");
  if (prefix.size() > N) throw std::invalid_argument("for_each_partition: prefix longer than ground set");
  std::vector<std::uint8_t> rgs(N, 0);
  // runmax[i] = 1 + max(rgs[0..i]), the number of labels in use after i.
  std::vector<std::uint8_t> runmax(N, 0);
  std::uint8_t used = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] > used) throw std::invalid_argument("for_each_partition: prefix is not a restricted growth string");
    rgs[i] = prefix[i];
    used = std::max<std::uint8_t>(used, static_cast<std::uint8_t>(prefix[i] + 1));
    runmax[i] = used;
  }
  const std::size_t fixed = prefix.size();
  for (std::size_t i = fixed; i < N; ++i) {
    rgs[i] = 0;
    used = std::max<std::uint8_t>(used, 1);
    runmax[i] = used;
  }
  if (N == 0) {
    visit(static_cast<const std::vector<std::uint8_t>&>(rgs));
    return;
  }
  while (true) {
    visit(static_cast<const std::vector<std::uint8_t>&>(rgs));
    // Rightmost position that can still grow without breaking the RGS rule.
    const std::size_t lowest = std::max<std::size_t>(fixed, 1);
    std::size_t i = N;
    bool found = false;
    while (i > lowest) {
      --i;
      if (rgs[i] < runmax[i - 1]) {
        found = true;
        break;
      }
    }
    if (!found) return;
    ++rgs[i];
    runmax[i] = std::max<std::uint8_t>(runmax[i - 1], static_cast<std::uint8_t>(rgs[i] + 1));
    for (std::size_t j = i + 1; j < N; ++j) {
      rgs[j] = 0;
      runmax[j] = runmax[j - 1];
    }
  }
}

/// All partitions of [N] in lexicographic restricted-growth-string order.
inline std::vector<SetPartition> enumerate_partitions(std::size_t N) {
  std::vector<SetPartition> out;
  for_each_partition(N, [&](const std::vector<std::uint8_t>& rgs) { out.emplace_back(rgs); });
  return out;
}

struct Classification {
  bool in_e1 = false;  ///< j and j+n in different blocks for every j
  bool in_e2 = false;  ///< all psi-images distinct
  std::size_t z = 0;   ///< unordered block pairs with equal psi-image
  std::optional<TwoCover> cover;  ///< phi(p), only when in_e1
};

inline Classification classify(const SetPartition& p, std::size_t n) {
  if (p.ground_size() != 2 * n) throw std::invalid_argument("classify: partition is not of [2n]");
  Classification out;
  const auto& rgs = p.rgs();
  out.in_e1 = true;
  for (std::size_t j = 0; j < n; ++j)
    if (rgs[j] == rgs[j + n]) out.in_e1 = false;
  std::vector<BlockMask> images;
  for (auto m : p.block_masks()) images.push_back(psi_mask(m, n));
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (images[i] == images[j]) ++out.z;
  out.in_e2 = out.z == 0;
  if (out.in_e1) out.cover = TwoCover::from_masks(n, images);
  return out;
}

/// Number of j in [n] whose j and j+n share a block.
inline std::size_t shared_pairs(const std::vector<std::uint8_t>& rgs, std::size_t n) {
  std::size_t x = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (rgs[j] == rgs[j + n]) ++x;
  return x;
}

struct OracleOptions {
  std::size_t limit = kDefaultOracleLimit;
  /// Admits n = limit + 1.
  bool slow_mode = false;
  unsigned workers = 1;
};

inline std::size_t effective_oracle_limit(const OracleOptions& options) {
  return options.limit + (options.slow_mode ? 1 : 0);
}

/// Violation of an identity the oracle checks on its own output.
class OracleIdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One distinct phi-image together with its preimage count.
struct CoverFiber {
  TwoCover cover;
  std::uint64_t fiber = 0;       ///< |phi^{-1}(cover)| within E_{1,n}
  std::uint64_t fiber_in_c = 0;  ///< preimages lying in C_n
  std::size_t rho = 0;           ///< duplicate block pairs
};

/// Everything one pass over the partitions of [2n] records.
struct OracleCensus {
  std::size_t n = 0;
  std::uint64_t partitions = 0;
  std::uint64_t e1 = 0, e2 = 0, c = 0;
  std::vector<std::uint64_t> d_histogram;  ///< |D_{rho,n}|, rho = 0..n
  std::vector<std::uint64_t> x_histogram;  ///< partitions with X = x, x = 0..n
  std::vector<CoverFiber> covers;          ///< sorted by cover
};

namespace detail {

struct CoverKeyHash {
  std::size_t operator()(const std::vector<BlockMask>& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto m : key) {
      h ^= m + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct CensusAccumulator {
  std::uint64_t partitions = 0, e1 = 0, e2 = 0, c = 0;
  std::vector<std::uint64_t> d, x;
  std::unordered_map<std::vector<BlockMask>, std::pair<std::uint64_t, std::uint64_t>, CoverKeyHash> fibers;

  explicit CensusAccumulator(std::size_t n) : d(n + 1, 0), x(n + 1, 0) {}

  void merge(CensusAccumulator&& other) {
    partitions += other.partitions;
    e1 += other.e1;
    e2 += other.e2;
    c += other.c;
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] += other.d[i];
      x[i] += other.x[i];
    }
    for (auto& [key, counts] : other.fibers) {
      auto& mine = fibers[key];
      mine.first += counts.first;
      mine.second += counts.second;
    }
  }
};

// RGS prefixes of length `depth` (or N when shorter), the units of parallel work.
inline std::vector<std::vector<std::uint8_t>> partition_prefixes(std::size_t N, std::size_t depth) {
  std::vector<std::vector<std::uint8_t>> out;
  const std::size_t len = std::min(N, depth);
  for_each_partition(len, [&](const std::vector<std::uint8_t>& rgs) { out.push_back(rgs); });
  return out;
}

inline void census_visit(CensusAccumulator& acc, const std::vector<std::uint8_t>& rgs, std::size_t n,
                         std::vector<BlockMask>& scratch) {
  ++acc.partitions;
  const std::size_t x = shared_pairs(rgs, n);
  ++acc.x[x];
  std::size_t blocks = 0;
  for (auto label : rgs) blocks = std::max<std::size_t>(blocks, label + 1);
  scratch.assign(blocks, 0);
  for (std::size_t i = 0; i < rgs.size(); ++i) scratch[rgs[i]] |= BlockMask{1} << i;
  for (auto& m : scratch) m = psi_mask(m, n);
  std::sort(scratch.begin(), scratch.end());
  std::size_t z = 0;
  // After sorting equal images are adjacent; a run of length r adds C(r,2).
  for (std::size_t i = 0; i < scratch.size();) {
    std::size_t j = i + 1;
    while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
    const std::size_t run = j - i;
    z += run * (run - 1) / 2;
    i = j;
  }
  if (z == 0) ++acc.e2;
  if (x != 0) return;
  ++acc.e1;
  if (z == 0) ++acc.c;
  ++acc.d[z];
  auto& counts = acc.fibers[scratch];
  ++counts.first;
  if (z == 0) ++counts.second;
}

}  // namespace detail

inline void require_within_oracle_limit(std::size_t n, const OracleOptions& options, const char* what) {
  const std::size_t limit = effective_oracle_limit(options);
  if (n > limit)
    throw std::out_of_range(std::string(what) + ": n = " + std::to_string(n) + " exceeds the oracle limit " +
                            std::to_string(limit) + (options.slow_mode ? "" : " (slow mode admits one more)"));
  if (2 * n > kMaxGroundSize) throw std::out_of_range(std::string(what) + ": n too large for bitmask blocks");
}

/// One exhaustive pass over the partitions of [2n]. With several workers the
/// work is split over restricted-growth-string prefixes and merged; the
/// result does not depend on the worker count.
inline OracleCensus oracle_census(std::size_t n, const OracleOptions& options = {}) {
  require_within_oracle_limit(n, options, "oracle_census");
  const std::size_t N = 2 * n;
  const auto prefixes = detail::partition_prefixes(N, 6);
  const unsigned workers = std::max(1U, options.workers);

  std::vector<detail::CensusAccumulator> partial(workers, detail::CensusAccumulator(n));
  auto run = [&](unsigned w) {
    std::vector<BlockMask> scratch;
    for (std::size_t p = w; p < prefixes.size(); p += workers)
      for_each_partition(
          N, [&](const std::vector<std::uint8_t>& rgs) { detail::census_visit(partial[w], rgs, n, scratch); },
          prefixes[p]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  for (unsigned w = 1; w < workers; ++w) partial[0].merge(std::move(partial[w]));
  auto& acc = partial[0];

  OracleCensus census;
  census.n = n;
  census.partitions = acc.partitions;
  census.e1 = acc.e1;
  census.e2 = acc.e2;
  census.c = acc.c;
  census.d_histogram = acc.d;
  census.x_histogram = acc.x;
  census.covers.reserve(acc.fibers.size());
  for (const auto& [key, counts] : acc.fibers) {
    CoverFiber entry{TwoCover::from_masks(n, key), counts.first, counts.second, 0};
    entry.rho = entry.cover.duplicate_pairs();
    census.covers.push_back(std::move(entry));
  }
  std::sort(census.covers.begin(), census.covers.end(),
            [](const CoverFiber& a, const CoverFiber& b) { return a.cover < b.cover; });
  return census;
}

struct OracleCounts {
  std::size_t n = 0;
  std::uint64_t s = 0, t = 0, u = 0, v = 0;
  std::uint64_t e1 = 0, e2 = 0, c = 0;
  std::vector<std::uint64_t> d_histogram;
};

/// Counts from a census; checks s_n 2^n = sum_rho |D_rho| 2^rho and
/// t_n 2^n = |C_n|, throwing OracleIdentityViolation otherwise.
inline OracleCounts oracle_counts(const OracleCensus& census) {
  OracleCounts out;
  out.n = census.n;
  out.e1 = census.e1;
  out.e2 = census.e2;
  out.c = census.c;
  out.d_histogram = census.d_histogram;
  for (const auto& entry : census.covers) {
    const bool proper = entry.rho == 0;
    const bool restricted = entry.cover.restricted();
    ++out.s;
    if (proper) ++out.t;
    if (restricted) ++out.u;
    if (proper && restricted) ++out.v;
  }
  Natural weighted = 0;
  for (std::size_t rho = 0; rho < census.d_histogram.size(); ++rho)
    weighted += Natural(static_cast<unsigned long>(census.d_histogram[rho])) * pow2(rho);
  const Natural scale = pow2(census.n);
  if (Natural(static_cast<unsigned long>(out.s)) * scale != weighted)
    throw OracleIdentityViolation("s_n 2^n != sum_rho |D_rho,n| 2^rho at n = " + std::to_string(census.n));
  if (Natural(static_cast<unsigned long>(out.t)) * scale != Natural(static_cast<unsigned long>(out.c)))
    throw OracleIdentityViolation("t_n 2^n != |C_n| at n = " + std::to_string(census.n));
  return out;
}

inline OracleCounts oracle_counts(std::size_t n, const OracleOptions& options = {}) {
  return oracle_counts(oracle_census(n, options));
}

struct FiberMismatch {
  TwoCover cover;
  std::uint64_t expected = 0;
  std::uint64_t actual = 0;
};

struct FiberReport {
  std::size_t n = 0;
  std::size_t covers_checked = 0;
  std::size_t proper_covers = 0;
  std::size_t proper_images_of_c = 0;  ///< distinct phi-images of C_n
  std::vector<FiberMismatch> mismatches;
  bool c_maps_onto_proper = false;

  bool ok() const { return mismatches.empty() && c_maps_onto_proper; }
};

/// Every cover with rho duplicate pairs must have exactly 2^{n-rho}
/// preimages, proper ones all inside C_n, and phi(C_n) must be exactly the
/// proper covers.
inline FiberReport fiber_check(const OracleCensus& census) {
  FiberReport report;
  report.n = census.n;
  bool c_images_all_proper = true;
  for (const auto& entry : census.covers) {
    ++report.covers_checked;
    const std::uint64_t expected = std::uint64_t{1} << (census.n - entry.rho);
    if (entry.fiber != expected) report.mismatches.push_back({entry.cover, expected, entry.fiber});
    if (entry.rho == 0) {
      ++report.proper_covers;
      if (entry.fiber_in_c != expected) report.mismatches.push_back({entry.cover, expected, entry.fiber_in_c});
    }
    if (entry.fiber_in_c > 0) {
      ++report.proper_images_of_c;
      if (entry.rho != 0) c_images_all_proper = false;
    }
  }
  report.c_maps_onto_proper = c_images_all_proper && report.proper_images_of_c == report.proper_covers;
  return report;
}

inline FiberReport fiber_check(std::size_t n, const OracleOptions& options = {}) {
  return fiber_check(oracle_census(n, options));
}

/// i ~ j iff some block holds both: vertices are the elements of [n] (edges
/// of the root graph), blocks are the root's vertices.
inline LabeledGraph line_graph_of(const TwoCover& cover) {
  if (!cover.restricted())
    throw std::invalid_argument("line_graph_of: cover is not restricted (root would be a multigraph)");
  LabeledGraph g(cover.n());
  for (const auto& block : cover.blocks())
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b) g.add_edge(block[a], block[b]);
  return g;
}

/// Distinct labelled line graphs over the restricted covers in the census.
inline std::uint64_t oracle_line_count(const OracleCensus& census) {
  std::vector<LabeledGraph> graphs;
  for (const auto& entry : census.covers)
    if (entry.cover.restricted()) graphs.push_back(line_graph_of(entry.cover));
  std::sort(graphs.begin(), graphs.end());
  return static_cast<std::uint64_t>(std::unique(graphs.begin(), graphs.end()) - graphs.begin());
}

inline std::uint64_t oracle_line_count(std::size_t n, const OracleOptions& options = {}) {
  return oracle_line_count(oracle_census(n, options));
}

/// sum over partitions of [2n] of the falling factorial (X)_r, r = 0..n.
inline std::vector<Natural> moment_sums(const OracleCensus& census) {
  std::vector<Natural> out(census.n + 1, 0);
  for (std::size_t r = 0; r <= census.n; ++r)
    for (std::size_t x = 0; x < census.x_histogram.size(); ++x)
      out[r] += falling_factorial(x, r) * static_cast<unsigned long>(census.x_histogram[x]);
  return out;
}

}  // namespace cover_census
