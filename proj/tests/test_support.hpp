#pragma once

// Independent reference computations used only by the tests.

#include <cstdint>
#include <vector>

#include "cover_census/exact_kernel.hpp"

namespace cover_census::testing {

/// Restricted growth strings of length n by plain recursion.
inline void brute_rgs(std::size_t n, std::vector<int>& prefix, int blocks, std::vector<std::vector<int>>& out) {
  if (prefix.size() == n) {
    out.push_back(prefix);
    return;
  }
  for (int label = 0; label <= blocks; ++label) {
    prefix.push_back(label);
    brute_rgs(n, prefix, label == blocks ? blocks + 1 : blocks, out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<int>> brute_rgs(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  brute_rgs(n, prefix, 0, out);
  return out;
}

inline std::uint64_t brute_stirling2(std::size_t n, std::size_t k) {
  std::uint64_t count = 0;
  for (const auto& rgs : brute_rgs(n)) {
    int blocks = 0;
    for (int l : rgs) blocks = std::max(blocks, l + 1);
    if (static_cast<std::size_t>(blocks) == k) ++count;
  }
  return count;
}

inline Natural pascal(std::size_t n, std::size_t k) {
  std::vector<Natural> row{1};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<Natural> next(i + 1);
    next[0] = next[i] = 1;
    for (std::size_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return k <= n ? row[k] : Natural(0);
}

/// Term-by-term rational Cauchy product, truncated at `degree`.
inline std::vector<Rational> naive_product(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                           std::size_t degree) {
  std::vector<Rational> out(degree + 1, 0);
  for (std::size_t i = 0; i < a.size() && i <= degree; ++i)
    for (std::size_t j = 0; j < b.size() && i + j <= degree; ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// Counts produced by a separate brute-force enumerator (a direct scan of
/// every partition of [2n], folding blocks and deduplicating covers).
struct ReferenceCounts {
  std::uint64_t s, t, u, v, l, e1, e2, c;
  std::vector<std::uint64_t> d;
};

inline const std::vector<ReferenceCounts>& reference_counts() {
  static const std::vector<ReferenceCounts> table{
      {1, 1, 1, 1, 1, 1, 1, 1, {1}},
      {1, 0, 1, 0, 1, 1, 1, 0, {0, 1}},
      {3, 1, 2, 1, 2, 7, 10, 4, {4, 2, 1}},
      {16, 8, 9, 5, 8, 87, 153, 64, {64, 16, 6, 1}},
      {139, 80, 70, 43, 60, 1657, 3255, 1280, {1280, 312, 52, 12, 1}},
      {1750, 1088, 794, 518, 729, 43833, 93508, 34816, {34816, 7856, 1000, 140, 20, 1}},
  };
  return table;
}

}  // namespace cover_census::testing
