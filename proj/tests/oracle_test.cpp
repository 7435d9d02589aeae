#include <gtest/gtest.h>

#include <algorithm>

#include "cover_census/cover_counts.hpp"
#include "cover_census/oracle.hpp"
#include "test_support.hpp"

namespace cover_census {
namespace {

const CoverFiber& find_fiber(const OracleCensus& census, const TwoCover& cover) {
  auto it = std::find_if(census.covers.begin(), census.covers.end(),
                         [&](const CoverFiber& f) { return f.cover == cover; });
  if (it == census.covers.end()) throw std::runtime_error("cover not found");
  return *it;
}

TEST(Partitions, CountsAndOrder) {
  EXPECT_EQ(enumerate_partitions(4).size(), 15U);
  ASSERT_EQ(enumerate_partitions(1).size(), 1U);
  EXPECT_EQ(enumerate_partitions(1)[0].blocks(), (std::vector<Block>{{1}}));
  ASSERT_EQ(enumerate_partitions(0).size(), 1U);
  EXPECT_EQ(enumerate_partitions(0)[0].block_count(), 0U);

  for (std::size_t N = 0; N <= 9; ++N) {
    const auto parts = enumerate_partitions(N);
    EXPECT_EQ(Natural(static_cast<unsigned long>(parts.size())), bell(N)) << N;
    EXPECT_TRUE(std::is_sorted(parts.begin(), parts.end())) << N;
    EXPECT_EQ(std::adjacent_find(parts.begin(), parts.end()), parts.end()) << N;
  }
}

TEST(Partitions, MatchesRecursiveEnumeration) {
  const auto parts = enumerate_partitions(6);
  const auto brute = testing::brute_rgs(6);
  ASSERT_EQ(parts.size(), brute.size());
  for (std::size_t i = 0; i < parts.size(); ++i)
    EXPECT_TRUE(std::equal(parts[i].rgs().begin(), parts[i].rgs().end(), brute[i].begin()));
}

TEST(Partitions, PrefixRestrictsEnumeration) {
  std::size_t count = 0;
  for_each_partition(5, [&](const std::vector<std::uint8_t>& rgs) {
    EXPECT_EQ(rgs[1], 1);
    ++count;
  }, {0, 1});
  EXPECT_EQ(count, 37U);  // B_5 - B_4 partitions where 1 and 2 are apart
  EXPECT_THROW(for_each_partition(3, [](const auto&) {}, {0, 2}), std::invalid_argument);
}

TEST(SetPartition, Validation) {
  EXPECT_THROW(SetPartition({1, 0}), std::invalid_argument);
  EXPECT_THROW(SetPartition({0, 2}), std::invalid_argument);
  EXPECT_THROW(SetPartition::from_blocks(3, {{1, 2}}), std::invalid_argument);
  EXPECT_THROW(SetPartition::from_blocks(2, {{1, 2}, {2}}), std::invalid_argument);
  EXPECT_THROW(SetPartition::from_blocks(2, {{1, 2}, {}}), std::invalid_argument);
  const auto p = SetPartition::from_blocks(4, {{2, 3}, {1, 4}});
  EXPECT_EQ(p.rgs(), (std::vector<std::uint8_t>{0, 1, 1, 0}));
  EXPECT_EQ(p.blocks(), (std::vector<Block>{{1, 4}, {2, 3}}));
}

TEST(Psi, Examples) {
  EXPECT_EQ(psi({1, 4}, 2), (Block{1, 2}));
  for (Element j = 1; j <= 3; ++j) {
    EXPECT_EQ(psi({j}, 3), (Block{j}));
    EXPECT_EQ(psi({j, j + 3}, 3), (Block{j}));
  }
  EXPECT_THROW(psi({5}, 2), std::invalid_argument);
}

TEST(Classify, Examples) {
  const auto a = classify(SetPartition::from_blocks(4, {{1, 4}, {2, 3}}), 2);
  EXPECT_TRUE(a.in_e1);
  EXPECT_FALSE(a.in_e2);
  EXPECT_EQ(a.z, 1U);
  ASSERT_TRUE(a.cover);
  EXPECT_EQ(*a.cover, TwoCover(2, {{1, 2}, {1, 2}}));

  const auto b = classify(SetPartition::from_blocks(4, {{1}, {2, 3}, {4}}), 2);
  EXPECT_TRUE(b.in_e1);
  EXPECT_TRUE(b.in_e2);
  EXPECT_EQ(b.z, 0U);
  ASSERT_TRUE(b.cover);
  EXPECT_EQ(*b.cover, TwoCover(2, {{1}, {1, 2}, {2}}));
  EXPECT_TRUE(b.cover->proper());
  EXPECT_TRUE(b.cover->restricted());

  const auto c = classify(SetPartition::from_blocks(4, {{1, 3}, {2}, {4}}), 2);
  EXPECT_FALSE(c.in_e1);
  EXPECT_FALSE(c.cover);

  EXPECT_THROW(classify(SetPartition({0, 0, 0}), 2), std::invalid_argument);
}

TEST(TwoCover, CanonicalFormAndFlags) {
  const TwoCover cover(3, {{3, 2}, {1}, {3, 1}, {2}});
  EXPECT_EQ(cover.blocks(), (std::vector<Block>{{1}, {1, 3}, {2}, {2, 3}}));
  EXPECT_EQ(TwoCover(3, cover.blocks()), cover);
  EXPECT_TRUE(cover.proper());
  EXPECT_TRUE(cover.restricted());

  const TwoCover doubled(2, {{1}, {2}, {1}, {2}});
  EXPECT_EQ(doubled.duplicate_pairs(), 2U);
  EXPECT_FALSE(doubled.proper());
  EXPECT_TRUE(doubled.restricted());
  EXPECT_FALSE(TwoCover(2, {{1, 2}, {1, 2}}).restricted());
}

TEST(TwoCover, Validation) {
  EXPECT_THROW(TwoCover(2, {{1, 2}}), std::invalid_argument);
  EXPECT_THROW(TwoCover(2, {{1, 2}, {1, 2}, {}}), std::invalid_argument);
  EXPECT_THROW(TwoCover(2, {{1, 1}, {2, 2}}), std::invalid_argument);
  EXPECT_THROW(TwoCover(2, {{1, 3}, {1, 2}, {2}}), std::invalid_argument);
}

TEST(OracleCounts, MatchesReferenceCounts) {
  const auto& ref = testing::reference_counts();
  for (std::size_t n = 0; n < ref.size(); ++n) {
    const auto counts = oracle_counts(n);
    EXPECT_EQ(counts.s, ref[n].s) << n;
    EXPECT_EQ(counts.t, ref[n].t) << n;
    EXPECT_EQ(counts.u, ref[n].u) << n;
    EXPECT_EQ(counts.v, ref[n].v) << n;
    EXPECT_EQ(counts.e1, ref[n].e1) << n;
    EXPECT_EQ(counts.e2, ref[n].e2) << n;
    EXPECT_EQ(counts.c, ref[n].c) << n;
    EXPECT_EQ(counts.d_histogram, ref[n].d) << n;
  }
}

TEST(OracleCounts, AgreesWithExactTable) {
  const auto table = full_table(5);
  for (std::size_t n = 0; n <= 5; ++n) {
    const auto census = oracle_census(n);
    const auto counts = oracle_counts(census);
    const auto& row = table.rows[n];
    EXPECT_EQ(row.s, static_cast<unsigned long>(counts.s)) << n;
    EXPECT_EQ(row.t, static_cast<unsigned long>(counts.t)) << n;
    EXPECT_EQ(row.u, static_cast<unsigned long>(counts.u)) << n;
    EXPECT_EQ(row.v, static_cast<unsigned long>(counts.v)) << n;
    EXPECT_EQ(row.l, static_cast<unsigned long>(oracle_line_count(census))) << n;
    EXPECT_EQ(row.bell2n, static_cast<unsigned long>(census.partitions)) << n;
  }
}

TEST(OracleCounts, LimitIsEnforced) {
  EXPECT_THROW(oracle_counts(7), std::out_of_range);
  OracleOptions tight;
  tight.limit = 2;
  EXPECT_THROW(oracle_counts(3, tight), std::out_of_range);
  tight.slow_mode = true;
  EXPECT_EQ(oracle_counts(3, tight).s, 16U);
  EXPECT_EQ(effective_oracle_limit(tight), 3U);
}

TEST(OracleCensus, IndependentOfWorkerCount) {
  const auto one = oracle_census(4);
  for (unsigned workers : {2U, 3U, 5U}) {
    OracleOptions options;
    options.workers = workers;
    const auto many = oracle_census(4, options);
    EXPECT_EQ(many.partitions, one.partitions);
    EXPECT_EQ(many.e1, one.e1);
    EXPECT_EQ(many.e2, one.e2);
    EXPECT_EQ(many.c, one.c);
    EXPECT_EQ(many.d_histogram, one.d_histogram);
    EXPECT_EQ(many.x_histogram, one.x_histogram);
    ASSERT_EQ(many.covers.size(), one.covers.size());
    for (std::size_t i = 0; i < one.covers.size(); ++i) {
      EXPECT_EQ(many.covers[i].cover, one.covers[i].cover);
      EXPECT_EQ(many.covers[i].fiber, one.covers[i].fiber);
      EXPECT_EQ(many.covers[i].fiber_in_c, one.covers[i].fiber_in_c);
    }
  }
}

TEST(FiberCheck, Examples) {
  const auto census = oracle_census(2);
  EXPECT_EQ(find_fiber(census, TwoCover(2, {{1}, {1, 2}, {2}})).fiber, 4U);
  EXPECT_EQ(find_fiber(census, TwoCover(2, {{1, 2}, {1, 2}})).fiber, 2U);
  EXPECT_EQ(find_fiber(census, TwoCover(2, {{1}, {1}, {2}, {2}})).fiber, 1U);
  for (std::size_t n = 0; n <= 5; ++n) {
    const auto report = fiber_check(n);
    EXPECT_TRUE(report.ok()) << n;
    EXPECT_EQ(report.covers_checked, testing::reference_counts()[n].s);
    EXPECT_EQ(report.proper_covers, testing::reference_counts()[n].t);
  }
}

TEST(FiberCheck, DetectsTamperedFiber) {
  auto census = oracle_census(3);
  census.covers.front().fiber += 1;
  const auto report = fiber_check(census);
  EXPECT_FALSE(report.ok());
  ASSERT_EQ(report.mismatches.size(), 1U);
  EXPECT_EQ(report.mismatches[0].cover, census.covers.front().cover);
}

TEST(OracleCounts, DetectsBrokenHistogram) {
  auto census = oracle_census(3);
  census.d_histogram[1] += 1;
  EXPECT_THROW(oracle_counts(census), OracleIdentityViolation);
}

TEST(LineGraphs, Examples) {
  const LabeledGraph k3(3, {{1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(line_graph_of(TwoCover(3, {{1, 2}, {1, 3}, {2, 3}})), k3);
  EXPECT_EQ(line_graph_of(TwoCover(3, {{1, 2, 3}, {1}, {2}, {3}})), k3);
  const auto edge = line_graph_of(TwoCover(2, {{1}, {1, 2}, {2}}));
  EXPECT_EQ(edge, LabeledGraph(2, {{1, 2}}));
  EXPECT_TRUE(edge.adjacent(2, 1));
  EXPECT_EQ(edge.edge_count(), 1U);
  EXPECT_THROW(line_graph_of(TwoCover(2, {{1, 2}, {1, 2}})), std::invalid_argument);
  EXPECT_THROW(LabeledGraph(2, {{1, 1}}), std::invalid_argument);
}

TEST(LineGraphs, Counts) {
  EXPECT_EQ(oracle_line_count(1), 1U);
  EXPECT_EQ(oracle_line_count(2), 2U);
  EXPECT_EQ(oracle_line_count(3), 8U);
  EXPECT_EQ(oracle_line_count(4), 60U);
}

TEST(Moments, FallingFactorialSums) {
  for (std::size_t n = 0; n <= 5; ++n) {
    const auto sums = moment_sums(oracle_census(n));
    for (std::size_t r = 0; r <= n; ++r)
      EXPECT_EQ(sums[r], falling_factorial(n, r) * bell(2 * n - r)) << n << "," << r;
  }
}

TEST(Moments, AlternatingSumGivesE1) {
  for (std::size_t n = 0; n <= 5; ++n) {
    Integer acc = 0;
    for (std::size_t r = 0; r <= n; ++r) {
      const Integer term = binomial(n, r) * bell(2 * n - r);
      acc += (r % 2 == 0) ? term : Integer(-term);
    }
    EXPECT_EQ(acc, static_cast<unsigned long>(testing::reference_counts()[n].e1)) << n;
  }
}

}  // namespace
}  // namespace cover_census
