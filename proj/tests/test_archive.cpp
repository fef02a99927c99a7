#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "ccsw/archive.hpp"
#include "support/reference.hpp"

using namespace ccsw;

namespace {

Individual member(double mu, double var, std::int64_t c) { return {BitSolution(1), {mu, var, c}}; }

std::vector<Objective3> objectives(const ParetoArchive<>& a) {
  std::vector<Objective3> out;
  a.for_each([&](const Individual& ind) { out.push_back(ind.obj); });
  return out;
}

bool obj_less(const Objective3& a, const Objective3& b) {
  if (a.c != b.c) return a.c < b.c;
  if (a.mu != b.mu) return a.mu < b.mu;
  return a.var < b.var;
}

template <typename P>
void expect_invariants(const ParetoArchive<P>& a) {
  std::vector<Objective3> keys;
  a.for_each_bucket([&](std::int64_t c, auto bucket) {
    ASSERT_FALSE(bucket.empty());
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      ASSERT_EQ(bucket[i].key.c, c);
      if (i > 0) {
        ASSERT_LT(bucket[i - 1].key.mu, bucket[i].key.mu);
        ASSERT_GT(bucket[i - 1].key.var, bucket[i].key.var);
      }
      keys.push_back(bucket[i].key);
    }
  });
  ASSERT_EQ(keys.size(), a.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    for (std::size_t j = 0; j < keys.size(); ++j)
      if (i != j) {
          ASSERT_FALSE(dominates_weak_3d(keys[i], keys[j]));
        }
}

}  // namespace

TEST(Dominance, Weak) {
  EXPECT_TRUE(dominates_weak_3d({5, 3, 10}, {6, 4, 9}));
  EXPECT_TRUE(dominates_weak_3d({5, 3, 10}, {5, 3, 10}));
  EXPECT_FALSE(dominates_weak_3d({5, 3, 10}, {4, 9, 10}));
}

TEST(Dominance, Strict) {
  EXPECT_FALSE(dominates_strict_3d({5, 3, 10}, {5, 3, 10}));
  EXPECT_TRUE(dominates_strict_3d({5, 3, 10}, {5, 3, 9}));
  EXPECT_FALSE(dominates_strict_3d({5, 3, 9}, {5, 3, 10}));
}

TEST(Archive, InsertExamples) {
  ParetoArchive<> a;
  EXPECT_EQ(a.try_insert(member(5, 3, 10)), InsertOutcome::Accepted);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.try_insert(member(5, 3, 10)), InsertOutcome::Accepted);
  EXPECT_EQ(a.size(), 1u);

  ParetoArchive<> b;
  b.try_insert(member(1, 1, 10));
  EXPECT_EQ(b.try_insert(member(2, 2, 9)), InsertOutcome::Rejected);
  EXPECT_EQ(b.size(), 1u);
}

TEST(Archive, EvictsAcrossBuckets) {
  ParetoArchive<> a;
  a.try_insert(member(4, 4, 3));
  a.try_insert(member(2, 6, 3));
  a.try_insert(member(6, 1, 5));
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.try_insert(member(2, 4, 4)), InsertOutcome::Accepted);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.max_c(), 5);
  expect_invariants(a);
}

TEST(Archive, WindowSelection) {
  ParetoArchive<> a;
  a.try_insert(member(1, 5, 3));
  a.try_insert(member(2, 4, 3));
  a.try_insert(member(0.5, 10, 7));
  Rng rng = make_rng(1);
  std::map<double, int> hits;
  for (int i = 0; i < 4000; ++i) {
    const auto s = a.select_window(3, 3, rng);
    EXPECT_EQ(s.pool_size, 2u);
    EXPECT_FALSE(s.fallback);
    ++hits[s.individual->obj.mu];
  }
  EXPECT_EQ(hits.size(), 2u);
  EXPECT_NEAR(hits[1.0] / 4000.0, 0.5, 0.04);

  ParetoArchive<> b;
  b.try_insert(member(1, 5, 3));
  b.try_insert(member(0.5, 10, 7));
  const auto s = b.select_window(4, 6, rng);
  EXPECT_TRUE(s.fallback);
  EXPECT_EQ(s.pool_size, 2u);
  EXPECT_EQ(b.select_window(0, 7, rng).pool_size, 2u);

  ParetoArchive<> empty;
  EXPECT_THROW(empty.select_window(0, 1, rng), ContractViolation);
  EXPECT_THROW(empty.select_uniform(rng), ContractViolation);
}

TEST(Archive, UniformSelectionChiSquare) {
  ParetoArchive<> a;
  for (int i = 0; i < 12; ++i) a.try_insert(member(i, 12 - i, i % 3));
  ASSERT_EQ(a.size(), 12u);
  std::map<double, double> hits;
  Rng rng = make_rng(99);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits[a.select_uniform(rng).individual->obj.mu] += 1.0;
  std::vector<double> observed, expected;
  for (auto& [mu, count] : hits) {
    observed.push_back(count);
    expected.push_back(draws / 12.0);
  }
  ASSERT_EQ(observed.size(), 12u);
  EXPECT_GT(ref::chi_square_p(observed, expected), 0.001);
}

TEST(Archive, MinMuAndMaxCTies) {
  ParetoArchive<> a;
  a.try_insert(member(1, 9, 2));
  a.try_insert(member(1, 8, 1));
  a.try_insert(member(3, 1, 4));
  a.try_insert(member(4, 0.5, 4));
  Rng rng = make_rng(7);
  std::map<std::int64_t, int> min_hits;
  for (int i = 0; i < 2000; ++i) {
    const auto s = a.select_min_mu(rng);
    EXPECT_EQ(s.individual->obj.mu, 1.0);
    ++min_hits[s.individual->obj.c];
  }
  EXPECT_EQ(min_hits.size(), 2u);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.select_max_c(rng).individual->obj.c, 4);
  EXPECT_EQ(a.select_max_c(rng).pool_size, 2u);
}

TEST(Archive, PruneExamples) {
  ParetoArchive<> a;
  a.try_insert(member(1, 9, 2));
  a.try_insert(member(2, 8, 5));
  a.try_insert(member(3, 7, 9));
  EXPECT_EQ(a.prune_below(6, -1), 0u);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.prune_below(6, 9), 2u);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(a.max_c(), 9);

  ParetoArchive<> single;
  single.try_insert(member(1, 1, 1));
  EXPECT_EQ(single.prune_below(10, 5), 0u);
  EXPECT_EQ(single.size(), 1u);

  ParetoArchive<> all_low;
  all_low.try_insert(member(1, 9, 1));
  all_low.try_insert(member(2, 8, 2));
  EXPECT_EQ(all_low.prune_below(10, 5), 1u);
  EXPECT_EQ(all_low.size(), 1u);
}

TEST(Archive, MatchesNaiveListOnRandomSequences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng = make_rng(seed);
    ParetoArchive<> fast;
    ref::NaiveArchive naive;
    std::vector<std::size_t> last_max;
    for (int i = 0; i < 10000; ++i) {
      // Small integer ranges force duplicates, ties and cross-bucket dominance.
      const Objective3 y{static_cast<double>(uniform_int(rng, 0, 30)), static_cast<double>(uniform_int(rng, 0, 30)),
                         uniform_int(rng, 0, 8)};
      const bool accepted = fast.try_insert({BitSolution(1), y}) == InsertOutcome::Accepted;
      ASSERT_EQ(accepted, naive.insert(y));
      ASSERT_EQ(fast.size(), naive.members.size());

      const auto& by_c = fast.max_size_by_c();
      for (std::size_t c = 0; c < last_max.size(); ++c) ASSERT_GE(by_c[c], last_max[c]);
      last_max = by_c;
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(by_c.size()); ++c)
        ASSERT_GE(by_c[c], fast.count_in(c, c));
      if (i % 500 == 0) expect_invariants(fast);
    }
    auto got = objectives(fast);
    auto want = naive.members;
    std::sort(got.begin(), got.end(), obj_less);
    std::sort(want.begin(), want.end(), obj_less);
    EXPECT_EQ(got, want);
    expect_invariants(fast);
  }
}

TEST(Archive, Penalized2DCollapsesConstraint) {
  Penalized2D proj{10, 100.0};
  EXPECT_EQ(proj({3, 4, 10}), (Objective3{3, 4, 0}));
  EXPECT_EQ(proj({3, 4, 9}), (Objective3{103, 104, 0}));

  ParetoArchive<Penalized2D> a(proj);
  a.try_insert(member(50, 50, 10));
  EXPECT_EQ(a.try_insert(member(1, 1, 9)), InsertOutcome::Rejected);
  EXPECT_EQ(a.try_insert(member(49, 60, 10)), InsertOutcome::Accepted);
  EXPECT_EQ(a.size(), 2u);
  a.for_each([](const Individual& ind) { EXPECT_EQ(ind.obj.c, 10); });
  expect_invariants(a);
}

TEST(Archive, PopulationCsv) {
  std::vector<Individual> pop{{BitSolution::from_string("10110"), {1.5, 2, 3}}};
  std::ostringstream out;
  write_population_csv(out, pop);
  EXPECT_EQ(out.str(), "c,mu,var,bits\n3,1.5,2,d0\n");
}
