#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <thread>

#include "vscreen/bucketizer.hpp"
#include "vscreen/rng.hpp"

namespace vscreen {
namespace {

// Bucketing only looks at atom and fragment counts.
Ligand shaped(std::size_t atoms, std::size_t fragments) {
  Ligand l;
  l.atoms.resize(atoms);
  l.fragments.resize(fragments);
  return l;
}

TEST(Classify, PrintedExamples) {
  EXPECT_EQ(classify(30, 2), (BucketKey{0, 0}));
  EXPECT_EQ(classify(70, 12), (BucketKey{2, 3}));
  EXPECT_EQ(classify(32, 0).atom_range_index, 0);
  EXPECT_EQ(classify(33, 0).atom_range_index, 1);
}

TEST(Classify, RangeBoundaries) {
  // (0,32] (32,64] (64,96] (96,128] (128,160]
  const std::pair<std::size_t, int> cases[] = {{1, 0},   {32, 0},  {33, 1},  {64, 1},
                                               {65, 2},  {96, 2},  {97, 3},  {128, 3},
                                               {129, 4}, {160, 4}};
  for (const auto& [atoms, range] : cases) {
    EXPECT_EQ(classify(atoms, 0).atom_range_index, range) << atoms;
  }
  EXPECT_EQ(classify(10, 3).fragment_group_index, 0);
  EXPECT_EQ(classify(10, 4).fragment_group_index, 1);
  EXPECT_EQ(classify(10, 7).fragment_group_index, 1);
  EXPECT_EQ(classify(10, 8).fragment_group_index, 2);
  EXPECT_THROW(classify(0, 0), std::invalid_argument);
  EXPECT_THROW(classify(161, 0), std::invalid_argument);
}

TEST(Classify, CountsHydrogens) {
  Ligand l = shaped(30, 0);
  for (int i = 0; i < 5; ++i) l.atoms.push_back({{}, 0, false});
  EXPECT_EQ(classify(l).atom_range_index, 1);
}

TEST(Capacity, DefaultsPerRange) {
  const BucketCapacities caps;
  EXPECT_EQ(caps({0, 0}), 1920U);
  EXPECT_EQ(caps({0, 5}), 1920U);
  EXPECT_EQ(caps({1, 2}), 1920U);
  EXPECT_EQ(caps({2, 0}), 1600U);
  EXPECT_EQ(caps({2, 9}), 1600U);
  EXPECT_EQ(caps({3, 1}), 960U);
  EXPECT_EQ(caps({4, 3}), 960U);
}

TEST(Capacity, Override) {
  BucketCapacities caps;
  caps.set(2, 7);
  EXPECT_EQ(caps({2, 1}), 7U);
  EXPECT_THROW(caps.set(5, 7), std::invalid_argument);
  EXPECT_THROW(caps.set(0, 0), std::invalid_argument);
}

TEST(Push, FullBatchAtCapacity) {
  Bucketizer b;
  const Ligand small = shaped(20, 1);
  for (std::size_t i = 0; i < 1919; ++i) ASSERT_FALSE(b.push(small, i));
  const auto batch = b.push(small, 1919);
  ASSERT_TRUE(batch);
  EXPECT_EQ(batch->ligands.size(), 1920U);
  EXPECT_FALSE(batch->flushed);
  EXPECT_EQ(batch->fill_ratio(), 1.0);
  EXPECT_EQ(b.pending(), 0U);
}

TEST(Push, FirstPushReturnsNothing) {
  Bucketizer b;
  EXPECT_FALSE(b.push(shaped(100, 0), 0));
  EXPECT_EQ(b.pending(), 1U);
}

TEST(Push, KeysAccumulateIndependently) {
  Bucketizer b;
  const Ligand large = shaped(150, 2);
  const Ligand small = shaped(10, 2);
  int batches = 0;
  std::size_t seq = 0;
  for (int i = 0; i < 960; ++i) {
    if (auto batch = b.push(large, seq++)) {
      ++batches;
      EXPECT_EQ(batch->key, (BucketKey{4, 0}));
    }
    if (i < 10 && b.push(small, seq++)) ++batches;
  }
  EXPECT_EQ(batches, 1);
  EXPECT_EQ(b.pending(), 10U);
}

TEST(Flush, EmptyGivesNothing) {
  Bucketizer b;
  EXPECT_TRUE(b.flush().empty());
  EXPECT_EQ(b.dispatch_counters(), Counters{});
}

TEST(Flush, PartialBatchAndFillRatio) {
  Bucketizer b;
  const Ligand l = shaped(70, 5);
  for (std::size_t i = 0; i < 3; ++i) b.push(l, i);
  const auto batches = b.flush();
  ASSERT_EQ(batches.size(), 1U);
  EXPECT_TRUE(batches[0].flushed);
  EXPECT_EQ(batches[0].ligands.size(), 3U);
  EXPECT_EQ(batches[0].fill_ratio(), 3.0 / 1600.0);
  EXPECT_TRUE(b.flush().empty());
  const Counters c = b.dispatch_counters();
  EXPECT_EQ(c.batches_dispatched, 1U);
  EXPECT_EQ(c.mean_fill_ratio(), 3.0 / 1600.0);
}

TEST(Flush, MeanFillMatchesDispatchLog) {
  BucketCapacities caps({5, 7, 3, 4, 6});
  Bucketizer b(caps);
  SplitMix64 rng(3);
  std::vector<Ligand> pool;
  for (int i = 0; i < 300; ++i) {
    pool.push_back(shaped(static_cast<std::size_t>(rng.between(1, 160)),
                          static_cast<std::size_t>(rng.between(0, 12))));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) b.push(pool[i], i);
  b.flush();
  // Recompute from the log: ligands over capacity, batch by batch.
  const auto log = b.dispatch_log();
  std::size_t total = 0;
  double sum = 0.0;
  for (const auto& r : log) {
    total += r.size;
    sum += static_cast<double>(r.size) / static_cast<double>(r.capacity);
    EXPECT_LE(r.size, r.capacity);
    EXPECT_TRUE(r.flushed || r.size == r.capacity);
  }
  EXPECT_EQ(total, pool.size());
  const Counters c = b.dispatch_counters();
  EXPECT_EQ(c.batches_dispatched, log.size());
  EXPECT_NEAR(c.mean_fill_ratio(), sum / static_cast<double>(log.size()), 1e-12);
}

TEST(BucketizerProperty, PartitionLawUnderConcurrentProducers) {
  constexpr int kProducers = 16;
  constexpr std::size_t kLigands = 20000;
  SplitMix64 rng(9);
  std::vector<Ligand> pool;
  for (std::size_t i = 0; i < kLigands; ++i) {
    pool.push_back(shaped(static_cast<std::size_t>(rng.between(1, 160)),
                          static_cast<std::size_t>(rng.between(0, 20))));
  }
  Bucketizer b(BucketCapacities({64, 48, 40, 24, 16}));
  std::vector<std::vector<Batch>> got(kProducers);
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < kProducers; ++t) {
      threads.emplace_back([&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < kLigands; i += kProducers) {
          if (auto batch = b.push(pool[i], i)) got[static_cast<std::size_t>(t)].push_back(std::move(*batch));
        }
      });
    }
  }
  std::vector<Batch> all;
  for (auto& v : got) all.insert(all.end(), v.begin(), v.end());
  for (auto& batch : b.flush()) all.push_back(std::move(batch));

  std::vector<int> seen(kLigands, 0);
  for (const auto& batch : all) {
    ASSERT_LE(batch.ligands.size(), batch.capacity);
    std::size_t lo = 1000, hi = 0;
    for (const auto& item : batch.ligands) {
      ++seen[item.sequence];
      ASSERT_EQ(classify(*item.ligand), batch.key);
      lo = std::min(lo, item.ligand->fragment_count());
      hi = std::max(hi, item.ligand->fragment_count());
    }
    EXPECT_LE(hi - lo, 3U);
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }));
  EXPECT_EQ(b.dispatch_log().size(), all.size());
}

TEST(BucketizerProperty, ClassifyIgnoresPushOrder) {
  const Ligand a = shaped(40, 9);
  const BucketKey k = classify(a);
  Bucketizer b;
  for (std::size_t i = 0; i < 50; ++i) b.push(shaped(1 + i * 3, i % 17), i);
  EXPECT_EQ(classify(a), k);
}

}  // namespace
}  // namespace vscreen
