// Batch matrix for the throughput-oriented engine.
//
// Ligands are keyed by total atom count (hydrogens included) into the five
// ranges (0,32], (32,64], (64,96], (96,128], (128,160] and by fragment count
// in groups of four. A bucket is handed out as a Batch when it reaches its
// capacity; whatever is left at the end of the stream comes out of flush().

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "vscreen/model.hpp"

namespace vscreen {

inline constexpr int kAtomRanges = 5;
inline constexpr int kFragmentsPerGroup = 4;

struct BucketKey {
  int atom_range_index = 0;
  int fragment_group_index = 0;

  auto operator<=>(const BucketKey&) const = default;
};

BucketKey classify(const Ligand& ligand);
BucketKey classify(std::size_t atom_count, std::size_t fragment_count);

/// Upper bound (inclusive) of an atom range.
inline constexpr std::size_t atom_range_upper(int range_index) {
  return static_cast<std::size_t>(32 * (range_index + 1));
}

/// Capacity per atom range; the fragment group does not matter.
class BucketCapacities {
 public:
  BucketCapacities() = default;
  explicit BucketCapacities(std::array<std::size_t, kAtomRanges> per_range);

  std::size_t operator()(const BucketKey& key) const {
    return per_range_[static_cast<std::size_t>(key.atom_range_index)];
  }
  void set(int range_index, std::size_t capacity);
  const std::array<std::size_t, kAtomRanges>& per_range() const { return per_range_; }

 private:
  std::array<std::size_t, kAtomRanges> per_range_{1920, 1920, 1600, 960, 960};
};

/// A queued unit of work: the ligand plus its position in the input stream.
struct BatchItem {
  std::size_t sequence = 0;
  const Ligand* ligand = nullptr;
};

struct Batch {
  BucketKey key;
  std::vector<BatchItem> ligands;
  std::size_t capacity = 0;
  bool flushed = false;

  double fill_ratio() const {
    return static_cast<double>(ligands.size()) / static_cast<double>(capacity);
  }
};

struct DispatchRecord {
  std::size_t order = 0;  // global dispatch order
  BucketKey key;
  std::size_t size = 0;
  std::size_t capacity = 0;
  bool flushed = false;
};

/// push() may be called concurrently from any number of producers. Each atom
/// range has its own lock, so a given bucket is linearizable and a full batch
/// is returned to exactly one caller. flush() must not overlap any push().
class Bucketizer {
 public:
  explicit Bucketizer(BucketCapacities capacities = {});

  Bucketizer(const Bucketizer&) = delete;
  Bucketizer& operator=(const Bucketizer&) = delete;

  std::optional<Batch> push(BatchItem item);
  std::optional<Batch> push(const Ligand& ligand, std::size_t sequence) {
    return push(BatchItem{sequence, &ligand});
  }

  std::vector<Batch> flush();

  const BucketCapacities& capacities() const { return capacities_; }
  std::size_t pending() const;
  /// Every batch handed out so far, in dispatch order.
  std::vector<DispatchRecord> dispatch_log() const;
  Counters dispatch_counters() const;

 private:
  struct Range {
    mutable std::mutex mu;
    std::map<int, std::vector<BatchItem>> groups;
  };

  void record(const Batch& batch);

  BucketCapacities capacities_;
  std::array<Range, kAtomRanges> ranges_;
  mutable std::mutex log_mu_;
  std::vector<DispatchRecord> log_;
};

}  // namespace vscreen
