#include "vscreen/bucketizer.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>

namespace vscreen {

BucketKey classify(std::size_t atom_count, std::size_t fragment_count) {
  if (atom_count == 0 || atom_count > kMaxLigandAtoms) {
    throw std::invalid_argument("atom count " + std::to_string(atom_count) +
                                " has no bucket");
  }
  return {static_cast<int>((atom_count - 1) / 32),
          static_cast<int>(fragment_count / kFragmentsPerGroup)};
}

BucketKey classify(const Ligand& ligand) {
  return classify(ligand.atom_count(), ligand.fragment_count());
}

BucketCapacities::BucketCapacities(std::array<std::size_t, kAtomRanges> per_range)
    : per_range_(per_range) {
  for (auto c : per_range_) {
    if (c == 0) throw std::invalid_argument("bucket capacity must be positive");
  }
}

void BucketCapacities::set(int range_index, std::size_t capacity) {
  if (range_index < 0 || range_index >= kAtomRanges) {
    throw std::invalid_argument("bucket index " + std::to_string(range_index) +
                                " is not in 0..4");
  }
  if (capacity == 0) throw std::invalid_argument("bucket capacity must be positive");
  per_range_[static_cast<std::size_t>(range_index)] = capacity;
}

Bucketizer::Bucketizer(BucketCapacities capacities) : capacities_(capacities) {}

std::optional<Batch> Bucketizer::push(BatchItem item) {
  const BucketKey key = classify(*item.ligand);
  const std::size_t capacity = capacities_(key);
  Range& range = ranges_[static_cast<std::size_t>(key.atom_range_index)];

  std::optional<Batch> full;
  {
    std::lock_guard lock(range.mu);
    auto& bucket = range.groups[key.fragment_group_index];
    if (bucket.empty()) bucket.reserve(capacity);
    bucket.push_back(item);
    if (bucket.size() < capacity) return std::nullopt;
    full.emplace(Batch{key, std::move(bucket), capacity, false});
    bucket = {};
    // Logged under the range lock so per-bucket log order matches hand-out order.
    record(*full);
  }
  return full;
}

std::vector<Batch> Bucketizer::flush() {
  std::vector<Batch> out;
  for (int r = 0; r < kAtomRanges; ++r) {
    Range& range = ranges_[static_cast<std::size_t>(r)];
    std::lock_guard lock(range.mu);
    for (auto& [group, items] : range.groups) {
      if (items.empty()) continue;
      const BucketKey key{r, group};
      out.push_back(Batch{key, std::move(items), capacities_(key), true});
      items = {};
      record(out.back());
    }
  }
  return out;
}

std::size_t Bucketizer::pending() const {
  std::size_t n = 0;
  for (const auto& range : ranges_) {
    std::lock_guard lock(range.mu);
    for (const auto& [group, items] : range.groups) n += items.size();
  }
  return n;
}

void Bucketizer::record(const Batch& batch) {
  std::lock_guard lock(log_mu_);
  log_.push_back({log_.size(), batch.key, batch.ligands.size(), batch.capacity, batch.flushed});
}

std::vector<DispatchRecord> Bucketizer::dispatch_log() const {
  std::lock_guard lock(log_mu_);
  return log_;
}

Counters Bucketizer::dispatch_counters() const {
  // Summed in a canonical order so concurrent hand-out order cannot change
  // the floating-point total.
  auto records = dispatch_log();
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.key, a.size, a.flushed) < std::tie(b.key, b.size, b.flushed);
  });
  Counters c;
  for (const auto& rec : records) {
    ++c.batches_dispatched;
    c.batch_fill_ratio_sum +=
        static_cast<double>(rec.size) / static_cast<double>(rec.capacity);
  }
  return c;
}

}  // namespace vscreen
