// Execution strategies over a ligand stream.
//
//   sequential  plain loop over dock_ligand(); the reference.
//   latency     one ligand at a time, its restarts / rotations / torsion
//               angles spread over an OpenMP team. Each team thread owns a
//               workspace sized for the largest ligand, allocated once.
//   batched     producers feed the Bucketizer; each full (or flushed) batch
//               runs one ligand per thread, every ligand fully sequential.
//
// All three produce the same DockResult for every ligand.

#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vscreen/bucketizer.hpp"
#include "vscreen/docking.hpp"
#include "vscreen/model.hpp"
#include "vscreen/scoring.hpp"

namespace vscreen {

struct ScreeningJob {
  std::span<const Ligand> ligands;
  const Pocket& pocket;
  const InteractionTable& table;
  DockConfig cfg;
  std::uint64_t seed = 0;
};

struct LigandError {
  std::size_t sequence = 0;
  std::string ligand_id;
  std::string message;
};

struct EngineReport {
  std::string engine;
  int workers = 1;
  std::vector<DockResult> results;  // input order, errored ligands omitted
  std::vector<std::size_t> sequences;  // input position of each result
  std::vector<LigandError> errors;  // input order
  double wall_time = 0.0;           // seconds
  double throughput = 0.0;          // results per second
  Counters counters;                // per-ligand counters plus batch counters
  std::size_t workspace_allocations = 0;
  std::vector<DispatchRecord> dispatch_log;  // batched engine only
};

enum class EngineKind { kSequential, kLatency, kBatched };

std::string_view engine_name(EngineKind kind);
/// Throws std::invalid_argument on an unknown name.
EngineKind parse_engine(std::string_view name);

EngineReport run_sequential(const ScreeningJob& job);

/// Scratch owned by one latency-engine thread for the lifetime of a run,
/// sized for the largest accepted ligand so it is never reallocated.
class LatencyWorkspace {
 public:
  LatencyWorkspace();

  std::span<Vec3f> rotation_scratch() { return rotation_; }
  std::span<Vec3f> torsion_scratch() { return torsion_; }

  /// Number of workspaces constructed by this process.
  static std::size_t allocations() { return allocations_.load(); }

 private:
  std::vector<Vec3f> rotation_;
  std::vector<Vec3f> torsion_;
  static std::atomic<std::size_t> allocations_;
};

class LatencyEngine {
 public:
  explicit LatencyEngine(int workers);
  EngineReport run(const ScreeningJob& job) const;
  int workers() const { return workers_; }

 private:
  int workers_;
};

class BatchedEngine {
 public:
  explicit BatchedEngine(int workers, BucketCapacities capacities = {}, int producers = 2);
  EngineReport run(const ScreeningJob& job) const;
  int workers() const { return workers_; }

 private:
  int workers_;
  int producers_;
  BucketCapacities capacities_;
};

EngineReport run_engine(EngineKind kind, int workers, const BucketCapacities& capacities,
                        const ScreeningJob& job);

}  // namespace vscreen
