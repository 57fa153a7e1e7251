#include "vscreen/engines.hpp"

#include <chrono>
#include <stdexcept>

#include "engine_common.hpp"

namespace vscreen {

std::string_view engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::kSequential: return "sequential";
    case EngineKind::kLatency: return "latency";
    case EngineKind::kBatched: return "batched";
  }
  return "unknown";
}

EngineKind parse_engine(std::string_view name) {
  if (name == "sequential") return EngineKind::kSequential;
  if (name == "latency") return EngineKind::kLatency;
  if (name == "batched") return EngineKind::kBatched;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "'");
}

namespace detail {

void ResultSlots::store_error(std::size_t sequence, const std::string& id,
                              const std::string& message) {
  errors_[sequence] = LigandError{sequence, id, message};
}

void ResultSlots::finish(EngineReport& report, double wall_time) const {
  for (std::size_t i = 0; i < results_.size(); ++i) {
    if (results_[i]) {
      report.counters += results_[i]->counters;
      report.results.push_back(*results_[i]);
      report.sequences.push_back(i);
    } else if (errors_[i]) {
      report.errors.push_back(*errors_[i]);
    }
  }
  report.wall_time = wall_time;
  report.throughput =
      wall_time > 0.0 ? static_cast<double>(report.results.size()) / wall_time : 0.0;
}

void dock_into(const ScreeningJob& job, std::size_t sequence, ResultSlots& slots) {
  const Ligand& ligand = job.ligands[sequence];
  try {
    slots.store(sequence, dock_ligand(ligand, job.pocket, job.table, job.cfg, job.seed));
  } catch (const std::exception& e) {
    slots.store_error(sequence, ligand.id, e.what());
  }
}

}  // namespace detail

EngineReport run_sequential(const ScreeningJob& job) {
  job.cfg.check();
  EngineReport report;
  report.engine = "sequential";
  detail::ResultSlots slots(job.ligands.size());
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < job.ligands.size(); ++i) detail::dock_into(job, i, slots);
  slots.finish(report, detail::seconds_since(t0));
  return report;
}

EngineReport run_engine(EngineKind kind, int workers, const BucketCapacities& capacities,
                        const ScreeningJob& job) {
  switch (kind) {
    case EngineKind::kSequential: return run_sequential(job);
    case EngineKind::kLatency: return LatencyEngine(workers).run(job);
    case EngineKind::kBatched: return BatchedEngine(workers, capacities).run(job);
  }
  throw std::invalid_argument("unknown engine");
}

}  // namespace vscreen
