#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "vscreen/engines.hpp"

namespace vscreen::detail {

/// One slot per input ligand; each slot is written by exactly one thread.
class ResultSlots {
 public:
  explicit ResultSlots(std::size_t n) : results_(n), errors_(n) {}

  void store(std::size_t sequence, DockResult result) { results_[sequence] = std::move(result); }
  void store_error(std::size_t sequence, const std::string& id, const std::string& message);

  /// Compacts the slots into `report` in input order and merges counters.
  void finish(EngineReport& report, double wall_time) const;

 private:
  std::vector<std::optional<DockResult>> results_;
  std::vector<std::optional<LigandError>> errors_;
};

/// Sequential dock of one ligand, errors recorded instead of thrown.
void dock_into(const ScreeningJob& job, std::size_t sequence, ResultSlots& slots);

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace vscreen::detail
