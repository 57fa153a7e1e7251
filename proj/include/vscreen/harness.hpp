// Experiment drivers behind the command-line tool: dataset-shape heatmap,
// dataset-size scaling and the bump-check early-exit ablation.
//
// Every experiment writes two kinds of output. The main CSV only holds
// values that are a pure function of the arguments, so identical arguments
// give identical bytes. Wall-clock measurements (throughput, speedup) go to
// a separate *_timing.csv.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vscreen/bucketizer.hpp"
#include "vscreen/engines.hpp"
#include "vscreen/io.hpp"

namespace vscreen {

struct HarnessOptions {
  int workers = 1;
  std::uint64_t seed = 42;
  DockConfig cfg;
  BucketCapacities capacities;
  int repeats = 1;  // timing runs per engine; the fastest is kept
};

/// FNV-1a over every field of every result (coordinates by bit pattern).
std::uint64_t results_digest(const EngineReport& report);

/// True when both reports hold the same ligands with identical best poses.
bool same_poses(const EngineReport& a, const EngineReport& b);

void write_results_csv(std::ostream& out, const EngineReport& report,
                       std::span<const Ligand> ligands);
std::string summary_json(const EngineReport& report, std::size_t input_count);

/// Spearman rank correlation; tied values get their average rank.
double spearman(std::span<const double> x, std::span<const double> y);

// --- heatmap ---------------------------------------------------------------

struct HeatmapOptions {
  std::vector<int> heavy_atoms{20, 30, 40, 50};
  std::vector<int> fragments{1, 4, 8, 12, 16};
  std::size_t per_cell = 2000;
};

struct EngineRun {
  double wall_time = 0.0;
  double throughput = 0.0;
  Counters counters;
  std::uint64_t digest = 0;
};

struct HeatmapCell {
  int heavy_atoms = 0;
  int fragments = 0;
  std::size_t ligands = 0;
  std::size_t errors = 0;
  EngineRun latency;
  EngineRun batched;

  double speedup() const { return batched.throughput / latency.throughput; }
};

/// Cells come back row-major (heavy atoms outer) whatever order they ran in.
/// Infeasible shapes are skipped.
std::vector<HeatmapCell> run_heatmap(const HeatmapOptions& opts, const HarnessOptions& h,
                                     const Pocket& pocket, const InteractionTable& table);

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);
/// heavy_atoms,fragments,latency_tput,batched_tput,speedup
void write_heatmap_timing_csv(std::ostream& out, const std::vector<HeatmapCell>& cells);

struct TrendRow {
  int heavy_atoms = 0;
  std::string engine;
  double spearman = 0.0;
};
/// Per-row correlation between fragment count and per-ligand wall time.
std::vector<TrendRow> heatmap_trend(const std::vector<HeatmapCell>& cells);
void write_trend_csv(std::ostream& out, const std::vector<TrendRow>& rows);

// --- scaling ---------------------------------------------------------------

struct ScalingOptions {
  std::vector<std::size_t> ladder{10, 100, 1000, 10000, 100000};
  LigandShape homogeneous{20, 1};
  std::vector<LigandShape> mixture{{20, 1}, {20, 8}, {30, 4}, {30, 12},
                                   {40, 8}, {40, 16}, {50, 12}, {50, 20}};
};

struct ScalingRow {
  std::size_t size = 0;
  std::string mode;    // homogeneous | heterogeneous
  std::string engine;  // latency | batched
  double throughput = 0.0;
  std::uint64_t batches_dispatched = 0;
  double mean_fill_ratio = 0.0;
  std::uint64_t digest = 0;
};

std::vector<ScalingRow> run_scaling(const ScalingOptions& opts, const HarnessOptions& h,
                                    const Pocket& pocket, const InteractionTable& table);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);
/// size,mode,engine,throughput,batches_dispatched,mean_fill_ratio
void write_scaling_timing_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

// --- early-exit ablation ---------------------------------------------------

class ScoreMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AblationCell {
  HeatmapCell on;
  HeatmapCell off;

  double check_ratio() const {
    return static_cast<double>(on.batched.counters.bump_checks) /
           static_cast<double>(off.batched.counters.bump_checks);
  }
};

/// Runs the heatmap with early exit on and off. Throws ScoreMismatch if any
/// pose differs between the two settings.
std::vector<AblationCell> run_ablation(const HeatmapOptions& opts, const HarnessOptions& h,
                                       const Pocket& pocket, const InteractionTable& table);
void write_ablation_csv(std::ostream& out, const std::vector<AblationCell>& cells);
void write_ablation_timing_csv(std::ostream& out, const std::vector<AblationCell>& cells);

/// "R=N" with R an atom-range index 0..4.
void apply_capacity_override(BucketCapacities& caps, const std::string& arg);

}  // namespace vscreen
