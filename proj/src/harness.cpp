#include "vscreen/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "vscreen/rng.hpp"
#include "vscreen/textio.hpp"

namespace vscreen {

namespace {

class Fnv {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void value(T v) {
    bytes(&v, sizeof(v));
  }
  void text(const std::string& s) {
    value(s.size());
    bytes(s.data(), s.size());
  }
  std::uint64_t get() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

EngineRun summarize(const EngineReport& r) {
  return {r.wall_time, r.throughput, r.counters, results_digest(r)};
}

// Fastest of `repeats` runs; results must agree between repeats.
EngineReport timed_run(EngineKind kind, const HarnessOptions& h, const ScreeningJob& job) {
  EngineReport best = run_engine(kind, h.workers, h.capacities, job);
  for (int i = 1; i < h.repeats; ++i) {
    EngineReport again = run_engine(kind, h.workers, h.capacities, job);
    if (results_digest(again) != results_digest(best)) {
      throw std::logic_error("engine produced different results on a repeated run");
    }
    if (again.wall_time < best.wall_time) best = std::move(again);
  }
  return best;
}

std::uint64_t cell_seed(std::uint64_t seed, int heavy, int frags) {
  return combine_seed(seed, static_cast<std::uint64_t>(heavy) * 1000 +
                                static_cast<std::uint64_t>(frags));
}

bool feasible(const LigandShape& s) {
  try {
    check_shape(s);
    return true;
  } catch (const InfeasibleShape&) {
    return false;
  }
}

HeatmapCell run_cell(int heavy, int frags, std::size_t count, const HarnessOptions& h,
                     const Pocket& pocket, const InteractionTable& table) {
  const auto ligands = generate_dataset(heavy, frags, count, cell_seed(h.seed, heavy, frags));
  const ScreeningJob job{ligands, pocket, table, h.cfg, h.seed};
  HeatmapCell cell;
  cell.heavy_atoms = heavy;
  cell.fragments = frags;
  cell.ligands = count;
  const EngineReport lat = timed_run(EngineKind::kLatency, h, job);
  const EngineReport bat = timed_run(EngineKind::kBatched, h, job);
  if (!same_poses(lat, bat)) {
    throw std::logic_error("latency and batched engines disagree on cell (" +
                           std::to_string(heavy) + ", " + std::to_string(frags) + ")");
  }
  cell.errors = lat.errors.size();
  cell.latency = summarize(lat);
  cell.batched = summarize(bat);
  return cell;
}

}  // namespace

std::uint64_t results_digest(const EngineReport& report) {
  Fnv f;
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const DockResult& r = report.results[i];
    f.value(report.sequences.empty() ? i : report.sequences[i]);
    f.text(r.ligand_id);
    const Pose& p = r.best_pose;
    for (const auto& c : p.coordinates) {
      f.value(std::bit_cast<std::uint32_t>(c.x));
      f.value(std::bit_cast<std::uint32_t>(c.y));
      f.value(std::bit_cast<std::uint32_t>(c.z));
    }
    f.value(p.geometric_score);
    f.value(std::bit_cast<std::uint64_t>(p.chemical_score));
    f.value(p.restart_index);
    f.value(p.valid);
    f.value(r.counters.poses_scored);
    f.value(r.counters.bump_checks);
    f.value(r.counters.bump_early_exits);
  }
  for (const auto& e : report.errors) {
    f.value(e.sequence);
    f.text(e.ligand_id);
  }
  return f.get();
}

bool same_poses(const EngineReport& a, const EngineReport& b) {
  if (a.results.size() != b.results.size() || a.sequences != b.sequences) return false;
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    if (a.results[i].ligand_id != b.results[i].ligand_id ||
        !(a.results[i].best_pose == b.results[i].best_pose)) {
      return false;
    }
  }
  return true;
}

void write_results_csv(std::ostream& out, const EngineReport& report,
                       std::span<const Ligand> ligands) {
  out << "ligand_id,geom_score,chem_score,valid\n";
  std::size_t next = 0;
  for (std::size_t seq = 0; seq < ligands.size(); ++seq) {
    if (next < report.sequences.size() && report.sequences[next] == seq) {
      const Pose& p = report.results[next].best_pose;
      out << report.results[next].ligand_id << ',' << p.geometric_score << ','
          << format_number(p.chemical_score) << ',' << (p.valid ? 1 : 0) << '\n';
      ++next;
    } else {
      out << ligands[seq].id << ",,,0\n";
    }
  }
}

std::string summary_json(const EngineReport& report, std::size_t input_count) {
  nlohmann::ordered_json j;
  j["engine"] = report.engine;
  j["workers"] = report.workers;
  j["ligands"] = input_count;
  j["results"] = report.results.size();
  j["errors"] = report.errors.size();
  j["wall_time"] = report.wall_time;
  j["throughput"] = report.throughput;
  j["counters"] = {{"poses_scored", report.counters.poses_scored},
                   {"bump_checks", report.counters.bump_checks},
                   {"bump_early_exits", report.counters.bump_early_exits},
                   {"batches_dispatched", report.counters.batches_dispatched},
                   {"mean_fill_ratio", report.counters.mean_fill_ratio()}};
  j["workspace_allocations"] = report.workspace_allocations;
  return j.dump(2);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<HeatmapCell> run_heatmap(const HeatmapOptions& opts, const HarnessOptions& h,
                                     const Pocket& pocket, const InteractionTable& table) {
  std::vector<HeatmapCell> cells;
  for (int heavy : opts.heavy_atoms) {
    for (int frags : opts.fragments) {
      if (!feasible({heavy, frags})) {
        std::cerr << "skipping infeasible cell (" << heavy << ", " << frags << ")\n";
        continue;
      }
      cells.push_back(run_cell(heavy, frags, opts.per_cell, h, pocket, table));
    }
  }
  return cells;
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
  out << "heavy_atoms,fragments,ligands,errors,poses_scored,bump_checks,bump_early_exits,"
         "batches_dispatched,mean_fill_ratio,latency_digest,batched_digest\n";
  for (const auto& c : cells) {
    const Counters& k = c.batched.counters;
    out << c.heavy_atoms << ',' << c.fragments << ',' << c.ligands << ',' << c.errors << ','
        << k.poses_scored << ',' << k.bump_checks << ',' << k.bump_early_exits << ','
        << k.batches_dispatched << ',' << format_fixed(k.mean_fill_ratio(), 6) << ','
        << hex(c.latency.digest) << ',' << hex(c.batched.digest) << '\n';
  }
}

void write_heatmap_timing_csv(std::ostream& out, const std::vector<HeatmapCell>& cells) {
  out << "heavy_atoms,fragments,latency_tput,batched_tput,speedup\n";
  for (const auto& c : cells) {
    out << c.heavy_atoms << ',' << c.fragments << ',' << format_fixed(c.latency.throughput, 3)
        << ',' << format_fixed(c.batched.throughput, 3) << ',' << format_fixed(c.speedup(), 4)
        << '\n';
  }
}

std::vector<TrendRow> heatmap_trend(const std::vector<HeatmapCell>& cells) {
  std::vector<TrendRow> rows;
  std::vector<int> heavies;
  for (const auto& c : cells) {
    if (std::find(heavies.begin(), heavies.end(), c.heavy_atoms) == heavies.end()) {
      heavies.push_back(c.heavy_atoms);
    }
  }
  for (int heavy : heavies) {
    std::vector<double> frags, lat, bat;
    for (const auto& c : cells) {
      if (c.heavy_atoms != heavy) continue;
      const double n = static_cast<double>(std::max<std::size_t>(c.ligands, 1));
      frags.push_back(c.fragments);
      lat.push_back(c.latency.wall_time / n);
      bat.push_back(c.batched.wall_time / n);
    }
    rows.push_back({heavy, "latency", spearman(frags, lat)});
    rows.push_back({heavy, "batched", spearman(frags, bat)});
  }
  return rows;
}

void write_trend_csv(std::ostream& out, const std::vector<TrendRow>& rows) {
  out << "heavy_atoms,engine,spearman_rho\n";
  for (const auto& r : rows) {
    out << r.heavy_atoms << ',' << r.engine << ',' << format_fixed(r.spearman, 4) << '\n';
  }
}

std::vector<ScalingRow> run_scaling(const ScalingOptions& opts, const HarnessOptions& h,
                                    const Pocket& pocket, const InteractionTable& table) {
  std::vector<ScalingRow> rows;
  for (std::size_t size : opts.ladder) {
    for (const std::string mode : {"homogeneous", "heterogeneous"}) {
      const std::uint64_t seed = combine_seed(h.seed, size);
      const auto ligands =
          mode == "homogeneous"
              ? generate_dataset(opts.homogeneous.heavy_atoms, opts.homogeneous.fragments, size,
                                 seed)
              : generate_mixture(opts.mixture, size, seed);
      const ScreeningJob job{ligands, pocket, table, h.cfg, h.seed};
      for (EngineKind kind : {EngineKind::kLatency, EngineKind::kBatched}) {
        const EngineReport r = timed_run(kind, h, job);
        rows.push_back({size, mode, std::string(engine_name(kind)), r.throughput,
                        r.counters.batches_dispatched, r.counters.mean_fill_ratio(),
                        results_digest(r)});
      }
    }
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "size,mode,engine,batches_dispatched,mean_fill_ratio,digest\n";
  for (const auto& r : rows) {
    out << r.size << ',' << r.mode << ',' << r.engine << ',' << r.batches_dispatched << ','
        << format_fixed(r.mean_fill_ratio, 6) << ',' << hex(r.digest) << '\n';
  }
}

void write_scaling_timing_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "size,mode,engine,throughput,batches_dispatched,mean_fill_ratio\n";
  for (const auto& r : rows) {
    out << r.size << ',' << r.mode << ',' << r.engine << ',' << format_fixed(r.throughput, 3)
        << ',' << r.batches_dispatched << ',' << format_fixed(r.mean_fill_ratio, 6) << '\n';
  }
}

std::vector<AblationCell> run_ablation(const HeatmapOptions& opts, const HarnessOptions& h,
                                       const Pocket& pocket, const InteractionTable& table) {
  HarnessOptions on = h;
  on.cfg.early_exit = true;
  HarnessOptions off = h;
  off.cfg.early_exit = false;

  std::vector<AblationCell> cells;
  for (int heavy : opts.heavy_atoms) {
    for (int frags : opts.fragments) {
      if (!feasible({heavy, frags})) continue;
      const auto ligands =
          generate_dataset(heavy, frags, opts.per_cell, cell_seed(h.seed, heavy, frags));
      AblationCell cell;
      EngineReport reports[2][2];
      for (int flag = 0; flag < 2; ++flag) {
        const HarnessOptions& ho = flag == 0 ? on : off;
        const ScreeningJob job{ligands, pocket, table, ho.cfg, ho.seed};
        reports[flag][0] = timed_run(EngineKind::kLatency, ho, job);
        reports[flag][1] = timed_run(EngineKind::kBatched, ho, job);
        HeatmapCell& hc = flag == 0 ? cell.on : cell.off;
        hc.heavy_atoms = heavy;
        hc.fragments = frags;
        hc.ligands = ligands.size();
        hc.errors = reports[flag][0].errors.size();
        hc.latency = summarize(reports[flag][0]);
        hc.batched = summarize(reports[flag][1]);
      }
      for (int e = 0; e < 2; ++e) {
        if (!same_poses(reports[0][e], reports[1][e]) ||
            !same_poses(reports[0][e], reports[0][1 - e])) {
          throw ScoreMismatch("early exit changed a pose in cell (" + std::to_string(heavy) +
                              ", " + std::to_string(frags) + ")");
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationCell>& cells) {
  out << "heavy_atoms,fragments,ligands,poses_scored,bump_checks_on,bump_checks_off,"
         "bump_early_exits_on,bump_early_exits_off,check_ratio\n";
  for (const auto& c : cells) {
    const Counters& on = c.on.batched.counters;
    const Counters& off = c.off.batched.counters;
    out << c.on.heavy_atoms << ',' << c.on.fragments << ',' << c.on.ligands << ','
        << on.poses_scored << ',' << on.bump_checks << ',' << off.bump_checks << ','
        << on.bump_early_exits << ',' << off.bump_early_exits << ','
        << format_fixed(off.bump_checks == 0 ? 1.0 : c.check_ratio(), 6) << '\n';
  }
}

void write_ablation_timing_csv(std::ostream& out, const std::vector<AblationCell>& cells) {
  out << "heavy_atoms,fragments,latency_tput_on,batched_tput_on,speedup_on,"
         "latency_tput_off,batched_tput_off,speedup_off\n";
  for (const auto& c : cells) {
    out << c.on.heavy_atoms << ',' << c.on.fragments << ','
        << format_fixed(c.on.latency.throughput, 3) << ','
        << format_fixed(c.on.batched.throughput, 3) << ',' << format_fixed(c.on.speedup(), 4)
        << ',' << format_fixed(c.off.latency.throughput, 3) << ','
        << format_fixed(c.off.batched.throughput, 3) << ',' << format_fixed(c.off.speedup(), 4)
        << '\n';
  }
}

void apply_capacity_override(BucketCapacities& caps, const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("capacity override '" + arg + "' is not bucket=N");
  }
  int bucket = 0;
  std::size_t capacity = 0;
  try {
    bucket = parse_number<int>(std::string_view(arg).substr(0, eq), 0);
    capacity = parse_number<std::size_t>(std::string_view(arg).substr(eq + 1), 0);
  } catch (const ParseError&) {
    throw std::invalid_argument("capacity override '" + arg + "' is not bucket=N");
  }
  caps.set(bucket, capacity);
}

}  // namespace vscreen
