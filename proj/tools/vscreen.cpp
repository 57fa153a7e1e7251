// vscreen: docking engines and the experiment harness from the command line.
//
//   vscreen dock --ligands in.ligq --pocket target.pock --engine batched --out run/
//   vscreen heatmap --out heat/
//   vscreen scaling --ladder 10,100,1000 --out scale/
//   vscreen ablate-early-exit --out ablation/
//   vscreen generate --heavy-atoms 20 --fragments 1 --count 1000 --output set.ligq
//   vscreen make-pocket --output target.pock

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vscreen/engines.hpp"
#include "vscreen/harness.hpp"
#include "vscreen/io.hpp"

namespace fs = std::filesystem;
using namespace vscreen;

namespace {

constexpr int kUsageError = 2;

struct CommonArgs {
  std::string engine = "batched";
  int workers = omp_get_num_procs();
  std::uint64_t seed = 42;
  int restarts = DockConfig{}.restarts_n;
  int top_k = DockConfig{}.rescore_top_k;
  std::string early_exit = "on";
  std::vector<std::string> capacity_overrides;
  std::string out = "vscreen-out";
  std::string table_path;
  std::string pocket_path;
  int repeats = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_engine) {
  if (with_engine) {
    cmd->add_option("--engine", a.engine, "latency | batched | sequential")
        ->check(CLI::IsMember({"latency", "batched", "sequential"}));
  }
  cmd->add_option("--workers", a.workers, "worker threads (default: logical cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "seed for starting poses and datasets");
  cmd->add_option("--restarts", a.restarts, "starting poses per ligand")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--top-k", a.top_k, "poses kept for rescoring")->check(CLI::PositiveNumber);
  cmd->add_option("--early-exit", a.early_exit, "stop a bump check at the first bump")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--capacity-override", a.capacity_overrides,
                  "bucket=N, bucket being the atom range index 0..4");
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_option("--table", a.table_path, "interaction table file");
}

HarnessOptions harness_options(const CommonArgs& a) {
  HarnessOptions h;
  h.workers = a.workers;
  h.seed = a.seed;
  h.cfg.restarts_n = a.restarts;
  h.cfg.rescore_top_k = a.top_k;
  h.cfg.early_exit = a.early_exit == "on";
  h.cfg.check();
  for (const auto& arg : a.capacity_overrides) apply_capacity_override(h.capacities, arg);
  h.repeats = a.repeats;
  return h;
}

InteractionTable load_table(const CommonArgs& a, const DockConfig& cfg) {
  if (a.table_path.empty()) return InteractionTable::standard(cfg.rescore_cutoff);
  if (!fs::exists(a.table_path)) {
    throw std::invalid_argument("interaction table not found: " + a.table_path);
  }
  return load_interaction_table(a.table_path);
}

Pocket load_or_synthesize_pocket(const CommonArgs& a) {
  if (a.pocket_path.empty()) return synthetic_pocket(a.seed);
  if (!fs::exists(a.pocket_path)) {
    throw std::invalid_argument("pocket file not found: " + a.pocket_path);
  }
  Pocket p = load_pocket(a.pocket_path);
  p.check();
  return p;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  auto out = open_output(path);
  writer(out);
  std::cout << "wrote " << path.string() << '\n';
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoi(item));
  return out;
}

int cmd_dock(const CommonArgs& a, const std::string& ligand_path, bool skip_invalid) {
  const HarnessOptions h = harness_options(a);
  if (!fs::exists(ligand_path)) {
    std::cerr << "error: ligand file not found: " << ligand_path << '\n';
    return kUsageError;
  }
  if (!fs::exists(a.pocket_path)) {
    std::cerr << "error: pocket file not found: " << a.pocket_path << '\n';
    return kUsageError;
  }
  const auto table = load_table(a, h.cfg);
  const Pocket pocket = load_or_synthesize_pocket(a);
  const LigandFile file = parse_ligand_file(ligand_path, skip_invalid);
  for (const auto& s : file.skipped) {
    std::cerr << "skipped '" << s.ligand_id << "': " << s.message << '\n';
  }

  const ScreeningJob job{file.ligands, pocket, table, h.cfg, h.seed};
  const EngineReport report = run_engine(parse_engine(a.engine), h.workers, h.capacities, job);
  for (const auto& e : report.errors) {
    std::cerr << "ligand '" << e.ligand_id << "': " << e.message << '\n';
  }

  fs::create_directories(a.out);
  write_file(fs::path(a.out) / "results.csv",
             [&](std::ostream& o) { write_results_csv(o, report, file.ligands); });
  const std::string summary = summary_json(report, file.ligands.size());
  write_file(fs::path(a.out) / "summary.json", [&](std::ostream& o) { o << summary << '\n'; });
  std::cout << summary << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vscreen: deterministic docking engines and throughput harness"};
  app.require_subcommand(1);

  CommonArgs dock_args;
  std::string ligand_path;
  bool skip_invalid = false;
  auto* dock = app.add_subcommand("dock", "dock a ligand file against a pocket");
  add_common(dock, dock_args, true);
  dock->add_option("--ligands", ligand_path, ".ligq input")->required();
  dock->add_option("--pocket", dock_args.pocket_path, ".pock input")->required();
  dock->add_flag("--skip-invalid", skip_invalid, "skip molecules that fail validation");

  CommonArgs heat_args;
  std::string heat_atoms = "20,30,40,50";
  std::string heat_frags = "1,4,8,12,16";
  std::size_t per_cell = 2000;
  bool heat_full = false;
  auto* heatmap = app.add_subcommand("heatmap", "throughput over (heavy atoms, fragments)");
  auto* ablate = app.add_subcommand("ablate-early-exit", "heatmap with early exit on and off");
  for (auto* cmd : {heatmap, ablate}) {
    add_common(cmd, heat_args, false);
    cmd->add_option("--pocket", heat_args.pocket_path, ".pock file (default: synthetic)");
    cmd->add_option("--atoms", heat_atoms, "comma-separated heavy atom counts");
    cmd->add_option("--fragments", heat_frags, "comma-separated fragment counts");
    cmd->add_option("--count", per_cell, "ligands per cell");
    cmd->add_option("--repeats", heat_args.repeats, "timing runs per engine (fastest kept)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--full-scale", heat_full, "50000 ligands per cell");
  }

  CommonArgs scale_args;
  std::vector<std::size_t> ladder;
  bool scale_full = false;
  auto* scaling = app.add_subcommand("scaling", "throughput against dataset size");
  add_common(scaling, scale_args, false);
  scaling->add_option("--pocket", scale_args.pocket_path, ".pock file (default: synthetic)");
  scaling->add_option("--ladder", ladder, "dataset sizes")->delimiter(',');
  scaling->add_option("--repeats", scale_args.repeats, "timing runs per engine")
      ->check(CLI::PositiveNumber);
  scaling->add_flag("--full-scale", scale_full, "extend the ladder to 10^6");

  int gen_heavy = 20;
  int gen_frags = 1;
  std::size_t gen_count = 100;
  std::uint64_t gen_seed = 42;
  std::string gen_output;
  auto* generate = app.add_subcommand("generate", "write a synthetic .ligq dataset");
  generate->add_option("--heavy-atoms", gen_heavy)->required();
  generate->add_option("--fragments", gen_frags)->required();
  generate->add_option("--count", gen_count);
  generate->add_option("--seed", gen_seed);
  generate->add_option("--output", gen_output)->required();

  std::uint64_t pocket_seed = 42;
  std::string pocket_output;
  auto* make_pocket = app.add_subcommand("make-pocket", "write the synthetic .pock target");
  make_pocket->add_option("--seed", pocket_seed);
  make_pocket->add_option("--output", pocket_output)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dock) return cmd_dock(dock_args, ligand_path, skip_invalid);

    if (*heatmap || *ablate) {
      const HarnessOptions h = harness_options(heat_args);
      HeatmapOptions opts;
      opts.heavy_atoms = parse_int_list(heat_atoms);
      opts.fragments = parse_int_list(heat_frags);
      opts.per_cell = heat_full ? 50000 : per_cell;
      const auto table = load_table(heat_args, h.cfg);
      const Pocket pocket = load_or_synthesize_pocket(heat_args);
      fs::create_directories(heat_args.out);
      const fs::path out(heat_args.out);
      if (*heatmap) {
        const auto cells = run_heatmap(opts, h, pocket, table);
        write_file(out / "heatmap.csv", [&](std::ostream& o) { write_heatmap_csv(o, cells); });
        write_file(out / "heatmap_timing.csv",
                   [&](std::ostream& o) { write_heatmap_timing_csv(o, cells); });
        write_file(out / "heatmap_trend.csv",
                   [&](std::ostream& o) { write_trend_csv(o, heatmap_trend(cells)); });
      } else {
        const auto cells = run_ablation(opts, h, pocket, table);
        write_file(out / "ablation.csv", [&](std::ostream& o) { write_ablation_csv(o, cells); });
        write_file(out / "ablation_timing.csv",
                   [&](std::ostream& o) { write_ablation_timing_csv(o, cells); });
      }
      return 0;
    }

    if (*scaling) {
      const HarnessOptions h = harness_options(scale_args);
      ScalingOptions opts;
      if (!ladder.empty()) opts.ladder = ladder;
      if (scale_full) opts.ladder.push_back(1000000);
      const auto table = load_table(scale_args, h.cfg);
      const Pocket pocket = load_or_synthesize_pocket(scale_args);
      const auto rows = run_scaling(opts, h, pocket, table);
      fs::create_directories(scale_args.out);
      const fs::path out(scale_args.out);
      write_file(out / "scaling.csv", [&](std::ostream& o) { write_scaling_csv(o, rows); });
      write_file(out / "scaling_timing.csv",
                 [&](std::ostream& o) { write_scaling_timing_csv(o, rows); });
      return 0;
    }

    if (*generate) {
      const auto ligands = generate_dataset(gen_heavy, gen_frags, gen_count, gen_seed);
      write_ligand_file(gen_output, ligands);
      std::cout << "wrote " << ligands.size() << " ligands to " << gen_output << '\n';
      return 0;
    }

    if (*make_pocket) {
      write_pocket_file(pocket_output, synthetic_pocket(pocket_seed));
      std::cout << "wrote " << pocket_output << '\n';
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
