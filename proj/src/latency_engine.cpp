// Latency-oriented strategy: ligands are docked one after another and the
// work inside each ligand is shared by the whole OpenMP team.
//
// Per ligand the team goes through these phases, separated by the implicit
// barriers of the worksharing loops:
//   1. starting poses, one per restart
//   2. restarts x rotations alignment sweep (scores only)
//   3. per-restart argmax and commit of the best rotation
//   4. for each fragment in order: restarts x angles torsion trials, then a
//      per-restart commit
//   5. similarity filtering (single thread), rescoring of the kept poses

#include <omp.h>

#include <chrono>
#include <exception>

#include "engine_common.hpp"
#include "vscreen/engines.hpp"

namespace vscreen {

std::atomic<std::size_t> LatencyWorkspace::allocations_{0};

LatencyWorkspace::LatencyWorkspace()
    : rotation_(kMaxLigandAtoms), torsion_(kMaxLigandAtoms) {
  ++allocations_;
}

LatencyEngine::LatencyEngine(int workers) : workers_(workers) {
  if (workers < 1) throw std::invalid_argument("workers must be positive");
}

namespace {

struct LigandState {
  std::vector<Pose> starts;
  std::vector<Vec3d> centers;
  std::vector<Pose> poses;
  std::vector<std::int64_t> rotation_scores;
  std::vector<TorsionTrial> trials;
  std::vector<Counters> trial_counters;
  std::vector<Counters> restart_counters;
  std::vector<Pose> kept;
  bool skip = false;

  LigandState(const DockConfig& cfg)
      : starts(cfg.restarts_n),
        centers(cfg.restarts_n),
        poses(cfg.restarts_n),
        rotation_scores(static_cast<std::size_t>(cfg.restarts_n) * cfg.rotations_per_restart()),
        trials(static_cast<std::size_t>(cfg.restarts_n) * cfg.torsion_angles()),
        trial_counters(trials.size()),
        restart_counters(cfg.restarts_n) {
    for (auto& p : poses) p.coordinates.reserve(kMaxLigandAtoms);
  }
};

}  // namespace

EngineReport LatencyEngine::run(const ScreeningJob& job) const {
  const DockConfig& cfg = job.cfg;
  cfg.check();
  EngineReport report;
  report.engine = "latency";
  report.workers = workers_;

  const std::size_t n = job.ligands.size();
  const int restarts = cfg.restarts_n;
  const int rotations_per = cfg.rotations_per_restart();
  const int angles = cfg.torsion_angles();
  const auto rotations = alignment_rotations(cfg);
  detail::ResultSlots slots(n);
  LigandState st(cfg);
  std::exception_ptr failure;

  const std::size_t allocations_before = LatencyWorkspace::allocations();
  const auto t0 = std::chrono::steady_clock::now();

#pragma omp parallel num_threads(workers_) default(shared)
  {
    LatencyWorkspace ws;
    for (std::size_t seq = 0; seq < n; ++seq) {
      const Ligand& ligand = job.ligands[seq];
      const std::size_t atoms = ligand.atom_count();

#pragma omp single
      {
        st.skip = false;
        try {
          check_torsion_axes(ligand);
        } catch (const std::exception& e) {
          slots.store_error(seq, ligand.id, e.what());
          st.skip = true;
        }
        for (auto& c : st.restart_counters) c = {};
      }
      // Everyone reads the flag before anyone can reach the next ligand's
      // single and reset it.
      const bool skip = st.skip;
#pragma omp barrier
      if (skip) continue;

#pragma omp for schedule(static)
      for (int r = 0; r < restarts; ++r) {
        st.starts[r] = generate_starting_pose(ligand, job.pocket, r, job.seed);
        st.centers[r] = centroid(st.starts[r].coordinates);
      }

      const int sweep = restarts * rotations_per;
#pragma omp for schedule(static)
      for (int k = 0; k < sweep; ++k) {
        const int r = k / rotations_per;
        st.rotation_scores[static_cast<std::size_t>(k)] =
            score_rotation(st.starts[r].coordinates, st.centers[r],
                           rotations[static_cast<std::size_t>(k % rotations_per)], job.pocket,
                           ws.rotation_scratch());
      }

#pragma omp for schedule(static)
      for (int r = 0; r < restarts; ++r) {
        const auto scores = std::span<const std::int64_t>(st.rotation_scores)
                                .subspan(static_cast<std::size_t>(r) * rotations_per,
                                         static_cast<std::size_t>(rotations_per));
        const int best = argmax_first(scores);
        Pose& pose = st.poses[r];
        pose.coordinates.resize(atoms);
        apply_rigid(st.starts[r].coordinates, rotations[static_cast<std::size_t>(best)],
                    st.centers[r], pose.coordinates);
        pose.geometric_score = scores[static_cast<std::size_t>(best)];
        pose.chemical_score = 0.0;
        pose.restart_index = r;
        pose.valid = true;
        st.restart_counters[r].poses_scored += static_cast<std::uint64_t>(rotations_per);
      }

      const int trials = restarts * angles;
      for (const auto& frag : ligand.fragments) {
#pragma omp for schedule(static)
        for (int t = 0; t < trials; ++t) {
          const int r = t / angles;
          const auto& base = st.poses[r].coordinates;
          auto scratch = ws.torsion_scratch().first(atoms);
          std::copy(base.begin(), base.end(), scratch.begin());
          Counters& c = st.trial_counters[static_cast<std::size_t>(t)];
          c = {};
          st.trials[static_cast<std::size_t>(t)] = torsion_trial(
              base, frag, (t % angles) * cfg.torsion_step_deg, job.pocket, cfg, scratch, c);
        }
#pragma omp for schedule(static)
        for (int r = 0; r < restarts; ++r) {
          const auto first = static_cast<std::size_t>(r) * angles;
          for (int a = 0; a < angles; ++a) {
            st.restart_counters[r] += st.trial_counters[first + static_cast<std::size_t>(a)];
          }
          commit_fragment(st.poses[r], frag,
                          std::span<const TorsionTrial>(st.trials)
                              .subspan(first, static_cast<std::size_t>(angles)),
                          cfg);
        }
      }

#pragma omp single
      {
        try {
          st.kept = select_poses(st.poses, ligand, cfg, ligand.id);
        } catch (const std::exception& e) {
          slots.store_error(seq, ligand.id, e.what());
          st.kept.clear();
        }
      }

      const int kept = static_cast<int>(st.kept.size());
#pragma omp for schedule(static)
      for (int i = 0; i < kept; ++i) {
        st.kept[i].chemical_score = rescore(st.kept[i].coordinates, ligand, job.pocket,
                                            job.table, cfg.rescore_cutoff);
      }

#pragma omp single
      {
        if (!st.kept.empty()) {
          try {
            DockResult result;
            result.ligand_id = ligand.id;
            for (const auto& c : st.restart_counters) result.counters += c;
            result.best_pose = best_rescored(st.kept);
            slots.store(seq, std::move(result));
          } catch (...) {
            failure = std::current_exception();
          }
        }
      }
    }
  }

  if (failure) std::rethrow_exception(failure);
  slots.finish(report, detail::seconds_since(t0));
  report.workspace_allocations = LatencyWorkspace::allocations() - allocations_before;
  return report;
}

}  // namespace vscreen
