#include "vscreen/docking.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vscreen/rng.hpp"

namespace vscreen {

namespace {

// Uniform random rotation from three uniforms (Shoemake's quaternion method).
RotMatrix random_rotation(SplitMix64& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform() * 2.0 * std::numbers::pi;
  const double u3 = rng.uniform() * 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const double w = a * std::sin(u2);
  const double x = a * std::cos(u2);
  const double y = b * std::sin(u3);
  const double z = b * std::cos(u3);
  return {{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
           2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
           2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
}

std::vector<Vec3f> coords_of(const Ligand& ligand) {
  std::vector<Vec3f> out;
  out.reserve(ligand.atoms.size());
  for (const auto& a : ligand.atoms) out.push_back(a.position);
  return out;
}

}  // namespace

Pose generate_starting_pose(const Ligand& ligand, const Pocket& pocket, int restart_index,
                            std::uint64_t seed) {
  SplitMix64 rng(combine_seed(combine_seed(seed, fnv1a(ligand.id)),
                              static_cast<std::uint64_t>(restart_index)));
  const auto& o = pocket.grid_origin;
  const double h = pocket.grid_spacing;
  const auto& d = pocket.grid_dims;
  // Inner 80% of the grid's bounding box.
  auto inner = [&](double origin, int dim) {
    const double extent = (dim - 1) * h;
    return origin + (0.1 + 0.8 * rng.uniform()) * extent;
  };
  const double tx = inner(o.x, d[0]);
  const double ty = inner(o.y, d[1]);
  const double tz = inner(o.z, d[2]);
  const RotMatrix r = random_rotation(rng);

  const auto input = coords_of(ligand);
  const Vec3d c = centroid(input);
  Pose pose;
  pose.restart_index = restart_index;
  pose.coordinates.resize(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    const Vec3d q = r.apply({input[i].x - c.x, input[i].y - c.y, input[i].z - c.z});
    pose.coordinates[i] = {static_cast<float>(q.x + tx), static_cast<float>(q.y + ty),
                           static_cast<float>(q.z + tz)};
  }
  pose.geometric_score = grid_score(pose.coordinates, pocket);
  return pose;
}

std::vector<RotMatrix> alignment_rotations(const DockConfig& cfg) {
  const int n = cfg.alignment_angles();
  std::vector<RotMatrix> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      out.push_back(alignment_rotation(ix * cfg.alignment_step_deg, iy * cfg.alignment_step_deg));
    }
  }
  return out;
}

std::int64_t score_rotation(std::span<const Vec3f> start, const Vec3d& center,
                            const RotMatrix& m, const Pocket& pocket,
                            std::span<Vec3f> scratch) {
  apply_rigid(start, m, center, scratch);
  return grid_score(scratch.first(start.size()), pocket);
}

int argmax_first(std::span<const std::int64_t> scores) {
  int best = -1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (best < 0 || scores[i] > scores[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

Pose align(const Pose& start, const Pocket& pocket, const DockConfig& cfg, Counters& counters) {
  const auto rotations = alignment_rotations(cfg);
  const Vec3d center = centroid(start.coordinates);
  std::vector<Vec3f> scratch(start.coordinates.size());
  std::vector<std::int64_t> scores(rotations.size());
  for (std::size_t k = 0; k < rotations.size(); ++k) {
    scores[k] = score_rotation(start.coordinates, center, rotations[k], pocket, scratch);
  }
  counters.poses_scored += rotations.size();

  const int best = argmax_first(scores);
  Pose out = start;
  apply_rigid(start.coordinates, rotations[static_cast<std::size_t>(best)], center,
              out.coordinates);
  out.geometric_score = scores[static_cast<std::size_t>(best)];
  return out;
}

TorsionTrial torsion_trial(std::span<const Vec3f> base, const Fragment& frag, int angle_deg,
                           const Pocket& pocket, const DockConfig& cfg,
                           std::span<Vec3f> scratch, Counters& counters) {
  apply_torsion(base, frag, angle_deg, scratch);
  ++counters.poses_scored;
  TorsionTrial trial;
  trial.bumped = bump_check(scratch, frag, cfg.bump_distance, cfg.early_exit, counters);
  if (!trial.bumped) trial.score = grid_score(scratch, pocket);
  return trial;
}

std::optional<int> pick_torsion(std::span<const TorsionTrial> trials) {
  std::optional<int> best;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (trials[i].bumped) continue;
    if (!best || trials[i].score > trials[static_cast<std::size_t>(*best)].score) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

void commit_fragment(Pose& pose, const Fragment& frag, std::span<const TorsionTrial> trials,
                     const DockConfig& cfg) {
  const auto pick = pick_torsion(trials);
  if (!pick) {
    pose.valid = false;
    return;
  }
  apply_torsion(std::span<const Vec3f>(pose.coordinates), frag, *pick * cfg.torsion_step_deg,
                pose.coordinates);
  pose.geometric_score = trials[static_cast<std::size_t>(*pick)].score;
}

void check_torsion_axes(const Ligand& ligand) {
  for (const auto& frag : ligand.fragments) {
    if (distance_squared(ligand.atoms[frag.axis_begin].position,
                         ligand.atoms[frag.axis_end].position) < 1e-18) {
      throw DegenerateAxis();
    }
  }
}

Pose optimize_pose(Pose pose, const Ligand& ligand, const Pocket& pocket,
                   const DockConfig& cfg, Counters& counters) {
  const int angles = cfg.torsion_angles();
  std::vector<Vec3f> scratch;
  std::vector<TorsionTrial> trials(static_cast<std::size_t>(angles));
  for (const auto& frag : ligand.fragments) {
    for (int a = 0; a < angles; ++a) {
      scratch = pose.coordinates;
      trials[static_cast<std::size_t>(a)] = torsion_trial(
          pose.coordinates, frag, a * cfg.torsion_step_deg, pocket, cfg, scratch, counters);
    }
    commit_fragment(pose, frag, trials, cfg);
  }
  return pose;
}

double heavy_atom_rmsd(const Ligand& ligand, std::span<const Vec3f> a,
                       std::span<const Vec3f> b) {
  const bool any_heavy = ligand.heavy_atom_count() > 0;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (any_heavy && !ligand.atoms[i].is_heavy) continue;
    sum += distance_squared(a[i], b[i]);
    ++n;
  }
  return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

std::vector<Pose> select_poses(std::span<const Pose> poses, const Ligand& ligand,
                               const DockConfig& cfg, const std::string& ligand_id) {
  std::vector<const Pose*> order;
  for (const auto& p : poses) {
    if (p.valid) order.push_back(&p);
  }
  if (order.empty()) throw NoValidPose(ligand_id);
  std::sort(order.begin(), order.end(), [](const Pose* a, const Pose* b) {
    if (a->geometric_score != b->geometric_score) {
      return a->geometric_score > b->geometric_score;
    }
    return a->restart_index < b->restart_index;
  });

  std::vector<Pose> kept;
  for (const Pose* candidate : order) {
    if (static_cast<int>(kept.size()) == cfg.rescore_top_k) break;
    const bool distinct = std::all_of(kept.begin(), kept.end(), [&](const Pose& k) {
      return heavy_atom_rmsd(ligand, candidate->coordinates, k.coordinates) >=
             cfg.similarity_rmsd;
    });
    if (distinct) kept.push_back(*candidate);
  }
  return kept;
}

const Pose& best_rescored(std::span<const Pose> kept) {
  const Pose* best = &kept.front();
  for (const auto& p : kept) {
    if (p.chemical_score > best->chemical_score ||
        (p.chemical_score == best->chemical_score && p.restart_index < best->restart_index)) {
      best = &p;
    }
  }
  return *best;
}

DockResult dock_ligand(const Ligand& ligand, const Pocket& pocket,
                       const InteractionTable& table, const DockConfig& cfg,
                       std::uint64_t seed) {
  check_torsion_axes(ligand);
  DockResult result;
  result.ligand_id = ligand.id;
  std::vector<Pose> poses;
  poses.reserve(static_cast<std::size_t>(cfg.restarts_n));
  for (int r = 0; r < cfg.restarts_n; ++r) {
    Pose start = generate_starting_pose(ligand, pocket, r, seed);
    Pose aligned = align(start, pocket, cfg, result.counters);
    poses.push_back(optimize_pose(std::move(aligned), ligand, pocket, cfg, result.counters));
  }
  auto kept = select_poses(poses, ligand, cfg, ligand.id);
  for (auto& p : kept) {
    p.chemical_score = rescore(p.coordinates, ligand, pocket, table, cfg.rescore_cutoff);
  }
  result.best_pose = best_rescored(kept);
  return result;
}

}  // namespace vscreen
