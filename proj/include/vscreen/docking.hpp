// Single-ligand docking pipeline: restarts, rigid alignment sweep, greedy
// per-fragment torsion search, similarity filtering and rescoring.
//
// The functions in this header are the sequential reference. The parallel
// engines decompose the same work across threads but call the same per-trial
// kernels (score_rotation, torsion_trial) and the same reductions, so their
// results are bit-identical to dock_ligand().

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vscreen/model.hpp"
#include "vscreen/scoring.hpp"
#include "vscreen/transform.hpp"

namespace vscreen {

Pose generate_starting_pose(const Ligand& ligand, const Pocket& pocket, int restart_index,
                            std::uint64_t seed);

/// Rotation matrices for the alignment sweep, x-angle major:
/// entry ix * n + iy is alignment_rotation(ix * step, iy * step).
std::vector<RotMatrix> alignment_rotations(const DockConfig& cfg);

/// Grid score of `start` rotated about `center`. `scratch` holds start.size()
/// coordinates and receives the rotated pose.
std::int64_t score_rotation(std::span<const Vec3f> start, const Vec3d& center,
                            const RotMatrix& m, const Pocket& pocket, std::span<Vec3f> scratch);

/// Index of the best score; ties go to the lowest index. Empty input -> -1.
int argmax_first(std::span<const std::int64_t> scores);

Pose align(const Pose& start, const Pocket& pocket, const DockConfig& cfg, Counters& counters);

struct TorsionTrial {
  bool bumped = false;
  std::int64_t score = 0;  // meaningful only when !bumped
};

/// One torsion angle tried from `base`. `scratch` must hold a copy of `base`
/// on entry; the masked atoms are overwritten with the turned coordinates.
TorsionTrial torsion_trial(std::span<const Vec3f> base, const Fragment& frag, int angle_deg,
                           const Pocket& pocket, const DockConfig& cfg,
                           std::span<Vec3f> scratch, Counters& counters);

/// Best bump-free trial, ties to the smallest angle; nullopt if all bumped.
std::optional<int> pick_torsion(std::span<const TorsionTrial> trials);

/// Applies the winning trial to `pose`, or marks it invalid if every trial
/// bumped (the incoming geometry is kept in that case).
void commit_fragment(Pose& pose, const Fragment& frag, std::span<const TorsionTrial> trials,
                     const DockConfig& cfg);

/// Rejects ligands whose torsion axes cannot define a rotation.
void check_torsion_axes(const Ligand& ligand);

Pose optimize_pose(Pose pose, const Ligand& ligand, const Pocket& pocket,
                   const DockConfig& cfg, Counters& counters);

/// Heavy-atom RMSD without superposition. Falls back to all atoms for a
/// ligand that has no heavy atom.
double heavy_atom_rmsd(const Ligand& ligand, std::span<const Vec3f> a,
                       std::span<const Vec3f> b);

/// Throws NoValidPose if no pose is valid.
std::vector<Pose> select_poses(std::span<const Pose> poses, const Ligand& ligand,
                               const DockConfig& cfg, const std::string& ligand_id);

/// Highest chemical score, ties to the lowest restart index.
const Pose& best_rescored(std::span<const Pose> kept);

DockResult dock_ligand(const Ligand& ligand, const Pocket& pocket,
                       const InteractionTable& table, const DockConfig& cfg,
                       std::uint64_t seed);

}  // namespace vscreen
