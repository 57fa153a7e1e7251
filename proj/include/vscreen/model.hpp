// Domain records shared by every vscreen module.
//
// Everything here is a plain value type. Once a Ligand has been through
// validate_ligand() it is treated as immutable and may be shared freely
// between worker threads.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vscreen {

inline constexpr std::size_t kMaxLigandAtoms = 160;
inline constexpr int kElementTypes = 16;
inline constexpr int kHydrogen = 0;

struct Vec3f {
  float x = 0.0F;
  float y = 0.0F;
  float z = 0.0F;

  friend bool operator==(const Vec3f&, const Vec3f&) = default;
};

struct Vec3d {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3d&, const Vec3d&) = default;
};

inline Vec3d widen(Vec3f p) { return {p.x, p.y, p.z}; }

inline double distance_squared(Vec3f a, Vec3f b) {
  const double dx = static_cast<double>(a.x) - b.x;
  const double dy = static_cast<double>(a.y) - b.y;
  const double dz = static_cast<double>(a.z) - b.z;
  return dx * dx + dy * dy + dz * dz;
}

/// Element codes. Only hydrogen is special; the rest index the 16x16
/// interaction table.
enum class Element : std::uint8_t {
  H = 0, C, N, O, S, P, F, Cl, Br, I, B, Si, Se, Metal, Halogen, Other
};

struct Atom {
  Vec3f position;
  std::uint8_t element_type = 1;
  bool is_heavy = true;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A rotatable bond. `moving_mask` holds the atoms that turn when the bond
/// rotates; `fixed_atoms` is the complement minus both axis atoms and is
/// filled in by validate_ligand().
struct Fragment {
  std::uint16_t axis_begin = 0;
  std::uint16_t axis_end = 0;
  std::vector<std::uint16_t> moving_mask;
  std::vector<std::uint16_t> fixed_atoms;

  friend bool operator==(const Fragment& a, const Fragment& b) {
    return a.axis_begin == b.axis_begin && a.axis_end == b.axis_end &&
           a.moving_mask == b.moving_mask;
  }
};

struct Ligand {
  std::string id;
  std::vector<Atom> atoms;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> bonds;
  std::vector<Fragment> fragments;

  std::size_t atom_count() const { return atoms.size(); }
  std::size_t heavy_atom_count() const;
  std::size_t fragment_count() const { return fragments.size(); }

  friend bool operator==(const Ligand&, const Ligand&) = default;
};

struct Pocket {
  Vec3d grid_origin;
  double grid_spacing = 1.0;
  std::array<int, 3> grid_dims{1, 1, 1};
  /// x-fastest: index = x + nx * (y + ny * z)
  std::vector<std::int32_t> grid_values;
  std::vector<Atom> pocket_atoms;

  std::size_t node_count() const {
    return static_cast<std::size_t>(grid_dims[0]) * grid_dims[1] * grid_dims[2];
  }
  std::int32_t value_at(int x, int y, int z) const {
    return grid_values[static_cast<std::size_t>(x) +
                       static_cast<std::size_t>(grid_dims[0]) *
                           (static_cast<std::size_t>(y) +
                            static_cast<std::size_t>(grid_dims[1]) * z)];
  }
  /// Throws std::invalid_argument when the grid invariants do not hold.
  void check() const;
};

struct Pose {
  std::vector<Vec3f> coordinates;
  std::int64_t geometric_score = 0;
  double chemical_score = 0.0;
  int restart_index = 0;
  bool valid = true;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Counters {
  std::uint64_t poses_scored = 0;
  std::uint64_t bump_checks = 0;  // pair distance tests performed
  std::uint64_t bump_early_exits = 0;
  std::uint64_t batches_dispatched = 0;
  double batch_fill_ratio_sum = 0.0;

  Counters& operator+=(const Counters& o) {
    poses_scored += o.poses_scored;
    bump_checks += o.bump_checks;
    bump_early_exits += o.bump_early_exits;
    batches_dispatched += o.batches_dispatched;
    batch_fill_ratio_sum += o.batch_fill_ratio_sum;
    return *this;
  }
  double mean_fill_ratio() const {
    return batches_dispatched == 0
               ? 0.0
               : batch_fill_ratio_sum / static_cast<double>(batches_dispatched);
  }

  friend bool operator==(const Counters&, const Counters&) = default;
};

struct DockConfig {
  int restarts_n = 8;
  int rescore_top_k = 4;
  int alignment_step_deg = 12;
  int torsion_step_deg = 36;
  double bump_distance = 0.8;
  double similarity_rmsd = 1.0;
  double rescore_cutoff = 8.0;
  bool early_exit = true;

  int alignment_angles() const { return 360 / alignment_step_deg; }
  int torsion_angles() const { return 360 / torsion_step_deg; }
  int rotations_per_restart() const {
    return alignment_angles() * alignment_angles();
  }
  /// Throws std::invalid_argument on a bad combination.
  void check() const;
};

struct DockResult {
  std::string ligand_id;
  Pose best_pose;
  Counters counters;

  friend bool operator==(const DockResult&, const DockResult&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  enum class Kind {
    kTooManyAtoms,
    kEmptyLigand,
    kIndexOutOfRange,
    kMalformedFragment,
    kInconsistentAtom,
  };

  ValidationError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class NoValidPose : public std::runtime_error {
 public:
  explicit NoValidPose(const std::string& ligand_id)
      : std::runtime_error("no valid pose for ligand '" + ligand_id + "'") {}
};

/// Checks every Ligand/Fragment invariant and fills Fragment::fixed_atoms.
/// Masks are sorted and de-duplicated on the way through.
Ligand validate_ligand(Ligand ligand);

}  // namespace vscreen
