// Grid scoring, internal bump checks and the pairwise chemical rescoring.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vscreen/model.hpp"

namespace vscreen {

inline constexpr std::int64_t kOutOfGridPenalty = -100;

/// Typed pair weights plus a piecewise-constant distance multiplier.
class InteractionTable {
 public:
  struct Bin {
    double upper;  // exclusive
    double multiplier;
  };

  /// Throws std::invalid_argument unless the table is symmetric and the bins
  /// are strictly ascending.
  InteractionTable(const std::array<double, kElementTypes * kElementTypes>& weights,
                   std::vector<Bin> bins);

  /// Deterministic seeded weights in [-1, 1]; last bin ends at `cutoff`.
  static InteractionTable standard(double cutoff = 8.0);

  double weight(int a, int b) const { return weights_[a * kElementTypes + b]; }
  /// Zero beyond the last bin.
  double bin_multiplier(double distance) const;
  const std::vector<Bin>& bins() const { return bins_; }
  double last_upper() const { return bins_.back().upper; }

 private:
  std::array<double, kElementTypes * kElementTypes> weights_;
  std::vector<Bin> bins_;
};

/// Text form: 16 lines of 16 reals, then one "upper multiplier" line per bin.
InteractionTable parse_interaction_table(std::istream& in);
InteractionTable load_interaction_table(const std::string& path);
void write_interaction_table(std::ostream& out, const InteractionTable& table);

/// Sum of nearest-node grid values; atoms whose nearest node falls outside the
/// grid add kOutOfGridPenalty.
std::int64_t grid_score(std::span<const Vec3f> coords, const Pocket& pocket);

/// True iff some moving atom sits closer than `bump_distance` to a fixed atom.
/// Every pair distance evaluated bumps counters.bump_checks; an early stop
/// bumps counters.bump_early_exits. The result never depends on early_exit.
bool bump_check(std::span<const Vec3f> coords, const Fragment& frag, double bump_distance,
                bool early_exit, Counters& counters);

/// All ligand x pocket atom pairs closer than `cutoff`, accumulated with the
/// ligand atom in the outer loop.
double rescore(std::span<const Vec3f> coords, const Ligand& ligand, const Pocket& pocket,
               const InteractionTable& table, double cutoff);

}  // namespace vscreen
