// Ligand and pocket text formats, the synthetic dataset generator and the
// pocket grid builder.
//
// .ligq, one block per molecule:
//   MOL <id>
//   ATOM <idx> <type> <x> <y> <z> <H|heavy>
//   BOND <i> <j>
//   FRAG <axis_i> <axis_j> <mask indices...>
//   END
//
// .pock:
//   GRID <ox> <oy> <oz> <spacing> <nx> <ny> <nz>
//   <nx*ny*nz integer node values, x fastest, one grid row per line>
//   PATOM <type> <x> <y> <z>
//
// Numbers are written in their shortest round-trip form and parsed without
// touching the C locale.

#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vscreen/model.hpp"
#include "vscreen/textio.hpp"

namespace vscreen {

inline constexpr std::size_t kMaxRecordBytes = 20 * 1024;

struct SkippedLigand {
  int line = 0;  // line of the END record
  std::string ligand_id;
  std::string message;
};

struct LigandFile {
  std::vector<Ligand> ligands;
  std::vector<SkippedLigand> skipped;
};

/// Syntax problems throw ParseError. A molecule that fails validation throws
/// ValidationError unless `skip_invalid`, in which case it lands in `skipped`.
LigandFile parse_ligands(std::istream& in, bool skip_invalid = false);
LigandFile parse_ligand_file(const std::string& path, bool skip_invalid = false);
void write_ligands(std::ostream& out, std::span<const Ligand> ligands);
void write_ligand_file(const std::string& path, std::span<const Ligand> ligands);

Pocket parse_pocket(std::istream& in);
Pocket load_pocket(const std::string& path);
void write_pocket(std::ostream& out, const Pocket& pocket);
void write_pocket_file(const std::string& path, const Pocket& pocket);

class InfeasibleShape : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyPocket : public std::invalid_argument {
 public:
  EmptyPocket() : std::invalid_argument("pocket has no atoms") {}
};

struct LigandShape {
  int heavy_atoms = 20;
  int fragments = 1;

  friend bool operator==(const LigandShape&, const LigandShape&) = default;
};

/// Throws InfeasibleShape for shapes the generator cannot build.
void check_shape(const LigandShape& shape);

/// Chain molecules with exactly `heavy_atoms` heavy atoms and `fragments`
/// rotatable chain bonds, 1-2 hydrogens per heavy atom (capped so the total
/// stays within kMaxLigandAtoms). Each ligand depends only on (shape, seed,
/// index), so generation runs in parallel and is reproducible.
std::vector<Ligand> generate_dataset(int heavy_atoms, int fragments, std::size_t count,
                                     std::uint64_t seed);
/// Each ligand draws its shape uniformly from `shapes`.
std::vector<Ligand> generate_mixture(std::span<const LigandShape> shapes, std::size_t count,
                                     std::uint64_t seed);
Ligand generate_ligand(const LigandShape& shape, std::uint64_t seed, std::size_t index,
                       std::string id);

/// Shell reward: +1 between 3 and 5 A from the nearest atom, falling
/// linearly to -1 at contact and at 8 A, -1 beyond.
double shell_reward(double distance);
inline std::int32_t shell_value(double distance) {
  return static_cast<std::int32_t>(std::lround(10.0 * shell_reward(distance)));
}

/// Grid over the atoms' bounding box plus `padding`, each node holding
/// shell_value(distance to the nearest pocket atom).
Pocket build_pocket(std::vector<Atom> pocket_atoms, double spacing, double padding);

/// Deterministic cavity: atoms on a 9-12 A shell around the origin.
std::vector<Atom> synthetic_pocket_atoms(std::size_t count, std::uint64_t seed);
Pocket synthetic_pocket(std::uint64_t seed);

}  // namespace vscreen
