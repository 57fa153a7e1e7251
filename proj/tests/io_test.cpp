#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "vscreen/bucketizer.hpp"
#include "vscreen/io.hpp"
#include "vscreen/rng.hpp"

namespace vscreen {
namespace {

std::string serialize(std::span<const Ligand> ligands) {
  std::ostringstream s;
  write_ligands(s, ligands);
  return s.str();
}

LigandFile parse(const std::string& text, bool skip = false) {
  std::istringstream in(text);
  return parse_ligands(in, skip);
}

int parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ParseLigands, EmptyInput) { EXPECT_TRUE(parse("").ligands.empty()); }

TEST(ParseLigands, TwoAtomMoleculeRoundTrips) {
  Ligand l;
  l.id = "pair";
  l.atoms = {testing::heavy_atom(0.1F, -2.5F, 3.3333333F, 6), testing::hydrogen(1e-7F, 0, -0.0F)};
  l.bonds = {{0, 1}};
  const std::string text = serialize(std::span(&l, 1));
  const auto back = parse(text);
  ASSERT_EQ(back.ligands.size(), 1U);
  EXPECT_EQ(back.ligands[0], l);
  EXPECT_EQ(std::memcmp(&back.ligands[0].atoms[0].position, &l.atoms[0].position, sizeof(Vec3f)), 0);
  EXPECT_EQ(serialize(back.ligands), text);
}

TEST(ParseLigands, GeneratedDatasetRoundTripsByteForByte) {
  const auto ligands = generate_mixture(std::vector<LigandShape>{{20, 1}, {50, 20}, {9, 3}}, 60, 5);
  const std::string text = serialize(ligands);
  const auto back = parse(text);
  EXPECT_EQ(back.ligands, ligands);
  EXPECT_EQ(serialize(back.ligands), text);
}

TEST(ParseLigands, FragMaskWithAxisIsValidationError) {
  const std::string text =
      "MOL good\nATOM 0 1 0 0 0 heavy\nEND\n"
      "MOL bad\nATOM 0 1 0 0 0 heavy\nATOM 1 1 1.5 0 0 heavy\nATOM 2 1 3 0 0 heavy\n"
      "BOND 0 1\nBOND 1 2\nFRAG 0 1 1 2\nEND\n";
  try {
    parse(text);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), ValidationError::Kind::kMalformedFragment);
    EXPECT_NE(std::string(e.what()).find("line 11"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
  const auto skipped = parse(text, true);
  ASSERT_EQ(skipped.ligands.size(), 1U);
  EXPECT_EQ(skipped.ligands[0].id, "good");
  ASSERT_EQ(skipped.skipped.size(), 1U);
  EXPECT_EQ(skipped.skipped[0].ligand_id, "bad");
  EXPECT_EQ(skipped.skipped[0].line, 11);
}

TEST(ParseLigands, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("MOL a\nATOM 0 1 0 0 zero heavy\nEND\n"), 2);
  EXPECT_EQ(parse_error_line("MOL a\nATOM 1 1 0 0 0 heavy\nEND\n"), 2);
  EXPECT_EQ(parse_error_line("MOL a\nATOM 0 1 0 0 0 heavy\n"), 2);
  EXPECT_EQ(parse_error_line("ATOM 0 1 0 0 0 heavy\n"), 1);
  EXPECT_EQ(parse_error_line("MOL a\nATOM 0 1 0 0 0 carbon\nEND\n"), 2);
  EXPECT_EQ(parse_error_line("MOL a\nATOM 0 1 0 0 0 heavy\nWAT\nEND\n"), 3);
  EXPECT_EQ(parse_error_line("MOL a\nMOL b\n"), 2);
}

TEST(ParseLigands, OversizedRecordIsRejected) {
  std::string text = "MOL big\n";
  for (int i = 0; i < 160; ++i) {
    text += "ATOM " + std::to_string(i) + " 1 0.000000000000000000000000000000001 " +
            std::string(120, '0') + "1 0 heavy\n";
  }
  text += "END\n";
  EXPECT_GT(text.size(), kMaxRecordBytes);
  EXPECT_THROW(parse(text), ParseError);
}

TEST(ParseLigands, TooManyAtomsIsValidationError) {
  std::string text = "MOL big\n";
  for (int i = 0; i < 161; ++i) text += "ATOM " + std::to_string(i) + " 1 0 0 0 heavy\n";
  text += "END\n";
  try {
    parse(text);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), ValidationError::Kind::kTooManyAtoms);
  }
}

TEST(PocketFormat, RoundTrip) {
  const Pocket p = synthetic_pocket(4);
  std::ostringstream out;
  write_pocket(out, p);
  std::istringstream in(out.str());
  const Pocket back = parse_pocket(in);
  EXPECT_EQ(back.grid_origin, p.grid_origin);
  EXPECT_EQ(back.grid_spacing, p.grid_spacing);
  EXPECT_EQ(back.grid_dims, p.grid_dims);
  EXPECT_EQ(back.grid_values, p.grid_values);
  EXPECT_EQ(back.pocket_atoms, p.pocket_atoms);
  std::ostringstream again;
  write_pocket(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(PocketFormat, Errors) {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_pocket(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("PATOM 1 0 0 0\n"), 1);
  EXPECT_EQ(line_of("GRID 0 0 0 1 2 1 1\n5\n"), 2);
  EXPECT_EQ(line_of("GRID 0 0 0 1 1 1 1\n5 6\n"), 2);
  EXPECT_EQ(line_of("GRID 0 0 0 0 1 1 1\n5\n"), 1);
  EXPECT_EQ(line_of("GRID 0 0 0 1 1 1 1\n5\nPATOM 99 0 0 0\n"), 3);
}

TEST(GenerateDataset, HeatmapExtremeShapes) {
  const auto small = generate_dataset(20, 1, 2000, 1);
  ASSERT_EQ(small.size(), 2000U);
  for (const auto& l : small) {
    ASSERT_EQ(l.heavy_atom_count(), 20U);
    ASSERT_EQ(l.fragment_count(), 1U);
    ASSERT_NO_THROW(validate_ligand(l));
  }
  const auto large = generate_dataset(50, 20, 10, 1);
  ASSERT_EQ(large.size(), 10U);
  for (const auto& l : large) {
    EXPECT_EQ(l.heavy_atom_count(), 50U);
    EXPECT_EQ(l.fragment_count(), 20U);
    EXPECT_LE(l.atom_count(), kMaxLigandAtoms);
    EXPECT_NO_THROW(validate_ligand(l));
  }
}

TEST(GenerateDataset, HydrogensPerHeavyAtomAndCap) {
  for (const auto& l : generate_dataset(30, 4, 200, 2)) {
    const std::size_t h = l.atom_count() - l.heavy_atom_count();
    EXPECT_GE(h, 30U);
    EXPECT_LE(h, 60U);
  }
  for (const auto& l : generate_dataset(100, 10, 20, 2)) {
    EXPECT_LE(l.atom_count(), kMaxLigandAtoms);
    EXPECT_EQ(l.heavy_atom_count(), 100U);
  }
}

TEST(GenerateDatasetProperty, HeavyChainIsSelfAvoiding) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 400; ++trial) {
    const int heavy = static_cast<int>(rng.between(3, 160));
    const int frags = static_cast<int>(rng.between(0, std::min(heavy - 2, 20)));
    const Ligand l = generate_ligand({heavy, frags}, rng.next(), 0, "c");
    for (const auto& [i, j] : l.bonds) {
      if (!l.atoms[i].is_heavy || !l.atoms[j].is_heavy) continue;
      ASSERT_NEAR(std::sqrt(distance_squared(l.atoms[i].position, l.atoms[j].position)), 1.5,
                  1e-5);
    }
    for (std::size_t i = 0; i < l.heavy_atom_count(); ++i) {
      for (std::size_t j = i + 2; j < l.heavy_atom_count(); ++j) {
        ASSERT_GT(std::sqrt(distance_squared(l.atoms[i].position, l.atoms[j].position)),
                  1.8 - 1e-4)
            << "trial " << trial << " atoms " << i << "," << j;
      }
    }
  }
}

TEST(GenerateDataset, SameSeedSameBytes) {
  EXPECT_EQ(serialize(generate_dataset(30, 8, 100, 9)), serialize(generate_dataset(30, 8, 100, 9)));
  EXPECT_NE(serialize(generate_dataset(30, 8, 100, 9)), serialize(generate_dataset(30, 8, 100, 10)));
}

TEST(GenerateDataset, InfeasibleShapes) {
  EXPECT_THROW(generate_dataset(10, 9, 1, 1), InfeasibleShape);
  EXPECT_THROW(generate_dataset(10, 12, 1, 1), InfeasibleShape);
  EXPECT_THROW(generate_dataset(161, 0, 1, 1), InfeasibleShape);
  EXPECT_THROW(generate_dataset(0, 0, 1, 1), InfeasibleShape);
  EXPECT_NO_THROW(generate_dataset(10, 8, 1, 1));
  EXPECT_NO_THROW(generate_dataset(1, 0, 1, 1));
}

TEST(GenerateDatasetProperty, BoundaryShapesSpreadOverRanges) {
  // 28 heavy atoms plus 28..56 hydrogens straddles the 64-atom boundary.
  std::set<int> ranges;
  for (const auto& l : generate_dataset(28, 2, 300, 4)) ranges.insert(classify(l).atom_range_index);
  EXPECT_GE(ranges.size(), 2U);
}

TEST(BuildPocket, ShellValues) {
  EXPECT_EQ(shell_value(4.0), 10);
  EXPECT_EQ(shell_value(0.0), -10);
  EXPECT_EQ(shell_value(3.0), 10);
  EXPECT_EQ(shell_value(5.0), 10);
  EXPECT_EQ(shell_value(8.0), -10);
  EXPECT_EQ(shell_value(20.0), -10);
  EXPECT_EQ(shell_value(1.5), 0);
  EXPECT_EQ(shell_value(6.5), 0);
}

TEST(BuildPocket, SingleAtomNodeAtFourAngstrom) {
  const Pocket p = build_pocket({testing::heavy_atom(0, 0, 0)}, 1.0, 4.0);
  EXPECT_EQ(p.grid_dims, (std::array<int, 3>{9, 9, 9}));
  EXPECT_EQ(p.value_at(4, 4, 4), -10);
  EXPECT_EQ(p.value_at(8, 4, 4), 10);
  EXPECT_EQ(p.value_at(0, 4, 4), 10);
}

TEST(BuildPocket, EmptyPocketThrows) {
  EXPECT_THROW(build_pocket({}, 1.0, 4.0), EmptyPocket);
}

TEST(BuildPocket, MatchesPerNodeNearestAtomOracle) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Atom> atoms;
    const auto n = rng.between(1, 60);
    for (const auto& c : testing::random_cloud(rng, static_cast<std::size_t>(n), 25.0)) {
      atoms.push_back(testing::heavy_atom(c.x, c.y, c.z));
    }
    const double spacing = 0.75 + rng.uniform();
    const Pocket p = build_pocket(atoms, spacing, 3.0);
    for (int z = 0; z < p.grid_dims[2]; ++z) {
      for (int y = 0; y < p.grid_dims[1]; ++y) {
        for (int x = 0; x < p.grid_dims[0]; ++x) {
          double best = 1e300;
          for (const auto& a : atoms) {
            const double dx = p.grid_origin.x + x * spacing - a.position.x;
            const double dy = p.grid_origin.y + y * spacing - a.position.y;
            const double dz = p.grid_origin.z + z * spacing - a.position.z;
            best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
          }
          const double g = best < 3 ? -1 + 2 * best / 3
                         : best <= 5 ? 1
                         : best < 8 ? 1 - 2 * (best - 5) / 3
                                    : -1;
          ASSERT_EQ(p.value_at(x, y, z), static_cast<std::int32_t>(std::lround(10 * g)))
              << x << "," << y << "," << z;
        }
      }
    }
  }
}

TEST(SyntheticPocket, Deterministic) {
  const Pocket a = synthetic_pocket(3);
  const Pocket b = synthetic_pocket(3);
  EXPECT_EQ(a.grid_values, b.grid_values);
  EXPECT_EQ(a.pocket_atoms.size(), 160U);
  EXPECT_NO_THROW(a.check());
}

}  // namespace
}  // namespace vscreen
