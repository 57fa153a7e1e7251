#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "vscreen/io.hpp"
#include "vscreen/rng.hpp"

namespace vscreen {

namespace {

constexpr double kBondStep = 1.5;
constexpr double kHydrogenBond = 1.0;
constexpr double kHeavyClearance = 1.8;
constexpr double kHydrogenClearance = 1.2;
constexpr int kPlacementTries = 64;
constexpr int kMaxDeadEnds = 10000;

Vec3d random_unit(SplitMix64& rng) {
  const double z = rng.uniform() * 2.0 - 1.0;
  const double phi = rng.uniform() * 2.0 * std::numbers::pi;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

// Up to kPlacementTries random spots `step` away from `anchor`; the first one
// that clears every placed atom except `anchor` by `clearance` wins. `last`
// receives the final candidate either way.
std::optional<Vec3f> try_place(SplitMix64& rng, const std::vector<Vec3f>& placed,
                               std::size_t anchor, double step, double clearance,
                               Vec3f& last) {
  const Vec3f a = placed[anchor];
  for (int attempt = 0; attempt < kPlacementTries; ++attempt) {
    const Vec3d u = random_unit(rng);
    last = {static_cast<float>(a.x + step * u.x), static_cast<float>(a.y + step * u.y),
            static_cast<float>(a.z + step * u.z)};
    bool clear = true;
    for (std::size_t i = 0; i < placed.size() && clear; ++i) {
      if (i != anchor && distance_squared(last, placed[i]) < clearance * clearance) {
        clear = false;
      }
    }
    if (clear) return last;
  }
  return std::nullopt;
}

// Hydrogens take the last try when nothing clears.
Vec3f place_near(SplitMix64& rng, const std::vector<Vec3f>& placed, std::size_t anchor,
                 double step, double clearance) {
  Vec3f last{};
  return try_place(rng, placed, anchor, step, clearance, last).value_or(last);
}

// Random self-avoiding walk; a dead end backs up one to four atoms.
std::vector<Vec3f> heavy_chain(SplitMix64& rng, std::size_t n) {
  std::vector<Vec3f> chain{{0.0F, 0.0F, 0.0F}};
  chain.reserve(n);
  int dead_ends = 0;
  Vec3f last{};
  while (chain.size() < n) {
    if (auto next = try_place(rng, chain, chain.size() - 1, kBondStep, kHeavyClearance, last)) {
      chain.push_back(*next);
      continue;
    }
    if (++dead_ends > kMaxDeadEnds) throw std::logic_error("heavy chain walk is stuck");
    const auto back = std::min<std::size_t>(chain.size() - 1, 1 + static_cast<std::size_t>(dead_ends % 4));
    chain.resize(chain.size() - back);
  }
  return chain;
}

std::uint8_t heavy_element(SplitMix64& rng) {
  const double u = rng.uniform();
  if (u < 0.70) return static_cast<std::uint8_t>(Element::C);
  if (u < 0.82) return static_cast<std::uint8_t>(Element::N);
  if (u < 0.94) return static_cast<std::uint8_t>(Element::O);
  return static_cast<std::uint8_t>(Element::S);
}

}  // namespace

void check_shape(const LigandShape& shape) {
  if (shape.heavy_atoms < 1 || shape.heavy_atoms > static_cast<int>(kMaxLigandAtoms)) {
    throw InfeasibleShape("heavy atom count " + std::to_string(shape.heavy_atoms) +
                          " is outside 1.." + std::to_string(kMaxLigandAtoms));
  }
  if (shape.fragments < 0 ||
      (shape.fragments > 0 && shape.fragments >= shape.heavy_atoms - 1)) {
    throw InfeasibleShape(std::to_string(shape.fragments) + " fragments do not fit a " +
                          std::to_string(shape.heavy_atoms) + "-heavy-atom chain");
  }
}

Ligand generate_ligand(const LigandShape& shape, std::uint64_t seed, std::size_t index,
                       std::string id) {
  check_shape(shape);
  SplitMix64 rng(combine_seed(seed, index));
  const auto heavy = static_cast<std::size_t>(shape.heavy_atoms);

  // Hydrogens per heavy atom, trimmed from the tail to respect the atom cap.
  std::vector<int> h_per_heavy(heavy);
  std::size_t total = heavy;
  for (auto& h : h_per_heavy) {
    h = static_cast<int>(rng.between(1, 2));
    total += static_cast<std::size_t>(h);
  }
  for (std::size_t i = heavy; total > kMaxLigandAtoms && i-- > 0;) {
    while (h_per_heavy[i] > 0 && total > kMaxLigandAtoms) {
      --h_per_heavy[i];
      --total;
    }
  }

  Ligand lig;
  lig.id = std::move(id);
  std::vector<Vec3f> placed = heavy_chain(rng, heavy);
  placed.reserve(total);
  for (std::size_t i = 1; i < heavy; ++i) {
    lig.bonds.emplace_back(static_cast<std::uint16_t>(i - 1), static_cast<std::uint16_t>(i));
  }
  for (std::size_t i = 0; i < heavy; ++i) {
    lig.atoms.push_back({placed[i], heavy_element(rng), true});
  }
  std::vector<std::uint16_t> parent_of;  // hydrogen index - heavy -> parent
  for (std::size_t i = 0; i < heavy; ++i) {
    for (int k = 0; k < h_per_heavy[i]; ++k) {
      const auto idx = static_cast<std::uint16_t>(placed.size());
      placed.push_back(place_near(rng, placed, i, kHydrogenBond, kHydrogenClearance));
      lig.atoms.push_back({placed.back(), static_cast<std::uint8_t>(Element::H), false});
      lig.bonds.emplace_back(static_cast<std::uint16_t>(i), idx);
      parent_of.push_back(static_cast<std::uint16_t>(i));
    }
  }

  // Rotatable bonds: a random subset of the internal heavy chain bonds, in
  // chain order. The terminal bond is left out so every moving side keeps a
  // heavy atom even after hydrogens were trimmed.
  std::vector<std::size_t> chain_bonds(heavy > 1 ? heavy - 2 : 0);
  for (std::size_t b = 0; b < chain_bonds.size(); ++b) chain_bonds[b] = b;
  const auto frags = static_cast<std::size_t>(shape.fragments);
  for (std::size_t k = 0; k < frags; ++k) {
    const auto j = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(k), static_cast<std::int64_t>(chain_bonds.size() - 1)));
    std::swap(chain_bonds[k], chain_bonds[j]);
  }
  std::sort(chain_bonds.begin(), chain_bonds.begin() + static_cast<std::ptrdiff_t>(frags));
  for (std::size_t k = 0; k < frags; ++k) {
    const std::size_t b = chain_bonds[k];  // bond (b, b + 1); the b + 1 side moves
    Fragment f;
    f.axis_begin = static_cast<std::uint16_t>(b);
    f.axis_end = static_cast<std::uint16_t>(b + 1);
    for (std::size_t i = b + 2; i < heavy; ++i) f.moving_mask.push_back(static_cast<std::uint16_t>(i));
    for (std::size_t h = 0; h < parent_of.size(); ++h) {
      if (parent_of[h] > b) f.moving_mask.push_back(static_cast<std::uint16_t>(heavy + h));
    }
    lig.fragments.push_back(std::move(f));
  }
  return validate_ligand(std::move(lig));
}

std::vector<Ligand> generate_dataset(int heavy_atoms, int fragments, std::size_t count,
                                     std::uint64_t seed) {
  const LigandShape shape{heavy_atoms, fragments};
  check_shape(shape);
  std::vector<Ligand> out(count);
  const auto n = static_cast<std::int64_t>(count);
  const std::string prefix = "s" + std::to_string(seed) + "-a" + std::to_string(heavy_atoms) +
                             "f" + std::to_string(fragments) + "-";
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = generate_ligand(shape, seed, idx, prefix + std::to_string(idx));
  }
  return out;
}

std::vector<Ligand> generate_mixture(std::span<const LigandShape> shapes, std::size_t count,
                                     std::uint64_t seed) {
  if (shapes.empty()) throw InfeasibleShape("mixture needs at least one shape");
  for (const auto& s : shapes) check_shape(s);
  std::vector<Ligand> out(count);
  const auto n = static_cast<std::int64_t>(count);
  const std::string prefix = "s" + std::to_string(seed) + "-mix-";
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    SplitMix64 pick(combine_seed(~seed, idx));
    const auto& shape = shapes[static_cast<std::size_t>(
        pick.between(0, static_cast<std::int64_t>(shapes.size()) - 1))];
    out[idx] = generate_ligand(shape, seed, idx, prefix + std::to_string(idx));
  }
  return out;
}

double shell_reward(double d) {
  if (d < 3.0) return -1.0 + 2.0 * d / 3.0;
  if (d <= 5.0) return 1.0;
  if (d < 8.0) return 1.0 - 2.0 * (d - 5.0) / 3.0;
  return -1.0;
}

Pocket build_pocket(std::vector<Atom> pocket_atoms, double spacing, double padding) {
  if (pocket_atoms.empty()) throw EmptyPocket();
  if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (!(padding >= 0.0)) throw std::invalid_argument("grid padding must be non-negative");

  Vec3d lo = widen(pocket_atoms.front().position);
  Vec3d hi = lo;
  for (const auto& a : pocket_atoms) {
    const Vec3d p = widen(a.position);
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  Pocket pocket;
  pocket.grid_origin = {lo.x - padding, lo.y - padding, lo.z - padding};
  pocket.grid_spacing = spacing;
  const double span[3] = {hi.x - lo.x + 2 * padding, hi.y - lo.y + 2 * padding,
                          hi.z - lo.z + 2 * padding};
  for (int d = 0; d < 3; ++d) {
    pocket.grid_dims[d] = static_cast<int>(std::floor(span[d] / spacing)) + 1;
  }
  pocket.grid_values.assign(pocket.node_count(), 0);

  // Binning with cell edge = the 8 A reward horizon: any atom that can beat the
  // -1 floor lies in the node's cell or one of its 26 neighbours.
  constexpr double kHorizon = 8.0;
  int cells[3];
  for (int d = 0; d < 3; ++d) {
    cells[d] = std::max(1, static_cast<int>(std::ceil(span[d] / kHorizon)));
  }
  auto cell_of = [&](double v, double origin, int d) {
    return std::clamp(static_cast<int>(std::floor((v - origin) / kHorizon)), 0, cells[d] - 1);
  };
  const auto& o = pocket.grid_origin;
  std::vector<std::vector<Vec3f>> bins(static_cast<std::size_t>(cells[0]) * cells[1] * cells[2]);
  auto bin_index = [&](int cx, int cy, int cz) {
    return static_cast<std::size_t>(cx) +
           static_cast<std::size_t>(cells[0]) * (static_cast<std::size_t>(cy) +
                                                 static_cast<std::size_t>(cells[1]) * cz);
  };
  for (const auto& a : pocket_atoms) {
    bins[bin_index(cell_of(a.position.x, o.x, 0), cell_of(a.position.y, o.y, 1),
                   cell_of(a.position.z, o.z, 2))]
        .push_back(a.position);
  }

  const int nx = pocket.grid_dims[0];
  const int ny = pocket.grid_dims[1];
  const int nz = pocket.grid_dims[2];
#pragma omp parallel for schedule(static)
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        const Vec3d node{o.x + x * spacing, o.y + y * spacing, o.z + z * spacing};
        const int cx = cell_of(node.x, o.x, 0);
        const int cy = cell_of(node.y, o.y, 1);
        const int cz = cell_of(node.z, o.z, 2);
        double best = kHorizon * kHorizon;
        for (int bz = std::max(0, cz - 1); bz <= std::min(cells[2] - 1, cz + 1); ++bz) {
          for (int by = std::max(0, cy - 1); by <= std::min(cells[1] - 1, cy + 1); ++by) {
            for (int bx = std::max(0, cx - 1); bx <= std::min(cells[0] - 1, cx + 1); ++bx) {
              for (const auto& p : bins[bin_index(bx, by, bz)]) {
                const double dx = node.x - p.x;
                const double dy = node.y - p.y;
                const double dz = node.z - p.z;
                best = std::min(best, dx * dx + dy * dy + dz * dz);
              }
            }
          }
        }
        pocket.grid_values[static_cast<std::size_t>(x) +
                           static_cast<std::size_t>(nx) *
                               (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * z)] =
            shell_value(std::sqrt(best));
      }
    }
  }
  pocket.pocket_atoms = std::move(pocket_atoms);
  return pocket;
}

std::vector<Atom> synthetic_pocket_atoms(std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(combine_seed(seed, 0x9f0c4e7ULL));
  std::vector<Atom> atoms;
  atoms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3d u = random_unit(rng);
    const double r = 9.0 + 3.0 * rng.uniform();
    Atom a;
    a.position = {static_cast<float>(r * u.x), static_cast<float>(r * u.y),
                  static_cast<float>(r * u.z)};
    a.element_type = static_cast<std::uint8_t>(rng.between(1, kElementTypes - 1));
    a.is_heavy = true;
    atoms.push_back(a);
  }
  return atoms;
}

Pocket synthetic_pocket(std::uint64_t seed) {
  return build_pocket(synthetic_pocket_atoms(160, seed), 1.0, 4.0);
}

}  // namespace vscreen
