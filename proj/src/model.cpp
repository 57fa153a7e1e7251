#include "vscreen/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vscreen {

std::size_t Ligand::heavy_atom_count() const {
  return static_cast<std::size_t>(
      std::count_if(atoms.begin(), atoms.end(), [](const Atom& a) { return a.is_heavy; }));
}

void Pocket::check() const {
  if (!(grid_spacing > 0.0) || !std::isfinite(grid_spacing)) {
    throw std::invalid_argument("pocket grid spacing must be positive");
  }
  for (int d : grid_dims) {
    if (d <= 0) throw std::invalid_argument("pocket grid dimensions must be positive");
  }
  if (grid_values.size() != node_count()) {
    throw std::invalid_argument("pocket grid has " + std::to_string(grid_values.size()) +
                                " values, expected " + std::to_string(node_count()));
  }
}

void DockConfig::check() const {
  auto positive = [](auto v, const char* name) {
    if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(restarts_n, "restarts");
  positive(rescore_top_k, "top-k");
  positive(alignment_step_deg, "alignment step");
  positive(torsion_step_deg, "torsion step");
  positive(bump_distance, "bump distance");
  positive(similarity_rmsd, "similarity rmsd");
  positive(rescore_cutoff, "rescore cutoff");
  if (360 % alignment_step_deg != 0 || 360 % torsion_step_deg != 0) {
    throw std::invalid_argument("angle steps must divide 360");
  }
  if (rescore_top_k > restarts_n) {
    throw std::invalid_argument("top-k must not exceed the number of restarts");
  }
}

namespace {

using Kind = ValidationError::Kind;

[[noreturn]] void fail(Kind kind, const Ligand& l, const std::string& msg) {
  throw ValidationError(kind, "ligand '" + l.id + "': " + msg);
}

// Labels the components of the bond graph with the (begin, end) bond removed.
// Returns the number of components.
int label_components(std::size_t n,
                     const std::vector<std::vector<std::uint16_t>>& adjacency,
                     std::uint16_t cut_a, std::uint16_t cut_b, std::vector<int>& label) {
  label.assign(n, -1);
  std::vector<std::uint16_t> stack;
  int components = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] != -1) continue;
    label[start] = components;
    stack.push_back(static_cast<std::uint16_t>(start));
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : adjacency[v]) {
        if ((v == cut_a && w == cut_b) || (v == cut_b && w == cut_a)) continue;
        if (label[w] == -1) {
          label[w] = components;
          stack.push_back(w);
        }
      }
    }
    ++components;
  }
  return components;
}

}  // namespace

Ligand validate_ligand(Ligand ligand) {
  const std::size_t n = ligand.atoms.size();
  if (n > kMaxLigandAtoms) {
    fail(Kind::kTooManyAtoms,
         ligand, std::to_string(n) + " atoms exceeds the limit of " +
                     std::to_string(kMaxLigandAtoms));
  }
  if (n == 0) fail(Kind::kEmptyLigand, ligand, "no atoms");

  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = ligand.atoms[i];
    if (a.element_type >= kElementTypes) {
      fail(Kind::kIndexOutOfRange, ligand,
           "atom " + std::to_string(i) + " has element type " +
               std::to_string(a.element_type));
    }
    if (a.is_heavy == (a.element_type == kHydrogen)) {
      fail(Kind::kInconsistentAtom, ligand,
           "atom " + std::to_string(i) + " heavy flag disagrees with its element");
    }
    if (!std::isfinite(a.position.x) || !std::isfinite(a.position.y) ||
        !std::isfinite(a.position.z)) {
      fail(Kind::kInconsistentAtom, ligand,
           "atom " + std::to_string(i) + " has a non-finite coordinate");
    }
  }

  std::vector<std::vector<std::uint16_t>> adjacency(n);
  for (const auto& [i, j] : ligand.bonds) {
    if (i >= n || j >= n || i == j) {
      fail(Kind::kIndexOutOfRange, ligand,
           "bond (" + std::to_string(i) + ", " + std::to_string(j) + ") is out of range");
    }
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }

  std::vector<int> label;
  for (std::size_t f = 0; f < ligand.fragments.size(); ++f) {
    Fragment& frag = ligand.fragments[f];
    const std::string where = "fragment " + std::to_string(f);
    if (frag.axis_begin >= n || frag.axis_end >= n) {
      fail(Kind::kIndexOutOfRange, ligand, where + " axis is out of range");
    }
    for (auto m : frag.moving_mask) {
      if (m >= n) fail(Kind::kIndexOutOfRange, ligand, where + " mask index out of range");
    }
    std::sort(frag.moving_mask.begin(), frag.moving_mask.end());
    frag.moving_mask.erase(std::unique(frag.moving_mask.begin(), frag.moving_mask.end()),
                           frag.moving_mask.end());

    if (frag.axis_begin == frag.axis_end) {
      fail(Kind::kMalformedFragment, ligand, where + " has a degenerate axis");
    }
    const auto in_mask = [&](std::uint16_t idx) {
      return std::binary_search(frag.moving_mask.begin(), frag.moving_mask.end(), idx);
    };
    if (in_mask(frag.axis_begin) || in_mask(frag.axis_end)) {
      fail(Kind::kMalformedFragment, ligand, where + " mask contains an axis atom");
    }
    if (frag.moving_mask.empty()) {
      fail(Kind::kMalformedFragment, ligand, where + " mask is empty");
    }
    const bool bonded = std::find(adjacency[frag.axis_begin].begin(),
                                  adjacency[frag.axis_begin].end(),
                                  frag.axis_end) != adjacency[frag.axis_begin].end();
    if (!bonded) {
      fail(Kind::kMalformedFragment, ligand, where + " axis is not a bond");
    }
    if (label_components(n, adjacency, frag.axis_begin, frag.axis_end, label) != 2) {
      fail(Kind::kMalformedFragment, ligand,
           where + " axis bond does not split the ligand in two");
    }
    // A ring bond leaves both endpoints in the same component.
    if (label[frag.axis_begin] == label[frag.axis_end]) {
      fail(Kind::kMalformedFragment, ligand, where + " axis bond lies in a ring");
    }

    std::vector<std::uint16_t> side_begin, side_end;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == frag.axis_begin || i == frag.axis_end) continue;
      (label[i] == label[frag.axis_begin] ? side_begin : side_end)
          .push_back(static_cast<std::uint16_t>(i));
    }
    if (frag.moving_mask != side_begin && frag.moving_mask != side_end) {
      fail(Kind::kMalformedFragment, ligand,
           where + " mask is not one side of the rotatable bond");
    }
    frag.fixed_atoms = frag.moving_mask == side_begin ? side_end : side_begin;
  }
  return ligand;
}

}  // namespace vscreen
