#include "vscreen/scoring.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vscreen/rng.hpp"
#include "vscreen/textio.hpp"

namespace vscreen {

InteractionTable::InteractionTable(
    const std::array<double, kElementTypes * kElementTypes>& weights, std::vector<Bin> bins)
    : weights_(weights), bins_(std::move(bins)) {
  for (int a = 0; a < kElementTypes; ++a) {
    for (int b = 0; b < a; ++b) {
      if (weight(a, b) != weight(b, a)) {
        throw std::invalid_argument("interaction table is not symmetric at (" +
                                    std::to_string(a) + ", " + std::to_string(b) + ")");
      }
    }
  }
  if (bins_.empty()) throw std::invalid_argument("interaction table has no distance bins");
  double prev = 0.0;
  for (const auto& bin : bins_) {
    if (!(bin.upper > prev)) {
      throw std::invalid_argument("distance bins must be strictly ascending");
    }
    prev = bin.upper;
  }
}

InteractionTable InteractionTable::standard(double cutoff) {
  std::array<double, kElementTypes * kElementTypes> w{};
  SplitMix64 rng(0x5eed7ab1eULL);
  for (int a = 0; a < kElementTypes; ++a) {
    for (int b = 0; b <= a; ++b) {
      // Quantized to 1/1024 so the table survives a text round trip exactly.
      const double v = std::round((rng.uniform() * 2.0 - 1.0) * 1024.0) / 1024.0;
      w[a * kElementTypes + b] = v;
      w[b * kElementTypes + a] = v;
    }
  }
  std::vector<Bin> bins{{cutoff * 0.25, 0.5},
                        {cutoff * 0.5, 1.0},
                        {cutoff * 0.75, 0.625},
                        {cutoff, 0.25}};
  return {w, std::move(bins)};
}

double InteractionTable::bin_multiplier(double distance) const {
  for (const auto& bin : bins_) {
    if (distance < bin.upper) return bin.multiplier;
  }
  return 0.0;
}

InteractionTable parse_interaction_table(std::istream& in) {
  std::array<double, kElementTypes * kElementTypes> w{};
  std::vector<InteractionTable::Bin> bins;
  std::string line;
  int row = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    if (row < kElementTypes) {
      if (tokens.size() != kElementTypes) {
        throw ParseError(line_no, "expected 16 weights per table row");
      }
      for (int c = 0; c < kElementTypes; ++c) {
        w[row * kElementTypes + c] = parse_number<double>(tokens[c], line_no);
      }
      ++row;
    } else {
      if (tokens.size() != 2) throw ParseError(line_no, "expected 'upper multiplier'");
      bins.push_back({parse_number<double>(tokens[0], line_no),
                      parse_number<double>(tokens[1], line_no)});
    }
  }
  if (row != kElementTypes) throw ParseError(line_no, "interaction table is truncated");
  return {w, std::move(bins)};
}

InteractionTable load_interaction_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open interaction table '" + path + "'");
  return parse_interaction_table(in);
}

void write_interaction_table(std::ostream& out, const InteractionTable& table) {
  for (int a = 0; a < kElementTypes; ++a) {
    for (int b = 0; b < kElementTypes; ++b) {
      if (b) out << ' ';
      out << format_number(table.weight(a, b));
    }
    out << '\n';
  }
  for (const auto& bin : table.bins()) {
    out << format_number(bin.upper) << ' ' << format_number(bin.multiplier) << '\n';
  }
}

std::int64_t grid_score(std::span<const Vec3f> coords, const Pocket& pocket) {
  const double inv = 1.0 / pocket.grid_spacing;
  const auto& o = pocket.grid_origin;
  const auto& dims = pocket.grid_dims;
  std::int64_t total = 0;
  for (const auto& p : coords) {
    const long ix = std::lround((p.x - o.x) * inv);
    const long iy = std::lround((p.y - o.y) * inv);
    const long iz = std::lround((p.z - o.z) * inv);
    if (ix < 0 || iy < 0 || iz < 0 || ix >= dims[0] || iy >= dims[1] || iz >= dims[2]) {
      total += kOutOfGridPenalty;
    } else {
      total += pocket.value_at(static_cast<int>(ix), static_cast<int>(iy),
                               static_cast<int>(iz));
    }
  }
  return total;
}

bool bump_check(std::span<const Vec3f> coords, const Fragment& frag, double bump_distance,
                bool early_exit, Counters& counters) {
  const double limit = bump_distance * bump_distance;
  bool bumped = false;
  for (auto m : frag.moving_mask) {
    const Vec3f pm = coords[m];
    for (auto f : frag.fixed_atoms) {
      ++counters.bump_checks;
      if (distance_squared(pm, coords[f]) < limit) {
        if (early_exit) {
          ++counters.bump_early_exits;
          return true;
        }
        bumped = true;
      }
    }
  }
  return bumped;
}

double rescore(std::span<const Vec3f> coords, const Ligand& ligand, const Pocket& pocket,
               const InteractionTable& table, double cutoff) {
  const double limit = cutoff * cutoff;
  double total = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const int ti = ligand.atoms[i].element_type;
    for (const auto& pa : pocket.pocket_atoms) {
      const double d2 = distance_squared(coords[i], pa.position);
      if (d2 >= limit) continue;
      total += table.weight(ti, pa.element_type) * table.bin_multiplier(std::sqrt(d2));
    }
  }
  return total;
}

}  // namespace vscreen
