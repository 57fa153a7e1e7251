#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "vscreen/io.hpp"

namespace vscreen {

namespace {

std::uint16_t parse_index(std::string_view token, int line) {
  const auto v = parse_number<long>(token, line);
  if (v < 0 || v > 65535) throw ParseError(line, "index out of range");
  return static_cast<std::uint16_t>(v);
}

void expect_tokens(const std::vector<std::string_view>& tokens, std::size_t n, int line,
                   const char* record) {
  if (tokens.size() != n) {
    throw ParseError(line, std::string(record) + " expects " + std::to_string(n - 1) +
                               " fields");
  }
}

}  // namespace

LigandFile parse_ligands(std::istream& in, bool skip_invalid) {
  LigandFile file;
  std::optional<Ligand> current;
  std::size_t record_bytes = 0;
  std::string line;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    const std::string_view tag = tokens.front();

    if (tag == "MOL") {
      if (current) throw ParseError(line_no, "MOL before END of '" + current->id + "'");
      expect_tokens(tokens, 2, line_no, "MOL");
      current.emplace();
      current->id = std::string(tokens[1]);
      record_bytes = line.size() + 1;
      continue;
    }
    if (!current) throw ParseError(line_no, std::string(tag) + " outside a MOL block");
    record_bytes += line.size() + 1;
    if (record_bytes > kMaxRecordBytes) {
      throw ParseError(line_no, "molecule '" + current->id + "' exceeds " +
                                    std::to_string(kMaxRecordBytes) + " bytes");
    }

    if (tag == "ATOM") {
      expect_tokens(tokens, 7, line_no, "ATOM");
      if (parse_number<long>(tokens[1], line_no) !=
          static_cast<long>(current->atoms.size())) {
        throw ParseError(line_no, "ATOM indices must be consecutive from 0");
      }
      Atom a;
      const auto type = parse_number<int>(tokens[2], line_no);
      if (type < 0 || type > 255) throw ParseError(line_no, "bad element type");
      a.element_type = static_cast<std::uint8_t>(type);
      a.position = {parse_number<float>(tokens[3], line_no),
                    parse_number<float>(tokens[4], line_no),
                    parse_number<float>(tokens[5], line_no)};
      if (tokens[6] == "H") {
        a.is_heavy = false;
      } else if (tokens[6] == "heavy") {
        a.is_heavy = true;
      } else {
        throw ParseError(line_no, "atom class must be H or heavy");
      }
      current->atoms.push_back(a);
    } else if (tag == "BOND") {
      expect_tokens(tokens, 3, line_no, "BOND");
      current->bonds.emplace_back(parse_index(tokens[1], line_no),
                                  parse_index(tokens[2], line_no));
    } else if (tag == "FRAG") {
      if (tokens.size() < 3) throw ParseError(line_no, "FRAG expects an axis");
      Fragment f;
      f.axis_begin = parse_index(tokens[1], line_no);
      f.axis_end = parse_index(tokens[2], line_no);
      for (std::size_t i = 3; i < tokens.size(); ++i) {
        f.moving_mask.push_back(parse_index(tokens[i], line_no));
      }
      current->fragments.push_back(std::move(f));
    } else if (tag == "END") {
      expect_tokens(tokens, 1, line_no, "END");
      std::string id = current->id;
      try {
        file.ligands.push_back(validate_ligand(std::move(*current)));
      } catch (const ValidationError& e) {
        if (!skip_invalid) {
          throw ValidationError(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
        }
        file.skipped.push_back({line_no, std::move(id), e.what()});
      }
      current.reset();
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tag) + "'");
    }
  }
  if (current) throw ParseError(line_no, "missing END for '" + current->id + "'");
  return file;
}

LigandFile parse_ligand_file(const std::string& path, bool skip_invalid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ligand file '" + path + "'");
  return parse_ligands(in, skip_invalid);
}

void write_ligands(std::ostream& out, std::span<const Ligand> ligands) {
  for (const auto& l : ligands) {
    out << "MOL " << l.id << '\n';
    for (std::size_t i = 0; i < l.atoms.size(); ++i) {
      const Atom& a = l.atoms[i];
      out << "ATOM " << i << ' ' << static_cast<int>(a.element_type) << ' '
          << format_number(a.position.x) << ' ' << format_number(a.position.y) << ' '
          << format_number(a.position.z) << ' ' << (a.is_heavy ? "heavy" : "H") << '\n';
    }
    for (const auto& [i, j] : l.bonds) out << "BOND " << i << ' ' << j << '\n';
    for (const auto& f : l.fragments) {
      out << "FRAG " << f.axis_begin << ' ' << f.axis_end;
      for (auto m : f.moving_mask) out << ' ' << m;
      out << '\n';
    }
    out << "END\n";
  }
}

void write_ligand_file(const std::string& path, std::span<const Ligand> ligands) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ligand file '" + path + "'");
  write_ligands(out, ligands);
}

Pocket parse_pocket(std::istream& in) {
  Pocket p;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::size_t expected = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    if (!have_header) {
      if (tokens.front() != "GRID") throw ParseError(line_no, "pocket must start with GRID");
      expect_tokens(tokens, 8, line_no, "GRID");
      p.grid_origin = {parse_number<double>(tokens[1], line_no),
                       parse_number<double>(tokens[2], line_no),
                       parse_number<double>(tokens[3], line_no)};
      p.grid_spacing = parse_number<double>(tokens[4], line_no);
      for (int d = 0; d < 3; ++d) {
        p.grid_dims[d] = parse_number<int>(tokens[5 + d], line_no);
        if (p.grid_dims[d] <= 0) throw ParseError(line_no, "grid dimensions must be positive");
      }
      if (!(p.grid_spacing > 0.0)) throw ParseError(line_no, "grid spacing must be positive");
      expected = p.node_count();
      p.grid_values.reserve(expected);
      have_header = true;
      continue;
    }
    if (p.grid_values.size() < expected) {
      for (auto t : tokens) {
        if (p.grid_values.size() == expected) throw ParseError(line_no, "too many grid values");
        p.grid_values.push_back(parse_number<std::int32_t>(t, line_no));
      }
      continue;
    }
    if (tokens.front() != "PATOM") {
      throw ParseError(line_no, "unknown record '" + std::string(tokens.front()) + "'");
    }
    expect_tokens(tokens, 5, line_no, "PATOM");
    Atom a;
    const auto type = parse_number<int>(tokens[1], line_no);
    if (type < 0 || type >= kElementTypes) throw ParseError(line_no, "bad element type");
    a.element_type = static_cast<std::uint8_t>(type);
    a.is_heavy = type != kHydrogen;
    a.position = {parse_number<float>(tokens[2], line_no),
                  parse_number<float>(tokens[3], line_no),
                  parse_number<float>(tokens[4], line_no)};
    p.pocket_atoms.push_back(a);
  }
  if (!have_header) throw ParseError(line_no, "missing GRID header");
  if (p.grid_values.size() != expected) throw ParseError(line_no, "grid values are truncated");
  return p;
}

Pocket load_pocket(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pocket file '" + path + "'");
  return parse_pocket(in);
}

void write_pocket(std::ostream& out, const Pocket& p) {
  out << "GRID " << format_number(p.grid_origin.x) << ' ' << format_number(p.grid_origin.y)
      << ' ' << format_number(p.grid_origin.z) << ' ' << format_number(p.grid_spacing) << ' '
      << p.grid_dims[0] << ' ' << p.grid_dims[1] << ' ' << p.grid_dims[2] << '\n';
  const auto nx = static_cast<std::size_t>(p.grid_dims[0]);
  for (std::size_t i = 0; i < p.grid_values.size(); ++i) {
    out << p.grid_values[i] << ((i + 1) % nx == 0 ? '\n' : ' ');
  }
  for (const auto& a : p.pocket_atoms) {
    out << "PATOM " << static_cast<int>(a.element_type) << ' ' << format_number(a.position.x)
        << ' ' << format_number(a.position.y) << ' ' << format_number(a.position.z) << '\n';
  }
}

void write_pocket_file(const std::string& path, const Pocket& pocket) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write pocket file '" + path + "'");
  write_pocket(out, pocket);
}

}  // namespace vscreen
