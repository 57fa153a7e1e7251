#include "vscreen/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vscreen {

RotMatrix operator*(const RotMatrix& a, const RotMatrix& b) {
  RotMatrix r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.m[i * 3 + j] = a.m[i * 3 + 0] * b.m[0 * 3 + j] + a.m[i * 3 + 1] * b.m[1 * 3 + j] +
                       a.m[i * 3 + 2] * b.m[2 * 3 + j];
    }
  }
  return r;
}

std::pair<double, double> cos_sin_deg(int angle_deg) {
  int a = angle_deg % 360;
  if (a < 0) a += 360;
  switch (a) {
    case 0: return {1.0, 0.0};
    case 90: return {0.0, 1.0};
    case 180: return {-1.0, 0.0};
    case 270: return {0.0, -1.0};
    default: break;
  }
  const double rad = a * (std::numbers::pi / 180.0);
  return {std::cos(rad), std::sin(rad)};
}

RotMatrix rot_x(int angle_deg) {
  const auto [c, s] = cos_sin_deg(angle_deg);
  return {{1, 0, 0, 0, c, -s, 0, s, c}};
}

RotMatrix rot_y(int angle_deg) {
  const auto [c, s] = cos_sin_deg(angle_deg);
  return {{c, 0, s, 0, 1, 0, -s, 0, c}};
}

RotMatrix rot_axis(const Vec3d& u, int angle_deg) {
  const auto [c, s] = cos_sin_deg(angle_deg);
  const double t = 1.0 - c;
  return {{t * u.x * u.x + c, t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
           t * u.x * u.y + s * u.z, t * u.y * u.y + c, t * u.y * u.z - s * u.x,
           t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c}};
}

Vec3d centroid(std::span<const Vec3f> coords) {
  Vec3d c;
  if (coords.empty()) return c;
  for (const auto& p : coords) {
    c.x += p.x;
    c.y += p.y;
    c.z += p.z;
  }
  const double inv = 1.0 / static_cast<double>(coords.size());
  return {c.x * inv, c.y * inv, c.z * inv};
}

void apply_rigid(std::span<const Vec3f> in, const RotMatrix& m, const Vec3d& center,
                 std::span<Vec3f> out) {
  if (m.is_identity()) {
    if (out.data() != in.data()) std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Vec3d d{in[i].x - center.x, in[i].y - center.y, in[i].z - center.z};
    const Vec3d r = m.apply(d);
    out[i] = {static_cast<float>(r.x + center.x), static_cast<float>(r.y + center.y),
              static_cast<float>(r.z + center.z)};
  }
}

std::vector<Vec3f> apply_rigid(std::span<const Vec3f> coords, const RotMatrix& m,
                               const Vec3d& center) {
  std::vector<Vec3f> out(coords.size());
  apply_rigid(coords, m, center, out);
  return out;
}

void apply_torsion(std::span<const Vec3f> in, const Fragment& frag, int angle_deg,
                   std::span<Vec3f> out) {
  const Vec3d a = widen(in[frag.axis_begin]);
  const Vec3d b = widen(in[frag.axis_end]);
  const Vec3d axis{b.x - a.x, b.y - a.y, b.z - a.z};
  const double len = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
  if (len < 1e-9) throw DegenerateAxis();
  if (angle_deg % 360 == 0) {
    for (auto idx : frag.moving_mask) out[idx] = in[idx];
    return;
  }
  const RotMatrix m = rot_axis({axis.x / len, axis.y / len, axis.z / len}, angle_deg);
  for (auto idx : frag.moving_mask) {
    const Vec3d d{in[idx].x - a.x, in[idx].y - a.y, in[idx].z - a.z};
    const Vec3d r = m.apply(d);
    out[idx] = {static_cast<float>(r.x + a.x), static_cast<float>(r.y + a.y),
                static_cast<float>(r.z + a.z)};
  }
}

std::vector<Vec3f> apply_torsion(std::span<const Vec3f> coords, const Fragment& frag,
                                 int angle_deg) {
  std::vector<Vec3f> out(coords.begin(), coords.end());
  apply_torsion(coords, frag, angle_deg, out);
  return out;
}

}  // namespace vscreen
