// Rigid-body and torsional geometry kernels.
//
// Angles are integer degrees. Trigonometry runs in double precision and the
// transformed coordinates are rounded to single precision, so every caller
// that feeds the same inputs through these functions gets the same bits.

#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "vscreen/model.hpp"

namespace vscreen {

struct RotMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major

  static RotMatrix identity() { return {}; }
  bool is_identity() const { return *this == identity(); }

  Vec3d apply(const Vec3d& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  friend RotMatrix operator*(const RotMatrix& a, const RotMatrix& b);
  friend bool operator==(const RotMatrix&, const RotMatrix&) = default;
};

class DegenerateAxis : public std::runtime_error {
 public:
  DegenerateAxis() : std::runtime_error("torsion axis atoms coincide") {}
};

/// cos/sin of an integer angle; exact at multiples of 90 degrees.
std::pair<double, double> cos_sin_deg(int angle_deg);

RotMatrix rot_x(int angle_deg);
RotMatrix rot_y(int angle_deg);
/// Rotation about an arbitrary unit axis.
RotMatrix rot_axis(const Vec3d& unit_axis, int angle_deg);

/// The alignment sweep applies the x rotation first, then the y rotation.
inline RotMatrix alignment_rotation(int angle_x, int angle_y) {
  return rot_y(angle_y) * rot_x(angle_x);
}

Vec3d centroid(std::span<const Vec3f> coords);

/// out[i] = m * (in[i] - center) + center. `out` may alias `in`.
void apply_rigid(std::span<const Vec3f> in, const RotMatrix& m, const Vec3d& center,
                 std::span<Vec3f> out);
std::vector<Vec3f> apply_rigid(std::span<const Vec3f> coords, const RotMatrix& m,
                               const Vec3d& center);

/// Turns the fragment's moving atoms about the axis_begin -> axis_end bond.
/// `out` must already hold a copy of `in` (only masked atoms are written).
void apply_torsion(std::span<const Vec3f> in, const Fragment& frag, int angle_deg,
                   std::span<Vec3f> out);
std::vector<Vec3f> apply_torsion(std::span<const Vec3f> coords, const Fragment& frag,
                                 int angle_deg);

}  // namespace vscreen
