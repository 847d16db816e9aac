#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace lc {

using cdouble = std::complex<double>;
using Vec3c = std::array<cdouble, 3>;

struct Point3 {
  int n1 = 0, n2 = 0, n3 = 0;

  int operator[](int axis) const { return axis == 0 ? n1 : (axis == 1 ? n2 : n3); }
  int& operator[](int axis) { return axis == 0 ? n1 : (axis == 1 ? n2 : n3); }
  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3&, const Point3&) = default;
};

inline Point3 operator+(Point3 a, const Point3& b) { return {a.n1 + b.n1, a.n2 + b.n2, a.n3 + b.n3}; }
inline Point3 operator-(Point3 a, const Point3& b) { return {a.n1 - b.n1, a.n2 - b.n2, a.n3 - b.n3}; }

// Unit vector along axis 0..2, scaled by s.
inline Point3 unit(int axis, int s = 1) {
  Point3 e;
  e[axis] = s;
  return e;
}

inline int plane_index(const Point3& n) { return n.n1 + n.n2; }

// Omega = [[1,R1]] x [[1,R2]] x [[1,R3]].
struct Paving {
  int R1 = 1, R2 = 1, R3 = 1;

  Paving() = default;
  Paving(int r1, int r2, int r3);

  int R(int axis) const { return axis == 0 ? R1 : (axis == 1 ? R2 : R3); }
  bool contains(const Point3& n) const;
  std::size_t volume() const { return std::size_t(R1) * R2 * R3; }
  // Lexicographic index of an interior site.
  std::size_t linear_index(const Point3& n) const;
  Point3 site(std::size_t linear) const;
  std::size_t boundary_size() const;
  // Number of admissible scalar boundary unknowns: 2 tangential components x 2 fields per site.
  std::size_t admissible_dim() const { return 4 * boundary_size(); }
  friend bool operator==(const Paving&, const Paving&) = default;
};

struct BoundarySite {
  Point3 point;
  int face_axis = 0;  // 0..2
  int face_sign = 1;  // -1 or +1
  Point3 normal() const { return unit(face_axis, face_sign); }
  Point3 inner() const { return point - normal(); }
  // The two tangential axes, ascending.
  std::array<int, 2> tangential_axes() const;
};

// Face ordering 1-,1+,2-,2+,3-,3+, lexicographic within a face.
std::vector<BoundarySite> boundary_sites(const Paving& paving);

// Face label of a boundary point; returns false when n is not in the boundary.
bool classify_boundary(const Paving& paving, const Point3& n, BoundarySite& out);

Vec3c tangential_trace(const Vec3c& u, const BoundarySite& site);

// (u(n) - u(m)) wedge nu(n).
Vec3c tangential_derivative(const Vec3c& u_at_site, const Vec3c& u_at_inner, const BoundarySite& site);

// Inverse of the wedge on the tangential plane: returns d with tangential_derivative = g.
// The normal slot of the result is zero.
Vec3c wedge_inverse(const Vec3c& g, const BoundarySite& site);

enum class PlaneSide { Minus, Zero, Plus };
PlaneSide plane_membership(const Point3& n, int p);

enum class ConeDirection { Minus, Plus };
// Verbatim: m1 <= n1 - |n2-m2| + |n3-m3|; Strict: m1 <= n1 - |n2-m2| - |n3-m3|.
// The Plus cone mirrors both inequalities.
enum class ConeVariant { Verbatim, Strict };
bool cone_contains(const Point3& apex, const Point3& m, ConeDirection direction,
                   ConeVariant variant = ConeVariant::Verbatim);

}  // namespace lc
