#include "lattice_calderon/geometry.hpp"

#include <cstdlib>

#include "lattice_calderon/errors.hpp"

namespace lc {

Paving::Paving(int r1, int r2, int r3) : R1(r1), R2(r2), R3(r3) {
  if (r1 < 1 || r2 < 1 || r3 < 1) throw ValidationError("paving edge lengths must be >= 1");
}

bool Paving::contains(const Point3& n) const {
  return n.n1 >= 1 && n.n1 <= R1 && n.n2 >= 1 && n.n2 <= R2 && n.n3 >= 1 && n.n3 <= R3;
}

std::size_t Paving::linear_index(const Point3& n) const {
  return (std::size_t(n.n1 - 1) * R2 + std::size_t(n.n2 - 1)) * R3 + std::size_t(n.n3 - 1);
}

Point3 Paving::site(std::size_t linear) const {
  Point3 n;
  n.n3 = int(linear % R3) + 1;
  linear /= R3;
  n.n2 = int(linear % R2) + 1;
  n.n1 = int(linear / R2) + 1;
  return n;
}

std::size_t Paving::boundary_size() const {
  return 2 * (std::size_t(R2) * R3 + std::size_t(R1) * R3 + std::size_t(R1) * R2);
}

std::array<int, 2> BoundarySite::tangential_axes() const {
  switch (face_axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

std::vector<BoundarySite> boundary_sites(const Paving& paving) {
  std::vector<BoundarySite> out;
  out.reserve(paving.boundary_size());
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {-1, 1}) {
      const int fixed = sign < 0 ? 0 : paving.R(axis) + 1;
      const int a = axis == 0 ? 1 : 0;
      const int b = axis == 2 ? 1 : 2;
      // Loops over (a, b) in ascending axis order give lexicographic order on (n1,n2,n3).
      for (int i = 1; i <= paving.R(a); ++i) {
        for (int j = 1; j <= paving.R(b); ++j) {
          BoundarySite s;
          s.point[axis] = fixed;
          s.point[a] = i;
          s.point[b] = j;
          s.face_axis = axis;
          s.face_sign = sign;
          out.push_back(s);
        }
      }
    }
  }
  return out;
}

bool classify_boundary(const Paving& paving, const Point3& n, BoundarySite& out) {
  int outside_axis = -1;
  for (int axis = 0; axis < 3; ++axis) {
    if (n[axis] >= 1 && n[axis] <= paving.R(axis)) continue;
    if (outside_axis >= 0) return false;
    outside_axis = axis;
  }
  if (outside_axis < 0) return false;
  const int v = n[outside_axis];
  if (v == 0) {
    out.face_sign = -1;
  } else if (v == paving.R(outside_axis) + 1) {
    out.face_sign = 1;
  } else {
    return false;
  }
  out.point = n;
  out.face_axis = outside_axis;
  return true;
}

Vec3c tangential_trace(const Vec3c& u, const BoundarySite& site) {
  Vec3c t = u;
  t[site.face_axis] = 0.0;
  return t;
}

Vec3c tangential_derivative(const Vec3c& u_at_site, const Vec3c& u_at_inner, const BoundarySite& site) {
  Vec3c d;
  for (int j = 0; j < 3; ++j) d[j] = u_at_site[j] - u_at_inner[j];
  d[site.face_axis] = 0.0;
  const double s = site.face_sign;
  Vec3c nu{0.0, 0.0, 0.0};
  nu[site.face_axis] = s;
  return {d[1] * nu[2] - d[2] * nu[1], d[2] * nu[0] - d[0] * nu[2], d[0] * nu[1] - d[1] * nu[0]};
}

Vec3c wedge_inverse(const Vec3c& g, const BoundarySite& site) {
  // For nu = s e_a and tangential a < b: (d wedge nu)_a = eps s d_b, (d wedge nu)_b = -eps s d_a,
  // eps = eps_{a b axis}.
  const auto [a, b] = site.tangential_axes();
  const double eps = (site.face_axis == 1) ? -1.0 : 1.0;
  const double s = site.face_sign;
  Vec3c d{0.0, 0.0, 0.0};
  d[b] = g[a] / (eps * s);
  d[a] = -g[b] / (eps * s);
  return d;
}

PlaneSide plane_membership(const Point3& n, int p) {
  const int s = plane_index(n);
  if (s < p) return PlaneSide::Minus;
  if (s > p) return PlaneSide::Plus;
  return PlaneSide::Zero;
}

bool cone_contains(const Point3& apex, const Point3& m, ConeDirection direction, ConeVariant variant) {
  const int d2 = std::abs(apex.n2 - m.n2);
  const int d3 = std::abs(apex.n3 - m.n3);
  if (direction == ConeDirection::Minus) {
    const int bound = variant == ConeVariant::Verbatim ? apex.n1 - d2 + d3 : apex.n1 - d2 - d3;
    return m.n1 <= bound;
  }
  return m.n1 >= apex.n1 + d2 + d3;
}

}  // namespace lc
