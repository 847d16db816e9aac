#include <set>

#include "doctest.h"
#include "lattice_calderon/geometry.hpp"
#include "oracles.hpp"

using namespace lc;

TEST_CASE("paving rejects empty edges") {
  CHECK_THROWS_AS(Paving(0, 2, 2), ValidationError);
  CHECK_THROWS_AS(Paving(2, 2, -1), ValidationError);
  CHECK_NOTHROW(Paving(1, 1, 1));
}

TEST_CASE("linear index is lexicographic and invertible") {
  const Paving p(2, 3, 4);
  CHECK(p.linear_index({1, 1, 1}) == 0);
  CHECK(p.linear_index({1, 1, 2}) == 1);
  CHECK(p.linear_index({1, 2, 1}) == 4);
  CHECK(p.linear_index({2, 1, 1}) == 12);
  for (std::size_t i = 0; i < p.volume(); ++i) CHECK(p.linear_index(p.site(i)) == i);
}

TEST_CASE("boundary sites: counts, face-major order, classification") {
  const Paving p(2, 3, 4);
  const auto sites = boundary_sites(p);
  CHECK(sites.size() == std::size_t(2 * (2 * 3 + 3 * 4 + 2 * 4)));
  CHECK(p.boundary_size() == sites.size());
  CHECK(p.admissible_dim() == 4 * sites.size());
  CHECK(sites.size() == oracle::faces(p).size());
  int last_face = -1;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const int face = 2 * sites[i].face_axis + (sites[i].face_sign > 0);
    CHECK(face >= last_face);
    if (i > 0 && face == last_face) CHECK(sites[i - 1].point < sites[i].point);
    last_face = face;
    BoundarySite s;
    REQUIRE(classify_boundary(p, sites[i].point, s));
    CHECK(s.face_axis == sites[i].face_axis);
    CHECK(s.face_sign == sites[i].face_sign);
    CHECK(p.contains(sites[i].inner()));
  }
  BoundarySite s;
  CHECK_FALSE(classify_boundary(p, {0, 0, 1}, s));  // edge
  CHECK_FALSE(classify_boundary(p, {1, 1, 1}, s));  // interior
}

TEST_CASE("wedge inverse inverts the tangential derivative on every face") {
  const Paving p(2, 2, 2);
  for (const auto& site : boundary_sites(p)) {
    const Vec3c g0{cdouble(0.3, -1.2), cdouble(2.0, 0.5), cdouble(-0.7, 0.1)};
    Vec3c g = g0;
    g[site.face_axis] = 0.0;
    const Vec3c d = wedge_inverse(g, site);
    CHECK(d[site.face_axis] == cdouble(0));
    const Vec3c back = tangential_derivative(d, {0.0, 0.0, 0.0}, site);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(back[j] - g[j]) < 1e-15);
    // Literal cross product with the oracle's Levi-Civita symbol.
    for (int c = 0; c < 3; ++c) {
      cdouble want = 0;
      for (int j = 0; j < 3; ++j) want += double(oracle::levi_civita(c, j, site.face_axis) * site.face_sign) * d[j];
      CHECK(std::abs(back[c] - want) < 1e-15);
    }
  }
}

TEST_CASE("tangential trace drops the normal component") {
  const Paving p(1, 1, 1);
  for (const auto& site : boundary_sites(p)) {
    const Vec3c t = tangential_trace({1.0, 2.0, 3.0}, site);
    for (int j = 0; j < 3; ++j) CHECK(t[j] == (j == site.face_axis ? cdouble(0) : cdouble(j + 1)));
  }
}

TEST_CASE("plane membership") {
  CHECK(plane_membership({1, 2, 5}, 4) == PlaneSide::Minus);
  CHECK(plane_membership({2, 2, -3}, 4) == PlaneSide::Zero);
  CHECK(plane_membership({3, 2, 0}, 4) == PlaneSide::Plus);
}

TEST_CASE("cones: apex included, strict variant nested in verbatim") {
  const Point3 apex{3, 2, 2};
  CHECK(cone_contains(apex, apex, ConeDirection::Minus));
  CHECK(cone_contains(apex, apex, ConeDirection::Plus));
  for (int a = -2; a <= 6; ++a)
    for (int b = -2; b <= 6; ++b)
      for (int c = -2; c <= 6; ++c) {
        const Point3 m{a, b, c};
        if (cone_contains(apex, m, ConeDirection::Minus, ConeVariant::Strict))
          CHECK(cone_contains(apex, m, ConeDirection::Minus, ConeVariant::Verbatim));
        // The plus cone is the mirror of the strict minus cone.
        const Point3 mirrored{2 * apex.n1 - a, b, c};
        CHECK(cone_contains(apex, m, ConeDirection::Plus) ==
              cone_contains(apex, mirrored, ConeDirection::Minus, ConeVariant::Strict));
      }
}
