#include "doctest.h"
#include "lattice_calderon/operators.hpp"
#include "oracles.hpp"

using namespace lc;

TEST_CASE("closure fields store component j only off dOmega_j") {
  const Paving p(2, 2, 2);
  Field u = Field::on_closure(p);
  CHECK_NOTHROW(u.set(Fld::E, 0, {1, 1, 1}, 1.0));
  CHECK_THROWS_AS(u.set(Fld::E, 0, {0, 1, 1}, 1.0), UndefinedValueError);
  CHECK_NOTHROW(u.set(Fld::E, 1, {0, 1, 1}, 1.0));
  CHECK_THROWS_AS(u.set(Fld::H, 2, {1, 1, 3}, 1.0), UndefinedValueError);
  CHECK_THROWS_AS(u.set(Fld::H, 1, {0, 0, 1}, 1.0), UndefinedValueError);  // edge
  CHECK_THROWS_AS(u.get(Fld::H, 1, {1, 1, 1}), UndefinedValueError);
  u.unset(Fld::E, 0, {1, 1, 1});
  CHECK_FALSE(u.defined(Fld::E, 0, {1, 1, 1}));
}

TEST_CASE("curl agrees with the literal table") {
  Field u({-1, -1, -1}, {3, 3, 3});
  SplitMix64 rng(3);
  for (int a = -1; a <= 3; ++a)
    for (int b = -1; b <= 3; ++b)
      for (int c = -1; c <= 3; ++c)
        for (Fld f : {Fld::E, Fld::H})
          for (int j = 0; j < 3; ++j) u.set(f, j, {a, b, c}, {rng.uniform(-1, 1), rng.uniform(-1, 1)});
  const Point3 n{1, 1, 1};
  const auto got = curl(u, Fld::H, n);
  for (int comp = 0; comp < 3; ++comp) {
    cdouble want = 0;
    for (const auto& t : oracle::kCurl[comp]) want += double(t[0]) * difference(u, Fld::H, t[1], n, t[2]);
    CHECK(std::abs(got[comp] - want / cdouble(0, 2)) < 1e-15);
  }
  const auto h0 = apply_H0(u, n);
  const auto me = curl(u, Fld::E, n);
  for (int c = 0; c < 3; ++c) {
    CHECK(h0[c] == got[c]);
    CHECK(h0[3 + c] == -me[c]);
  }
}

TEST_CASE("a discrete gradient is curl-free") {
  Field u({-2, -2, -2}, {4, 4, 4});
  const auto phi = [](const Point3& n) { return cdouble(n.n1 * n.n1 - 2.0 * n.n2 * n.n3, n.n3 - n.n1); };
  for (int a = -1; a <= 3; ++a)
    for (int b = -1; b <= 3; ++b)
      for (int c = -1; c <= 3; ++c) {
        const Point3 n{a, b, c};
        // Centered differences commute, so D(phi) is annihilated by the curl.
        for (int j = 0; j < 3; ++j) u.set(Fld::E, j, n, phi(n + unit(j)) - phi(n - unit(j)));
      }
  for (const auto& z : curl(u, Fld::E, {1, 1, 1})) CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("potential and material convert both ways") {
  const Paving p(2, 1, 2);
  SplitMix64 rng(11);
  const MaterialTensor m = random_material(p, rng, MediumKind::ComplexAnnulus);
  const cdouble lambda(0.7, -0.2);
  const DiagonalPotential V = potential_from_material(m, lambda);
  const Point3 n{2, 1, 1};
  CHECK(std::abs(V(Fld::E, 1, n) - (-lambda / m.entry(Fld::E, 1, n))) < 1e-15);
  CHECK(std::abs(V(Fld::H, 2, n) - (-lambda / m.entry(Fld::H, 2, n))) < 1e-15);
  CHECK(V(Fld::E, 0, {0, 1, 1}) == cdouble(1));
  CHECK(V(Fld::H, 2, {3, 1, 1}) == cdouble(1));
  CHECK(material_max_relative_error(material_from_potential(V, lambda), m) < 1e-15);
  CHECK_THROWS_AS(potential_from_material(m, 0.0), ValidationError);
  MaterialTensor bad = m;
  bad.set_entry(Fld::H, 0, n, 0.0);
  CHECK_THROWS_AS(potential_from_material(bad, 1.0), ValidationError);
}

TEST_CASE("physical materials are positive real") {
  const Paving p(1, 1, 2);
  SplitMix64 rng(1);
  CHECK(random_material(p, rng, MediumKind::Real).physical());
  CHECK_FALSE(random_material(p, rng, MediumKind::ComplexAnnulus).physical());
}

TEST_CASE("read counter counts every potential access") {
  const Paving p(1, 1, 1);
  DiagonalPotential V(p);
  std::atomic<long> reads{0};
  V.attach_read_counter(&reads);
  (void)V(Fld::E, 0, {1, 1, 1});
  (void)V(Fld::E, 0, {0, 1, 1});
  CHECK(reads.load() == 2);
  CHECK_THROWS(V.set(Fld::E, 0, {1, 1, 1}, 0.0));
}
