#include "doctest.h"
#include "lattice_calderon/special_solutions.hpp"
#include "oracles.hpp"

using namespace lc;

TEST_CASE("diagonal sign uses floor division") {
  // (-1)^{floor(n/2)} for n = -4..5.
  const double want[] = {1, 1, -1, -1, 1, 1, -1, -1, 1, 1};
  for (int n = -4; n <= 5; ++n) CHECK(diagonal_sign(n) == want[n + 4]);
}

TEST_CASE("weights: i^{n3} phase and e^{tau} growth") {
  const SpecialParams prm{2, 0.7, 1};
  CHECK(std::abs(weight(prm, 1) - cdouble(0, 1)) < 1e-15);
  for (int n3 = -3; n3 <= 5; ++n3) {
    const cdouble r = weight(prm, n3 + 1) / weight(prm, n3);
    CHECK(std::abs(r - cdouble(0, std::exp(0.7))) < 1e-12);
  }
  CHECK(mode_sign(Fld::E) == -1.0);
  CHECK(mode_sign(Fld::H) == 1.0);
}

TEST_CASE("special solution w vanishes exactly below its plane") {
  const Paving p(3, 3, 3);
  const DiagonalPotential V = oracle::random_potential(p, 2, MediumKind::ComplexAnnulus);
  for (int plane = 1; plane <= p.R1 + p.R2 + 1; ++plane) {
    const Field w = compute_w(lookup_of(V), {plane, 1.0, 0}, p);
    for (std::size_t i = 0; i < p.volume(); ++i) {
      const Point3 n = p.site(i);
      for (Fld f : {Fld::E, Fld::H}) {
        if (plane_index(n) < plane)
          for (int c = 0; c < 3; ++c) CHECK(w.get(f, c, n) == cdouble(0));
        if (plane_index(n) == plane) CHECK(w.get(f, 2, n) == cdouble(0));
      }
    }
  }
}

TEST_CASE("identity medium: A-weights are one and closed forms hold") {
  const Paving p(3, 2, 3);
  const PotentialLookup one = [](Fld, int, const Point3&) { return cdouble(1); };
  const AWeights A(one, 4, p);
  for (int n1 = -1; n1 <= 3; ++n1) CHECK(A(Fld::E, n1, 2) == cdouble(1));
  CHECK(std::abs(k_weight(A, Fld::H, 2, 2, 0.5) - (1 + std::exp(-1.0))) < 1e-15);
  for (int plane = 2; plane <= 5; ++plane) {
    const SpecialParams prm{plane, 1.0, 0};
    const Field v = compute_v(one, prm, p);
    const auto rep = verify_relations(v, one, prm, p);
    CHECK(rep.max_residual() < 1e-10);
  }
}

TEST_CASE("A-weights follow the skip-two product") {
  const Paving p(4, 4, 2);
  const DiagonalPotential V = oracle::random_potential(p, 3, MediumKind::ComplexAnnulus);
  const int plane = 6;
  const AWeights A(lookup_of(V), plane, p);
  for (Fld f : {Fld::E, Fld::H})
    for (int n1 = 1; n1 <= 4; ++n1) {
      const cdouble r = V(f, 1, {n1 - 1, plane - n1 + 1, 1}) / V(f, 0, {n1, plane - n1, 1});
      CHECK(std::abs(A(f, n1, 1) - r * A(f, n1 - 2, 1)) < 1e-14);
    }
}

TEST_CASE("relation suite on random media") {
  const Paving p(3, 3, 3);
  for (std::uint64_t seed : {1u, 2u}) {
    for (MediumKind kind : {MediumKind::Real, MediumKind::ComplexAnnulus}) {
      const DiagonalPotential V = oracle::random_potential(p, seed, kind);
      const PotentialLookup lk = lookup_of(V);
      for (int plane = 1; plane <= p.R1 + p.R2; ++plane) {
        const SpecialParams prm{plane, 1.0, 0};
        const Field v = compute_v(lk, prm, p);
        const auto rep = verify_relations(v, lk, prm, p);
        for (const auto& [name, r] : rep.residual) {
          INFO("relation " << name << " plane " << plane);
          CHECK(r <= 1e-9);
        }
        if (plane >= 2 && plane <= p.R1 + p.R2 - 1) {
          CHECK(rep.count.at("closed.V2") > 0);
          CHECK(rep.count.at("v3.curl_balance") > 0);
        }
        CHECK(check_nonvanishing(v, prm, p).ok);
      }
    }
  }
}

TEST_CASE("boundary prescription of v does not depend on the medium") {
  const Paving p(2, 3, 2);
  const SpecialParams prm{3, 1.0, 1};
  const BoundaryBasis basis(p);
  const MixedBoundaryData bd = v_boundary_data(prm, p);
  for (std::uint64_t seed : {4u, 5u}) {
    const DiagonalPotential V = oracle::random_potential(p, seed);
    const Field v = compute_v(lookup_of(V), prm, p);
    const TangentialData f = dirichlet_trace(v, basis);
    const TangentialData g = neumann_trace(v, basis);
    for (std::size_t s = 0; s < basis.sites().size(); ++s) {
      if (basis.on_face(s, 0, 1)) continue;
      for (std::size_t k = 4 * s; k < 4 * s + 4; ++k) {
        CHECK(f(Eigen::Index(k)) == bd.dirichlet(Eigen::Index(k)));
        if (basis.on_face(s, 0, -1)) CHECK(std::abs(g(Eigen::Index(k)) - bd.neumann(Eigen::Index(k))) < 1e-12);
      }
    }
  }
}

TEST_CASE("v is zero on dOmega_2^- and dOmega_3") {
  const Paving p(3, 2, 2);
  const SpecialParams prm{3, 1.0, 0};
  const MixedBoundaryData bd = v_boundary_data(prm, p);
  const BoundaryBasis basis(p);
  for (std::size_t s = 0; s < basis.sites().size(); ++s)
    if (basis.on_face(s, 1, -1) || basis.sites()[s].face_axis == 2)
      for (std::size_t k = 4 * s; k < 4 * s + 4; ++k) CHECK(bd.dirichlet(Eigen::Index(k)) == cdouble(0));
}

TEST_CASE("w is linear in the launch amplitude") {
  const Paving p(2, 2, 2);
  const DiagonalPotential V = oracle::random_potential(p, 7);
  const SpecialParams prm{3, 1.0, 0};
  Field a = make_march_window(p, 3), b = make_march_window(p, 3);
  init_w(prm, a, 1.0);
  init_w(prm, b, 2.5);
  march_forward(lookup_of(V), a, p, 3);
  march_forward(lookup_of(V), b, p, 3);
  for (std::size_t i = 0; i < p.volume(); ++i)
    for (Fld f : {Fld::E, Fld::H})
      for (int c = 0; c < 3; ++c)
        CHECK(std::abs(b.get(f, c, p.site(i)) - 2.5 * a.get(f, c, p.site(i))) < 1e-12 * std::max(1.0, std::abs(b.get(f, c, p.site(i)))));
}

TEST_CASE("parameter validation") {
  const Paving p(2, 2, 2);
  CHECK_THROWS_AS(validate({0, 1.0, 0}, p), ValidationError);
  CHECK_THROWS_AS(validate({6, 1.0, 0}, p), ValidationError);
  CHECK_THROWS_AS(validate({2, 0.0, 0}, p), ValidationError);
  CHECK_NOTHROW(validate({5, 1.0, 0}, p));
}
