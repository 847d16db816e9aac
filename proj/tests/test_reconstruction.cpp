#include "doctest.h"
#include "lattice_calderon/reconstruction.hpp"
#include "oracles.hpp"

using namespace lc;

TEST_CASE("known-potential state is monotone and guarded") {
  const Paving p(2, 1, 1);
  KnownPotentialState s(p);
  CHECK(s.get(Fld::E, 0, {0, 1, 1}) == cdouble(1));
  CHECK_THROWS_AS(s.get(Fld::E, 0, {1, 1, 1}), MissingPotentialError);
  s.assign(Fld::E, 0, {1, 1, 1}, 2.0);
  CHECK(s.known(Fld::E, 0, {1, 1, 1}));
  CHECK_THROWS_AS(s.assign(Fld::E, 0, {1, 1, 1}, 3.0), std::logic_error);
  CHECK_THROWS_AS(s.assign(Fld::E, 0, {0, 1, 1}, 3.0), std::logic_error);
  CHECK(s.known_count() == 1);
  CHECK_FALSE(s.complete());
  CHECK_THROWS_AS(s.to_potential(), MissingPotentialError);
}

TEST_CASE("identity medium round trip") {
  const Paving p(2, 3, 2);
  MaterialTensor m(p);
  // lambda = 1 is a Dirichlet eigenvalue of the homogeneous box.
  const cdouble lambda(0.77, 0.0);
  const DtNMatrix dtn = assemble_dtn(potential_from_material(m, lambda), lambda);
  const auto r = reconstruct(dtn);
  CHECK(material_max_relative_error(r.material, m) <= 1e-8);
  CHECK(r.report.self_check_ok);
}

TEST_CASE("measured Cauchy data of v equals the forward oracle") {
  const Paving p(3, 2, 3);
  const DiagonalPotential V = oracle::random_potential(p, 12, MediumKind::ComplexAnnulus);
  const DtNMatrix dtn = assemble_dtn(V, 1.0);
  const DtNAccess access(dtn);
  const CompletionOperator Q(access);
  for (int plane = 1; plane <= p.R1 + p.R2 + 1; ++plane) {
    const SpecialParams prm{plane, 1.0, 2};
    const CauchyData got = measure_v(access, &Q, prm);
    const CauchyData want = cauchy_from_field(compute_v(lookup_of(V), prm, p), got.basis);
    const double scale = std::max(1.0, want.dirichlet.cwiseAbs().maxCoeff());
    CHECK((got.dirichlet - want.dirichlet).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK((got.inner - want.inner).cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("plane-by-plane induction matches the truth") {
  const Paving p(3, 3, 2);
  const DiagonalPotential V = oracle::random_potential(p, 21);
  const DtNMatrix dtn = assemble_dtn(V, 1.0);
  const DtNAccess access(dtn);
  const CompletionOperator Q(access);
  KnownPotentialState state(p);
  const ReconstructionOptions opts;
  for (int plane = p.R1 + p.R2; plane >= 1; --plane) {
    const SpecialParams a{plane, 1.0, 1}, b{plane, 1.5, 1};
    PlaneStats stats;
    const std::size_t before = state.known_count();
    REQUIRE(recover_plane({a, measure_v(access, &Q, a)}, {b, measure_v(access, &Q, b)}, state, opts, stats));
    CHECK(state.known_count() == before + stats.entries_added);
    // After plane p: V_{1,2} known on planes >= p, V_3 on planes >= p+1, nothing else.
    for (std::size_t i = 0; i < p.volume(); ++i) {
      const Point3 n = p.site(i);
      for (Fld f : {Fld::E, Fld::H})
        for (int c = 0; c < 3; ++c) {
          const bool expect = plane_index(n) >= (c == 2 ? plane + 1 : plane);
          CHECK(state.known(f, c, n) == expect);
          if (expect) CHECK(std::abs(state.get(f, c, n) - V(f, c, n)) <= 1e-8 * std::abs(V(f, c, n)));
        }
    }
  }
  CHECK(state.complete());
}

TEST_CASE("reconstruction is deterministic and reads only the DtN matrix") {
  const Paving p(2, 2, 3);
  DiagonalPotential V = oracle::random_potential(p, 31, MediumKind::ComplexAnnulus);
  std::atomic<long> reads{0};
  V.attach_read_counter(&reads);
  const DtNMatrix dtn = assemble_dtn(V, 1.0);
  reads = 0;
  const auto r1 = reconstruct(dtn);
  const auto r2 = reconstruct(dtn);
  CHECK(reads.load() == 0);
  CHECK(r1.potential.max_relative_difference(r2.potential) == 0.0);
  CHECK(r1.potential.max_relative_difference(V) <= 1e-6);
}

TEST_CASE("partial-data mode consumes only columns on dOmega_1 and dOmega_2^+") {
  const Paving p(3, 2, 2);
  const DiagonalPotential V = oracle::random_potential(p, 41);
  const DtNMatrix dtn = assemble_dtn(V, 1.0);
  ReconstructionOptions opts;
  opts.partial_data = true;
  const auto r = reconstruct(dtn, opts);
  const BoundaryBasis basis(p);
  CHECK_FALSE(r.report.touched_columns.empty());
  for (std::size_t k : r.report.touched_columns) CHECK(in_partial_support(basis, k));
  CHECK(r.potential.max_relative_difference(V) <= 1e-6);
}

TEST_CASE("tau escalation and exhaustion") {
  const Paving p(2, 2, 2);
  const DtNMatrix dtn = assemble_dtn(oracle::random_potential(p, 51), 1.0);
  ReconstructionOptions impossible;
  impossible.divisor_tol = 1e6;
  CHECK_THROWS_AS(reconstruct(dtn, impossible), TauExhaustedError);
  try {
    reconstruct(dtn, impossible);
  } catch (const TauExhaustedError& e) {
    CHECK(e.plane == p.R1 + p.R2);
  }
  ReconstructionOptions shifted;
  shifted.tau = 2.0;
  const auto r = reconstruct(dtn, shifted);
  CHECK(r.report.planes.front().tau == 2.0);
  CHECK(r.report.planes.front().tau_prime == 2.5);
}

TEST_CASE("input validation") {
  const Paving p(1, 1, 2);
  DtNMatrix dtn = assemble_dtn(oracle::random_potential(p, 1), 1.0);
  DtNMatrix wrong = dtn;
  wrong.L.conservativeResize(dtn.L.rows() - 1, dtn.L.cols());
  CHECK_THROWS_AS(reconstruct(wrong), ValidationError);
  ReconstructionOptions bad;
  bad.tau_gap = 0;
  CHECK_THROWS_AS(reconstruct(dtn, bad), ValidationError);
}
