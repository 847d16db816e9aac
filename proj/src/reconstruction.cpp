#include "lattice_calderon/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace lc {

namespace {

constexpr cdouble kI(0.0, 1.0);

struct Pairing {
  Fld X, Y;
  double sgn;
};
constexpr Pairing kPairs[2] = {{Fld::E, Fld::H, 1.0}, {Fld::H, Fld::E, -1.0}};

struct SmallDivisor {};

// v(;p) as seen by the plane step: zero below plane p, the plane store on p, the backward
// propagation above p, and the Cauchy Dirichlet values off Omega.
class PlaneView {
 public:
  PlaneView(const CauchyData& data, const Field& above, const Field& plane, int p)
      : data_(data), above_(above), plane_(plane), p_(p) {}
  cdouble operator()(Fld f, int c, const Point3& n) const {
    if (!data_.basis.paving().contains(n)) return data_.dirichlet_value(n, f, c);
    const int pl = plane_index(n);
    if (pl < p_) return 0.0;
    return pl == p_ ? plane_.get(f, c, n) : above_.get(f, c, n);
  }

 private:
  const CauchyData& data_;
  const Field& above_;
  const Field& plane_;
  int p_;
};

class DivisorGuard {
 public:
  DivisorGuard(double tol, PlaneStats& stats) : tol_(tol), stats_(stats) {}
  void check(cdouble d, double scale) {
    const double r = std::abs(d) / scale;
    stats_.min_divisor_ratio = std::min(stats_.min_divisor_ratio, r);
    if (!(r >= tol_)) throw SmallDivisor{};
  }
  void check_det(cdouble det, double scale) {
    const double r = std::abs(det) / scale;
    stats_.min_det_ratio = std::min(stats_.min_det_ratio, r);
    if (!(r >= tol_)) throw SmallDivisor{};
  }

 private:
  double tol_;
  PlaneStats& stats_;
};

}  // namespace

KnownPotentialState::KnownPotentialState(const Paving& paving) : paving_(paving), entries_(6 * paving.volume()) {}

bool KnownPotentialState::known(Fld f, int comp, const Point3& n) const {
  if (!paving_.contains(n)) return true;
  return entries_[6 * paving_.linear_index(n) + std::size_t(slot(f, comp))].has_value();
}

cdouble KnownPotentialState::get(Fld f, int comp, const Point3& n) const {
  if (!paving_.contains(n)) return 1.0;
  const auto& e = entries_[6 * paving_.linear_index(n) + std::size_t(slot(f, comp))];
  if (!e)
    throw MissingPotentialError("potential entry " + std::string(f == Fld::E ? "E" : "H") + std::to_string(comp + 1) +
                                " at " + point_string(n) + " is not yet known");
  return *e;
}

void KnownPotentialState::assign(Fld f, int comp, const Point3& n, cdouble v) {
  if (!paving_.contains(n)) throw std::logic_error("potential entries outside Omega are fixed to 1");
  auto& e = entries_[6 * paving_.linear_index(n) + std::size_t(slot(f, comp))];
  if (e) throw std::logic_error("potential entry at " + point_string(n) + " written twice");
  e = v;
  ++count_;
}

PotentialLookup KnownPotentialState::lookup() const {
  return [this](Fld f, int comp, const Point3& n) { return get(f, comp, n); };
}

DiagonalPotential KnownPotentialState::to_potential() const {
  if (!complete()) throw MissingPotentialError("reconstruction state is incomplete");
  DiagonalPotential V(paving_);
  for (std::size_t lin = 0; lin < paving_.volume(); ++lin) {
    const Point3 n = paving_.site(lin);
    for (Fld f : {Fld::E, Fld::H})
      for (int c = 0; c < 3; ++c) V.set(f, c, n, get(f, c, n));
  }
  return V;
}

CauchyData measure_v(const DtNAccess& dtn, const CompletionOperator* Q, const SpecialParams& params) {
  const BoundaryBasis& basis = dtn.basis();
  const MixedBoundaryData bd = v_boundary_data(params, basis.paving());
  const CompletionIndices idx = completion_indices(basis);
  Eigen::VectorXcd f(Eigen::Index(idx.dirichlet.size())), g(Eigen::Index(idx.neumann.size()));
  for (std::size_t r = 0; r < idx.dirichlet.size(); ++r) f(Eigen::Index(r)) = bd.dirichlet(Eigen::Index(idx.dirichlet[r]));
  for (std::size_t r = 0; r < idx.neumann.size(); ++r) g(Eigen::Index(r)) = bd.neumann(Eigen::Index(idx.neumann[r]));
  const TangentialData full = Q ? complete_dirichlet(*Q, f, g) : complete_dirichlet_partial(dtn, f, g);
  return cauchy_from_traces(basis, full, dtn.apply(full));
}

bool recover_plane(const Measurement& first, const Measurement& second, KnownPotentialState& state,
                   const ReconstructionOptions& options, PlaneStats& stats) {
  const int p = first.params.p;
  if (second.params.p != p) throw std::logic_error("measurements of different planes");
  const Paving& paving = state.paving();
  const PotentialLookup V = state.lookup();
  const std::array<const Measurement*, 2> ms{&first, &second};
  std::array<Field, 2> above, plane;
  for (int t = 0; t < 2; ++t) {
    above[t] = propagate_backward(V, BoundaryValuePacket(ms[t]->data, p + 1));
    plane[t] = Field::on_closure(paving);
  }
  const std::array<PlaneView, 2> v{PlaneView(first.data, above[0], plane[0], p),
                                   PlaneView(second.data, above[1], plane[1], p)};
  const auto scale = [&](int n3) { return std::abs(weight(first.params, n3)); };
  const Point3 e1 = unit(0), e2 = unit(1), e3 = unit(2);

  stats.min_divisor_ratio = stats.min_det_ratio = std::numeric_limits<double>::infinity();
  DivisorGuard guard(options.divisor_tol, stats);
  std::vector<std::tuple<Fld, int, Point3, cdouble>> pending;
  try {
    for (int k = 1; k <= paving.R1; ++k) {
      const int n2 = p - k;
      if (n2 < 1 || n2 > paving.R2) continue;
      // v_2 along the layer from the previous one (or the Cauchy data at k = 1); v_3 = 0 on plane p.
      for (int t = 0; t < 2; ++t)
        for (int n3 = 1; n3 <= paving.R3; ++n3) {
          const Point3 m{k, n2, n3};
          for (Fld X : {Fld::E, Fld::H}) {
            const cdouble v2 = k == 1 ? ms[t]->data.inner_value({0, n2, n3}, X, 1) : v[t](X, 0, m - e1 + e2);
            plane[t].set(X, 1, m, v2);
            plane[t].set(X, 2, m, 0.0);
          }
        }
      // recover_V1 jointly with V_3 at m + e2: the tau pair fixes both unknowns.
      for (int n3 = 1; n3 <= paving.R3; ++n3) {
        const Point3 m{k, n2, n3};
        const Point3 n = m + e2;
        for (const auto& pr : kPairs) {
          std::array<cdouble, 2> P;
          for (int t = 0; t < 2; ++t)
            P[t] = (v[t](pr.Y, 2, m + e2) - v[t](pr.Y, 2, m - e2) - v[t](pr.Y, 1, m + e3) + v[t](pr.Y, 1, m - e3)) /
                   (-pr.sgn * 2.0 * kI);
          cdouble W;
          if (paving.contains(n)) {
            Eigen::Matrix2cd A;
            Eigen::Vector2cd b;
            for (int t = 0; t < 2; ++t) {
              A(t, 0) = pr.sgn * 2.0 * kI * v[t](pr.Y, 2, n);
              A(t, 1) = -P[t];
              b(t) = v[t](pr.X, 1, n + e1) - v[t](pr.X, 0, n + e2) - v[t](pr.X, 1, n - e1);
            }
            const cdouble det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
            guard.check_det(det, std::abs(A(0, 0) * A(1, 1)) + std::abs(A(0, 1) * A(1, 0)));
            const Eigen::Vector2cd x = A.partialPivLu().solve(b);
            pending.emplace_back(pr.Y, 2, n, x(0));
            W = x(1);
          } else {
            // m + e2 lies on dOmega_2^+: v_1(m) is its inner value.
            guard.check(P[0], scale(n3));
            W = first.data.inner_value(n, pr.X, 0) / P[0];
          }
          if (W == cdouble(0)) throw SmallDivisor{};
          pending.emplace_back(pr.X, 0, m, 1.0 / W);
          for (int t = 0; t < 2; ++t) plane[t].set(pr.X, 0, m, P[t] * W);
        }
      }
      // recover_V2 from the tangential step at m, producing v^Y_3(m + e1).
      for (int n3 = 1; n3 <= paving.R3; ++n3) {
        const Point3 m{k, n2, n3};
        for (const auto& pr : kPairs) {
          const cdouble d = pr.sgn * 2.0 * kI * v[0](pr.X, 1, m);
          guard.check(d, scale(n3));
          const cdouble num =
              v[0](pr.Y, 2, m + e1) - v[0](pr.Y, 0, m + e3) + v[0](pr.Y, 0, m - e3) - v[0](pr.Y, 2, m - e1);
          pending.emplace_back(pr.X, 1, m, num / d);
        }
      }
    }
    // recover_V3 on the n2 = 1 row of plane p+1, which has no in-Omega site below it on plane p.
    if (p <= paving.R1)
      for (int n3 = 1; n3 <= paving.R3; ++n3) {
        const Point3 n{p, 1, n3};
        for (const auto& pr : kPairs) {
          const cdouble d = pr.sgn * 2.0 * kI * v[0](pr.Y, 2, n);
          guard.check(d, scale(n3));
          const cdouble num =
              v[0](pr.X, 1, n + e1) - v[0](pr.X, 0, n + e2) + v[0](pr.X, 0, n - e2) - v[0](pr.X, 1, n - e1);
          pending.emplace_back(pr.Y, 2, n, num / d);
        }
      }
  } catch (const SmallDivisor&) {
    return false;
  }
  for (const auto& [f, c, n, val] : pending) state.assign(f, c, n, val);
  stats.entries_added = pending.size();
  return true;
}

ReconstructionResult reconstruct(const DtNMatrix& dtn, const ReconstructionOptions& options) {
  if (dtn.lambda == cdouble(0)) throw ValidationError("lambda must be nonzero");
  if (!(options.tau > 0) || !(options.tau_gap > 0) || !(options.tau_step > 0))
    throw ValidationError("tau policy values must be positive");
  const Paving& paving = dtn.paving;
  const auto N = Eigen::Index(paving.admissible_dim());
  if (dtn.L.rows() != N || dtn.L.cols() != N) throw ValidationError("DtN matrix size does not match the paving");

  ReconstructionReport report;
  const DtNAccess access(dtn);
  std::optional<CompletionOperator> Q;
  if (!options.partial_data) {
    Q.emplace(access);
    report.completion_residual = Q->inversion_residual();
  }
  KnownPotentialState state(paving);
  const int n3_ref = (paving.R3 + 1) / 2;
  for (int p = paving.R1 + paving.R2; p >= 1; --p) {
    PlaneStats stats;
    stats.p = p;
    bool done = false;
    for (int e = 0; !done; ++e) {
      const double tau = options.tau + e * options.tau_step;
      if (tau > options.tau_max + 1e-12) break;
      const SpecialParams a{p, tau, n3_ref}, b{p, tau + options.tau_gap, n3_ref};
      const Measurement m0{a, measure_v(access, Q ? &*Q : nullptr, a)};
      const Measurement m1{b, measure_v(access, Q ? &*Q : nullptr, b)};
      stats.escalations = e;
      stats.tau = a.tau;
      stats.tau_prime = b.tau;
      done = recover_plane(m0, m1, state, options, stats);
    }
    if (!done) throw TauExhaustedError("tau escalation exhausted at plane " + std::to_string(p), p);
    report.planes.push_back(stats);
  }

  ReconstructionResult result{state.to_potential(), {}, {}};
  result.material = material_from_potential(result.potential, dtn.lambda);
  report.touched_columns = access.touched_columns();

  if (options.self_check) {
    const DtNMatrix again = assemble_dtn(result.potential, dtn.lambda);
    double diff = 0, ref = 0;
    for (Eigen::Index k = 0; k < N; ++k) {
      if (options.partial_data && !in_partial_support(access.basis(), std::size_t(k))) continue;
      diff = std::max(diff, (again.L.col(k) - dtn.L.col(k)).cwiseAbs().maxCoeff());
      ref = std::max(ref, dtn.L.col(k).cwiseAbs().maxCoeff());
    }
    report.self_check_run = true;
    report.self_check_residual = ref > 0 ? diff / ref : diff;
    report.self_check_ok = report.self_check_residual <= options.self_check_tol;
  }
  result.report = std::move(report);
  return result;
}

}  // namespace lc
