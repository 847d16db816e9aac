#include "lattice_calderon/dtn.hpp"

#include <cmath>

namespace lc {

DtNMatrix assemble_dtn(const DiagonalPotential& V, cdouble lambda) {
  return assemble_dtn(DirichletSolver(V), lambda);
}

DtNMatrix assemble_dtn(const DirichletSolver& solver, cdouble lambda) {
  if (lambda == cdouble(0)) throw ValidationError("lambda = 0 is excluded: Cauchy data do not depend on the medium");
  const Paving& paving = solver.paving();
  const BoundaryBasis basis(paving);
  const auto N = Eigen::Index(basis.dim());
  const Eigen::MatrixXcd X = solver.solve_interior(Eigen::MatrixXcd::Identity(N, N));
  DtNMatrix dtn{paving, lambda, Eigen::MatrixXcd(N, N)};
  // Only the inner value enters the wedge; the boundary value is e_k itself.
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    const Point3 m = site.inner();
    for (Fld F : {Fld::E, Fld::H}) {
      for (Eigen::Index k = 0; k < N; ++k) {
        Vec3c at{0.0, 0.0, 0.0}, in;
        for (int t = 0; t < 2; ++t) at[ax[t]] = (Eigen::Index(BoundaryBasis::index(s, F, t)) == k) ? 1.0 : 0.0;
        for (int c = 0; c < 3; ++c) in[c] = X(Eigen::Index(interior_index(paving, m, F, c)), k);
        const Vec3c g = tangential_derivative(at, in, site);
        for (int t = 0; t < 2; ++t) dtn.L(Eigen::Index(BoundaryBasis::index(s, F, t)), k) = g[ax[t]];
      }
    }
  }
  return dtn;
}

Eigen::MatrixXcd DtNAccess::block(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  Eigen::MatrixXcd out(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    touched_.insert(cols[j]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      out(Eigen::Index(i), Eigen::Index(j)) = dtn_.L(Eigen::Index(rows[i]), Eigen::Index(cols[j]));
  }
  return out;
}

TangentialData DtNAccess::apply(const TangentialData& f) const {
  TangentialData out = TangentialData::Zero(dtn_.L.rows());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (f(k) == cdouble(0)) continue;
    touched_.insert(std::size_t(k));
    out += dtn_.L.col(k) * f(k);
  }
  return out;
}

Eigen::MatrixXcd DtNAccess::full() const {
  for (Eigen::Index k = 0; k < dtn_.L.cols(); ++k) touched_.insert(std::size_t(k));
  return dtn_.L;
}

CompletionIndices completion_indices(const BoundaryBasis& basis) {
  CompletionIndices idx;
  idx.dirichlet = basis.indices_where([](const BoundarySite& s) { return !(s.face_axis == 0 && s.face_sign > 0); });
  idx.neumann = basis.indices_where([](const BoundarySite& s) { return s.face_axis == 0 && s.face_sign < 0; });
  idx.far = basis.indices_where([](const BoundarySite& s) { return s.face_axis == 0 && s.face_sign > 0; });
  return idx;
}

CompletionOperator::CompletionOperator(const DtNAccess& dtn) : idx_(completion_indices(dtn.basis())) {
  const auto N = Eigen::Index(dtn.basis().dim());
  const auto nd = Eigen::Index(idx_.dirichlet.size());
  const auto nn = Eigen::Index(idx_.neumann.size());
  if (nd + nn != N) throw std::logic_error("completion operator is not square");
  Q_ = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index r = 0; r < nd; ++r) Q_(r, Eigen::Index(idx_.dirichlet[std::size_t(r)])) = 1.0;
  const Eigen::MatrixXcd L = dtn.full();
  for (Eigen::Index r = 0; r < nn; ++r) Q_.row(nd + r) = L.row(Eigen::Index(idx_.neumann[std::size_t(r)]));
  const auto sv = estimate_singular_values(Q_);
  if (!(sv.sigma_min >= 1e-12 * sv.sigma_max))
    throw SingularSystemError("completion operator Q is singular", sv.sigma_min, sv.sigma_max);
  lu_.compute(Q_);
}

TangentialData CompletionOperator::solve(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const {
  Eigen::VectorXcd rhs(f.size() + g.size());
  rhs << f, g;
  return lu_.solve(rhs);
}

Eigen::MatrixXcd CompletionOperator::inverse() const { return lu_.inverse(); }

double CompletionOperator::inversion_residual() const {
  const auto N = Q_.rows();
  return (inverse() * Q_ - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
}

CompletionOperator build_completion(const DtNAccess& dtn) { return CompletionOperator(dtn); }

TangentialData complete_dirichlet(const CompletionOperator& Q, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
  return Q.solve(f, g);
}

bool in_partial_support(const BoundaryBasis& basis, std::size_t column) {
  const auto& s = basis.sites()[column / 4];
  return s.face_axis == 0 || (s.face_axis == 1 && s.face_sign > 0);
}

TangentialData complete_dirichlet_partial(const DtNAccess& dtn, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
  const BoundaryBasis& basis = dtn.basis();
  const CompletionIndices idx = completion_indices(basis);
  std::vector<std::size_t> support;
  Eigen::VectorXcd fs;
  std::vector<cdouble> vals;
  for (std::size_t r = 0; r < idx.dirichlet.size(); ++r) {
    const std::size_t k = idx.dirichlet[r];
    if (in_partial_support(basis, k)) {
      support.push_back(k);
      vals.push_back(f(Eigen::Index(r)));
    } else if (f(Eigen::Index(r)) != cdouble(0)) {
      throw ValidationError("partial-data mode requires zero Dirichlet data on dOmega_2^- and dOmega_3");
    }
  }
  fs = Eigen::Map<Eigen::VectorXcd>(vals.data(), Eigen::Index(vals.size()));
  const Eigen::MatrixXcd Lfar = dtn.block(idx.neumann, idx.far);
  const Eigen::MatrixXcd Lsup = dtn.block(idx.neumann, support);
  const Eigen::VectorXcd x = Lfar.partialPivLu().solve(g - Lsup * fs);
  TangentialData out = TangentialData::Zero(Eigen::Index(basis.dim()));
  for (std::size_t r = 0; r < idx.dirichlet.size(); ++r) out(Eigen::Index(idx.dirichlet[r])) = f(Eigen::Index(r));
  for (std::size_t r = 0; r < idx.far.size(); ++r) out(Eigen::Index(idx.far[r])) = x(Eigen::Index(r));
  return out;
}

BoundaryValuePacket extract_packet(const BoundaryBasis& basis, const TangentialData& f_full,
                                   const TangentialData& lambda_f, int q) {
  return BoundaryValuePacket(cauchy_from_traces(basis, f_full, lambda_f), q);
}

}  // namespace lc
