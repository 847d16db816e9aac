#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "lattice_calderon/geometry.hpp"
#include "lattice_calderon/operators.hpp"

namespace lc {

// Canonical basis of admissible boundary data ("face-major-lex-v1"): for each boundary site in
// canonical order, E then H, and within a field the two tangential components in ascending axis.
class BoundaryBasis {
 public:
  BoundaryBasis() = default;
  explicit BoundaryBasis(const Paving& paving);

  const Paving& paving() const { return paving_; }
  const std::vector<BoundarySite>& sites() const { return sites_; }
  std::size_t dim() const { return 4 * sites_.size(); }
  static std::size_t index(std::size_t site, Fld f, int t) { return 4 * site + 2 * std::size_t(f) + std::size_t(t); }
  // Slot t in {0,1} holding component comp at a site, or -1 when comp is normal there.
  int slot_of(std::size_t site, int comp) const;
  // Canonical index of a boundary point; throws when n is not in the boundary.
  std::size_t site_index(const Point3& n) const;
  bool on_face(std::size_t site, int axis, int sign) const {
    return sites_[site].face_axis == axis && sites_[site].face_sign == sign;
  }
  // Basis indices whose site satisfies pred, in canonical order.
  std::vector<std::size_t> indices_where(const std::function<bool(const BoundarySite&)>& pred) const;

 private:
  Paving paving_{};
  std::vector<BoundarySite> sites_;
  std::array<std::size_t, 6> face_offset_{};
};

using TangentialData = Eigen::VectorXcd;

// Dirichlet data on dOmega minus dOmega_1^+ and Neumann data on dOmega_1^-, both stored as
// full-length canonical vectors; entries outside the respective restriction domain are ignored.
struct MixedBoundaryData {
  TangentialData dirichlet;
  TangentialData neumann;
};

// Interior unknown ordering: 6 * lexicographic site index + 3 * field + component.
inline std::size_t interior_index(const Paving& paving, const Point3& n, Fld f, int comp) {
  return 6 * paving.linear_index(n) + std::size_t(slot(f, comp));
}

// Rows: the six scalar equations M u^E - V^H u^H = 0, M u^H + V^E u^E = 0 at each site of Omega.
// A acts on interior unknowns, B on canonical boundary data: A x + B f = 0.
struct DirichletSystem {
  Paving paving;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
};

using PotentialLookup = std::function<cdouble(Fld, int, const Point3&)>;
PotentialLookup lookup_of(const DiagonalPotential& V);

DirichletSystem assemble_dirichlet_system(const PotentialLookup& V, const Paving& paving);
DirichletSystem assemble_dirichlet_system(const DiagonalPotential& V);

struct SingularValueEstimate {
  double sigma_min = 0;
  double sigma_max = 0;
};
// Exact SVD below 1000 rows, otherwise inverse and direct power iteration on A^H A.
SingularValueEstimate estimate_singular_values(const Eigen::MatrixXcd& A);

// Factorized Dirichlet problem; rejects near-singular systems (sigma_min < 1e-10 ||A||).
class DirichletSolver {
 public:
  explicit DirichletSolver(const DiagonalPotential& V);
  explicit DirichletSolver(DirichletSystem system);

  const Paving& paving() const { return system_.paving; }
  const DirichletSystem& system() const { return system_; }
  const SingularValueEstimate& singular_values() const { return sv_; }
  // Interior unknowns for each column of boundary data.
  Eigen::MatrixXcd solve_interior(const Eigen::MatrixXcd& F) const;
  Field solve(const TangentialData& f) const;

 private:
  DirichletSystem system_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  SingularValueEstimate sv_;
};

Field solve_dirichlet(const DiagonalPotential& V, const TangentialData& f);

// Fills a closure field from interior unknowns and boundary data.
Field field_from_solution(const Paving& paving, const Eigen::VectorXcd& interior, const TangentialData& f);

// Tangential Dirichlet trace and tangential derivative of a closure field in the canonical basis.
TangentialData dirichlet_trace(const Field& u, const BoundaryBasis& basis);
TangentialData neumann_trace(const Field& u, const BoundaryBasis& basis);

// Max residual of the lattice equations over Omega.
double lattice_residual(const Field& u, const PotentialLookup& V, const Paving& paving);

double eigenvalue_indicator(const MaterialTensor& m, cdouble lambda);
// Values of lambda at which the Dirichlet system is singular (generalized eigenvalues).
std::vector<cdouble> dirichlet_eigenvalues(const MaterialTensor& m);

// Marching solution of the mixed problem: Dirichlet on dOmega minus dOmega_1^+, Neumann on dOmega_1^-.
Field solve_mixed(const PotentialLookup& V, const MixedBoundaryData& data, const Paving& paving);
Field solve_mixed(const DiagonalPotential& V, const MixedBoundaryData& data);

// Window for march_forward: n1 in [-1, n1_max], (n2,n3) extends Omega by 2*n1_max+2 per side.
Field make_march_window(const Paving& paving, int n1_max);

// Forward recursion from layers n1 in {-1,0}: u_{2,3} at -1 and 0, u_1 at 0. Every value whose
// stencil is available is produced; throws when the closure columns of Omega are not covered.
void march_forward(const PotentialLookup& V, Field& u, const Paving& paving, int n1_max);

// Dirichlet and inner tangential values at every boundary site, in the canonical basis.
struct CauchyData {
  BoundaryBasis basis;
  TangentialData dirichlet;
  TangentialData inner;

  cdouble dirichlet_value(const Point3& n, Fld f, int comp) const;
  // Tangential component comp at m_Omega(n) as seen from boundary site n.
  cdouble inner_value(const Point3& n, Fld f, int comp) const;
};

CauchyData cauchy_from_field(const Field& u, const BoundaryBasis& basis);
CauchyData cauchy_from_traces(const BoundaryBasis& basis, const TangentialData& f, const TangentialData& lambda_f);

// D(u;q): Cauchy data restricted to boundary sites with n1+n2 >= q-1.
class BoundaryValuePacket {
 public:
  BoundaryValuePacket(CauchyData data, int q);
  int q() const { return q_; }
  const Paving& paving() const { return data_.basis.paving(); }
  bool covers(const Point3& n) const { return plane_index(n) >= q_ - 1; }
  cdouble dirichlet_value(const Point3& n, Fld f, int comp) const;
  cdouble inner_value(const Point3& n, Fld f, int comp) const;
  BoundaryValuePacket scaled(cdouble c) const;

 private:
  CauchyData data_;
  int q_;
};

// Reconstructs u on E^+(q-1) cap Omega from D(u;q) by decreasing-n1 marching. Reads V_{1,2} on
// planes >= q and V_3 on planes >= q+1 only; u_3 is also produced on plane q-1.
Field propagate_backward(const PotentialLookup& V, const BoundaryValuePacket& packet);

}  // namespace lc
