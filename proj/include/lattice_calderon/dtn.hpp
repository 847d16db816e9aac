#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

#include "lattice_calderon/solver.hpp"

namespace lc {

inline constexpr const char* kBasisTag = "face-major-lex-v1";

struct DtNMatrix {
  Paving paving;
  cdouble lambda{1.0, 0.0};
  Eigen::MatrixXcd L;  // N_adm x N_adm, canonical basis
};

// Column k is the tangential derivative of the solution with data e_k; one factorization.
DtNMatrix assemble_dtn(const DiagonalPotential& V, cdouble lambda);
DtNMatrix assemble_dtn(const DirichletSolver& solver, cdouble lambda);

// Read access to a DtN matrix that records which columns were consumed.
class DtNAccess {
 public:
  explicit DtNAccess(const DtNMatrix& dtn) : dtn_(dtn), basis_(dtn.paving) {}
  const DtNMatrix& matrix_info() const { return dtn_; }
  const BoundaryBasis& basis() const { return basis_; }
  // Lambda[rows, cols]; every listed column is recorded as touched.
  Eigen::MatrixXcd block(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  // Lambda f, touching only columns where f is nonzero.
  TangentialData apply(const TangentialData& f) const;
  Eigen::MatrixXcd full() const;
  const std::set<std::size_t>& touched_columns() const { return touched_; }

 private:
  const DtNMatrix& dtn_;
  BoundaryBasis basis_;
  mutable std::set<std::size_t> touched_;
};

// Row/column index sets of the completion operator.
struct CompletionIndices {
  std::vector<std::size_t> dirichlet;  // sites not on dOmega_1^+
  std::vector<std::size_t> neumann;    // sites on dOmega_1^-
  std::vector<std::size_t> far;        // sites on dOmega_1^+
};
CompletionIndices completion_indices(const BoundaryBasis& basis);

// Q f~ = (f~ restricted to dOmega minus dOmega_1^+, (Lambda f~) restricted to dOmega_1^-).
class CompletionOperator {
 public:
  explicit CompletionOperator(const DtNAccess& dtn);
  const Eigen::MatrixXcd& matrix() const { return Q_; }
  const CompletionIndices& indices() const { return idx_; }
  // Solves Q f~ = (f, g); f over indices().dirichlet, g over indices().neumann.
  TangentialData solve(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const;
  Eigen::MatrixXcd inverse() const;
  double inversion_residual() const;

 private:
  CompletionIndices idx_;
  Eigen::MatrixXcd Q_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

CompletionOperator build_completion(const DtNAccess& dtn);

// Full Dirichlet data agreeing with f off dOmega_1^+ and with Lambda f~ = g on dOmega_1^-.
TangentialData complete_dirichlet(const CompletionOperator& Q, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

// Partial-data completion: f must vanish on dOmega_2^- and dOmega_3. Solves only the block
// Lambda[dOmega_1^-, dOmega_1^+] and touches columns on dOmega_1 and dOmega_2^+ only.
TangentialData complete_dirichlet_partial(const DtNAccess& dtn, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

// Whether a basis column belongs to the partial-data support dOmega_1 cup dOmega_2^+.
bool in_partial_support(const BoundaryBasis& basis, std::size_t column);

BoundaryValuePacket extract_packet(const BoundaryBasis& basis, const TangentialData& f_full,
                                   const TangentialData& lambda_f, int q);

}  // namespace lc
