#pragma once

#include <optional>
#include <set>
#include <vector>

#include "lattice_calderon/dtn.hpp"
#include "lattice_calderon/special_solutions.hpp"

namespace lc {

// Entries of V recovered so far. Monotone: an entry is written once and never overwritten.
// Outside Omega every entry is 1.
class KnownPotentialState {
 public:
  explicit KnownPotentialState(const Paving& paving);

  const Paving& paving() const { return paving_; }
  bool known(Fld f, int comp, const Point3& n) const;
  // Throws MissingPotentialError for an unknown entry of Omega.
  cdouble get(Fld f, int comp, const Point3& n) const;
  // Throws std::logic_error on a second write of the same entry.
  void assign(Fld f, int comp, const Point3& n, cdouble v);
  std::size_t known_count() const { return count_; }
  bool complete() const { return count_ == 6 * paving_.volume(); }
  // Lookup for the solver routines; holds a reference to this state.
  PotentialLookup lookup() const;
  // Throws MissingPotentialError unless complete.
  DiagonalPotential to_potential() const;

 private:
  Paving paving_;
  std::vector<std::optional<cdouble>> entries_;
  std::size_t count_ = 0;
};

struct ReconstructionOptions {
  double tau = 1.0;       // first tau of the pair
  double tau_gap = 0.5;   // tau' = tau + tau_gap
  double tau_step = 0.5;  // escalation increment
  double tau_max = 6.0;   // last admissible first tau
  bool partial_data = false;
  double divisor_tol = 1e-10;  // relative to the local magnitude scale
  bool self_check = true;
  double self_check_tol = 1e-6;
};

// Full Cauchy data of v(;p) from the DtN matrix and V-free boundary prescriptions. With Q null,
// completion uses only the partial-data block.
CauchyData measure_v(const DtNAccess& dtn, const CompletionOperator* Q, const SpecialParams& params);

struct PlaneStats {
  int p = 0;
  double tau = 0, tau_prime = 0;
  int escalations = 0;
  double min_divisor_ratio = 0;  // smallest divisor over its local scale
  double min_det_ratio = 0;      // smallest |det| of the tau 2x2 systems over its scale
  std::size_t entries_added = 0;
};

struct ReconstructionReport {
  std::vector<PlaneStats> planes;
  std::set<std::size_t> touched_columns;
  double completion_residual = 0;  // ||Q^{-1}Q - I||_max, full-data mode only
  double self_check_residual = 0;  // max |Lambda(V_rec) - Lambda| / max |Lambda| over consumed columns
  bool self_check_ok = true;
  bool self_check_run = false;
};

struct ReconstructionResult {
  DiagonalPotential potential;
  MaterialTensor material;
  ReconstructionReport report;
};

// Recovers V plane by plane from p = R1+R2 down to 1, then D_a. Reads nothing but the DtN matrix.
ReconstructionResult reconstruct(const DtNMatrix& dtn, const ReconstructionOptions& options = {});

struct Measurement {
  SpecialParams params;
  CauchyData data;
};

// One plane of the recursion, exposed for oracle testing. Both measurements share p and differ in
// tau. Adds V_{1,2} on E_0(p) and V_3 on E_0(p+1); returns false with the state untouched when a
// divisor or a tau system falls below the tolerance.
bool recover_plane(const Measurement& first, const Measurement& second, KnownPotentialState& state,
                   const ReconstructionOptions& options, PlaneStats& stats);

}  // namespace lc
