#pragma once

#include <map>
#include <string>

#include "lattice_calderon/solver.hpp"

namespace lc {

struct SpecialParams {
  int p = 1;
  double tau = 1.0;
  int n3_ref = 0;  // weight offset: s(n3) = i^{n3} e^{tau (n3 - n3_ref)}
};

void validate(const SpecialParams& params, const Paving& paving);

// i^{n3} e^{tau (n3 - n3_ref)}, with i^{n3} by index mod 4.
cdouble weight(const SpecialParams& params, int n3);

// Field sign of the launched mode: w^E_1(0,p,.) = -s, w^H_1(0,p,.) = +s.
inline double mode_sign(Fld f) { return f == Fld::E ? -1.0 : 1.0; }
// (-1)^{floor(n/2)}: alternation of the diagonal values along a plane.
inline double diagonal_sign(int n) {
  const int k = n >= 0 ? n / 2 : -((-n + 1) / 2);
  return (k % 2 == 0) ? 1.0 : -1.0;
}

// Layers n1 in {-1,0} of w(;p): u_{2,3} = 0 at -1; at 0, u^H_1 = -u^H_2 = s delta_p(n2),
// u^E_1 = -u^E_2 = -s delta_p(n2), u_3 = 0.
void init_w(const SpecialParams& params, Field& window, double amplitude = 1.0);

// w(;p) marched to layer n1_max (default R1+1) with V extended by 1 outside Omega.
Field compute_w(const PotentialLookup& V, const SpecialParams& params, const Paving& paving, int n1_max = -1);

// Boundary prescription of v(;p); computed from w with V = 1 everywhere, hence independent of V.
MixedBoundaryData v_boundary_data(const SpecialParams& params, const Paving& paving);

Field compute_v(const PotentialLookup& V, const SpecialParams& params, const Paving& paving);

// Same-parity products along the plane: Atil(n1) = Atil(n1-2) V_2(n1-1,p-n1+1,n3)/V_1(n1,p-n1,n3),
// Atil = 1 for n1 <= 0.
class AWeights {
 public:
  AWeights(const PotentialLookup& V, int p, const Paving& paving);
  cdouble operator()(Fld f, int n1, int n3) const;
  int p() const { return p_; }

 private:
  int p_;
  PotentialLookup V_;
};

// K(n1,n3) = Atil(n1,n3+1) + e^{-2 tau} Atil(n1,n3-1).
cdouble k_weight(const AWeights& A, Fld f, int n1, int n3, double tau);

struct RelationReport {
  std::map<std::string, double> residual;  // max relative residual per relation
  std::map<std::string, int> count;        // number of evaluated sites
  double max_residual() const;
};

// Structural relations on v (support, in-plane, v_3 relations, divergence identity) and closed forms on
// w restricted to Omega (diagonal values, V_2, K recursion, v_3). Residuals are relative to |s(n3)|.
RelationReport verify_relations(const Field& v, const PotentialLookup& V, const SpecialParams& params,
                                const Paving& paving);

// Closed forms evaluated on v itself (informational; fails near dOmega_3).
RelationReport closed_forms_on_v(const Field& v, const PotentialLookup& V, const SpecialParams& params,
                                 const Paving& paving);

struct NonvanishingResult {
  bool ok = false;
  double min_ratio = 0;  // min |v^{E/H}_3(n)| / |s(n3)| over E_0(p+1) cap Omega
};
NonvanishingResult check_nonvanishing(const Field& v, const SpecialParams& params, const Paving& paving,
                                      double threshold = 1e-8);

}  // namespace lc
