#include "lattice_calderon/special_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lc {

namespace {

constexpr cdouble kI(0.0, 1.0);

struct Pairing {
  Fld X, Y;
  double sgn;
};
constexpr Pairing kPairs[2] = {{Fld::E, Fld::H, 1.0}, {Fld::H, Fld::E, -1.0}};

using Getter = std::function<cdouble(Fld, int, const Point3&)>;

class Recorder {
 public:
  explicit Recorder(RelationReport& r) : r_(r) {}
  void add(const std::string& name, cdouble lhs, cdouble rhs, double floor) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), floor});
    record(name, std::abs(lhs - rhs) / scale);
  }
  void zero(const std::string& name, cdouble value, double scale) { record(name, std::abs(value) / scale); }

 private:
  void record(const std::string& name, double v) {
    auto& slot = r_.residual[name];
    slot = std::max(slot, v);
    ++r_.count[name];
  }
  RelationReport& r_;
};

template <class Fn>
void for_plane(const Paving& paving, int p, Fn&& fn) {
  for (int n1 = 1; n1 <= paving.R1; ++n1) {
    const int n2 = p - n1;
    if (n2 < 1 || n2 > paving.R2) continue;
    for (int n3 = 1; n3 <= paving.R3; ++n3) fn(Point3{n1, n2, n3});
  }
}

// Getter reading a closure field on n1 >= 1 and the w extension on n1 <= 0.
Getter extended(const Field& v, const Field& w) {
  return [&v, &w](Fld f, int c, const Point3& n) { return n.n1 <= 0 ? w.get(f, c, n) : v.get(f, c, n); };
}

void closed_forms(const Getter& g, const PotentialLookup& V, const SpecialParams& prm, const Paving& paving,
                  RelationReport& report) {
  Recorder rec(report);
  const AWeights A(V, prm.p, paving);
  const double tau = prm.tau;
  for_plane(paving, prm.p, [&](const Point3& n) {
    const cdouble s = weight(prm, n.n3), sp = weight(prm, n.n3 + 1);
    const double fl = std::abs(s);
    const Point3 up = n + unit(2), dn = n - unit(2);
    for (const auto& pr : kPairs) {
      const Fld X = pr.X, Y = pr.Y;
      const double sig = mode_sign(X);
      rec.add("closed.v1", g(X, 0, n), sig * diagonal_sign(n.n1) * s * A(X, n.n1, n.n3), fl);
      rec.add("closed.v2", g(X, 1, n), sig * diagonal_sign(n.n1 - 1) * s * A(X, n.n1 - 1, n.n3), fl);
      // V_2 closed form through F and L.
      const cdouble F = -pr.sgn * 2.0 * kI * V(X, 1, n) * g(X, 1, n) - g(Y, 1, up) + g(Y, 1, dn);
      const cdouble L = F / (kI * diagonal_sign(n.n1 - 1) * s);
      const cdouble rhs =
          L - sig * (std::exp(tau) * A(Y, n.n1 - 1, n.n3 + 1) + std::exp(-tau) * A(Y, n.n1 - 1, n.n3 - 1));
      rec.add("closed.V2", 2.0 * V(X, 1, n) * A(X, n.n1 - 1, n.n3), rhs, 1.0);
      // K recursion against G.
      const cdouble G = (g(X, 0, up) - g(X, 1, up)) - (g(X, 0, dn) - g(X, 1, dn));
      const cdouble lhs7 = diagonal_sign(n.n1) * k_weight(A, X, n.n1, n.n3, tau) -
                           diagonal_sign(n.n1 - 1) * k_weight(A, X, n.n1 - 1, n.n3, tau);
      rec.add("closed.K_recursion", lhs7, sig * G / sp, 1.0);
      // G = F^Y + u^X_3(n + e1).
      const cdouble FY = -(-pr.sgn) * 2.0 * kI * V(Y, 1, n) * g(Y, 1, n) - g(X, 1, up) + g(X, 1, dn);
      rec.add("closed.G", G, FY + g(X, 2, n + unit(0)), fl);
    }
  });
  for_plane(paving, prm.p + 1, [&](const Point3& n) {
    const cdouble sp = weight(prm, n.n3 + 1);
    const Point3 back = n - unit(0);
    for (const auto& pr : kPairs) {
      const Fld X = pr.X, Y = pr.Y;
      const cdouble closed = mode_sign(X) * sp * diagonal_sign(n.n1 - 1) * k_weight(A, X, n.n1 - 1, n.n3, tau) -
                             2.0 * sp * std::exp(-tau) * diagonal_sign(n.n1 - 2) * V(Y, 1, back) *
                                 A(Y, n.n1 - 2, n.n3);
      rec.add("closed.v3", g(X, 2, n), closed, std::abs(weight(prm, n.n3)));
    }
  });
}

void structural(const Getter& g, const PotentialLookup& V, const SpecialParams& prm, const Paving& paving,
                RelationReport& report) {
  Recorder rec(report);
  for (std::size_t lin = 0; lin < paving.volume(); ++lin) {
    const Point3 n = paving.site(lin);
    const double fl = std::abs(weight(prm, n.n3));
    const int pl = plane_index(n);
    for (Fld F : {Fld::E, Fld::H}) {
      if (pl < prm.p)
        for (int c = 0; c < 3; ++c) rec.zero("support.below_plane", g(F, c, n), fl);
      if (pl == prm.p) rec.zero("support.v3_on_plane", g(F, 2, n), fl);
    }
  }
  for_plane(paving, prm.p, [&](const Point3& n) {
    const double fl = std::abs(weight(prm, n.n3));
    const Point3 k = n - unit(0) + unit(1);
    for (Fld X : {Fld::E, Fld::H}) {
      rec.add("plane.v2_shift", g(X, 1, n), g(X, 0, k), fl);
      if (paving.contains(k)) rec.add("plane.v1_ratio", g(X, 0, n), -V(X, 1, k) / V(X, 0, n) * g(X, 1, k), fl);
    }
  });
  for_plane(paving, prm.p + 1, [&](const Point3& n) {
    const double fl = std::abs(weight(prm, n.n3));
    const Point3 e1 = unit(0), e2 = unit(1), e3 = unit(2);
    for (const auto& pr : kPairs) {
      const Fld X = pr.X, Y = pr.Y;
      const cdouble C = -g(X, 0, n + e2) + g(X, 1, n + e1);
      rec.add("v3.curl_balance", pr.sgn * 2.0 * kI * V(Y, 2, n) * g(Y, 2, n), g(X, 0, n - e2) - g(X, 1, n - e1) + C, fl);
      if (n.n1 + 1 <= paving.R1) {
        const Point3 b = n + e1;
        const cdouble D = g(X, 2, b + e1) + pr.sgn * 2.0 * kI * V(Y, 1, b) * g(Y, 1, b) - (g(X, 0, b + e3) - g(X, 0, b - e3));
        rec.add("v3.forward", g(X, 2, n), D, fl);
      }
      const Point3 k = n - e1;
      rec.add("v3.backward", g(X, 2, n),
              -pr.sgn * 2.0 * kI * V(Y, 1, k) * g(Y, 1, k) + g(X, 0, k + e3) - g(X, 0, k - e3), fl);
    }
  });
}

// sum_j V_j u_j(n+e_j) - V_j u_j(n-e_j) = 0 (discrete divergence of the curl).
void divergence(const Getter& g, const PotentialLookup& V, const SpecialParams& prm, const Paving& paving,
                bool need_interior_stencil, const std::string& name, RelationReport& report) {
  Recorder rec(report);
  for_plane(paving, prm.p + 1, [&](const Point3& n) {
    if (n.n1 < 2) return;
    if (need_interior_stencil)
      for (int j = 0; j < 3; ++j)
        if (!paving.contains(n + unit(j)) || !paving.contains(n - unit(j))) return;
    for (Fld X : {Fld::E, Fld::H}) {
      cdouble plus = 0, minus = 0;
      for (int j = 0; j < 3; ++j) {
        plus += V(X, j, n + unit(j)) * g(X, j, n + unit(j));
        minus += V(X, j, n - unit(j)) * g(X, j, n - unit(j));
      }
      rec.add(name, plus, minus, std::abs(weight(prm, n.n3)));
    }
  });
}

}  // namespace

void validate(const SpecialParams& params, const Paving& paving) {
  if (!(params.tau > 0)) throw ValidationError("tau must be positive");
  if (params.p < 1 || params.p > paving.R1 + paving.R2 + 1) throw ValidationError("plane index out of range");
}

cdouble weight(const SpecialParams& params, int n3) {
  static const cdouble ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return ipow[((n3 % 4) + 4) % 4] * std::exp(params.tau * double(n3 - params.n3_ref));
}

void init_w(const SpecialParams& params, Field& window, double amplitude) {
  const Point3 lo = window.lo(), hi = window.hi();
  for (int n2 = lo.n2; n2 <= hi.n2; ++n2)
    for (int n3 = lo.n3; n3 <= hi.n3; ++n3) {
      const cdouble s = n2 == params.p ? amplitude * weight(params, n3) : cdouble(0);
      for (Fld F : {Fld::E, Fld::H}) {
        window.set(F, 1, {-1, n2, n3}, 0.0);
        window.set(F, 2, {-1, n2, n3}, 0.0);
        window.set(F, 2, {0, n2, n3}, 0.0);
      }
      window.set(Fld::H, 0, {0, n2, n3}, s);
      window.set(Fld::H, 1, {0, n2, n3}, -s);
      window.set(Fld::E, 0, {0, n2, n3}, -s);
      window.set(Fld::E, 1, {0, n2, n3}, s);
    }
}

Field compute_w(const PotentialLookup& V, const SpecialParams& params, const Paving& paving, int n1_max) {
  if (n1_max < 0) n1_max = paving.R1 + 1;
  Field w = make_march_window(paving, n1_max);
  init_w(params, w);
  march_forward(V, w, paving, n1_max);
  return w;
}

MixedBoundaryData v_boundary_data(const SpecialParams& params, const Paving& paving) {
  validate(params, paving);
  const PotentialLookup unit_potential = [](Fld, int, const Point3&) { return cdouble(1.0); };
  const Field w = compute_w(unit_potential, params, paving, paving.R1);
  const BoundaryBasis basis(paving);
  MixedBoundaryData data{TangentialData::Zero(Eigen::Index(basis.dim())),
                         TangentialData::Zero(Eigen::Index(basis.dim()))};
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    const int pl = plane_index(site.point);
    for (Fld F : {Fld::E, Fld::H}) {
      const auto at = [&](int t) { return Eigen::Index(BoundaryBasis::index(s, F, t)); };
      if (site.face_axis == 0 && site.face_sign < 0) {
        Vec3c here{0.0, 0.0, 0.0};
        for (int t = 0; t < 2; ++t) {
          here[ax[t]] = w.get(F, ax[t], site.point);
          data.dirichlet(at(t)) = here[ax[t]];
        }
        const Vec3c g = tangential_derivative(here, w.vec(F, site.inner()), site);
        for (int t = 0; t < 2; ++t) data.neumann(at(t)) = g[ax[t]];
      } else if (site.face_axis == 1 && site.face_sign > 0) {
        // Tangential slots on dOmega_2 are components 1 and 3.
        if (pl == params.p) data.dirichlet(at(0)) = w.get(F, 0, site.point);
        if (pl == params.p + 1) data.dirichlet(at(1)) = w.get(F, 2, site.point);
      }
    }
  }
  return data;
}

Field compute_v(const PotentialLookup& V, const SpecialParams& params, const Paving& paving) {
  return solve_mixed(V, v_boundary_data(params, paving), paving);
}

AWeights::AWeights(const PotentialLookup& V, int p, const Paving& paving) : p_(p), V_(V) { (void)paving; }

cdouble AWeights::operator()(Fld f, int n1, int n3) const {
  cdouble a = 1.0;
  for (int j = n1; j >= 1; j -= 2) a *= V_(f, 1, {j - 1, p_ - j + 1, n3}) / V_(f, 0, {j, p_ - j, n3});
  return a;
}

cdouble k_weight(const AWeights& A, Fld f, int n1, int n3, double tau) {
  return A(f, n1, n3 + 1) + std::exp(-2.0 * tau) * A(f, n1, n3 - 1);
}

double RelationReport::max_residual() const {
  double m = 0;
  for (const auto& [k, v] : residual) m = std::max(m, v);
  return m;
}

RelationReport verify_relations(const Field& v, const PotentialLookup& V, const SpecialParams& params,
                                const Paving& paving) {
  validate(params, paving);
  const Field w = compute_w(V, params, paving);
  RelationReport report;
  const Getter gv = extended(v, w);
  const Getter gw = [&w](Fld f, int c, const Point3& n) { return w.get(f, c, n); };
  structural(gv, V, params, paving, report);
  divergence(gv, V, params, paving, true, "divergence(v)", report);
  divergence(gw, V, params, paving, false, "divergence(w)", report);
  closed_forms(gw, V, params, paving, report);
  return report;
}

RelationReport closed_forms_on_v(const Field& v, const PotentialLookup& V, const SpecialParams& params,
                                 const Paving& paving) {
  const Field w = compute_w(V, params, paving);
  RelationReport report;
  closed_forms(extended(v, w), V, params, paving, report);
  return report;
}

NonvanishingResult check_nonvanishing(const Field& v, const SpecialParams& params, const Paving& paving,
                                      double threshold) {
  NonvanishingResult r{true, std::numeric_limits<double>::infinity()};
  for_plane(paving, params.p + 1, [&](const Point3& n) {
    for (Fld F : {Fld::E, Fld::H})
      r.min_ratio = std::min(r.min_ratio, std::abs(v.get(F, 2, n)) / std::abs(weight(params, n.n3)));
  });
  r.ok = r.min_ratio > threshold;
  return r;
}

}  // namespace lc
