#include "lattice_calderon/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lattice_calderon/concurrency.hpp"

namespace lc {

namespace {

constexpr cdouble kI(0.0, 1.0);

// Curl stencil: (M v)_c = (2i)^{-1} sum sign * D_axis v_comp.
struct CurlTerm {
  double sign;
  int comp;
  int axis;
};
constexpr CurlTerm kCurl[3][2] = {{{-1, 1, 2}, {1, 2, 1}}, {{1, 0, 2}, {-1, 2, 0}}, {{-1, 0, 1}, {1, 1, 0}}};

struct Pairing {
  Fld X, Y;
  double sgn;
};
// M u^X = sgn V^Y u^Y.
constexpr Pairing kPairs[2] = {{Fld::E, Fld::H, 1.0}, {Fld::H, Fld::E, -1.0}};

}  // namespace

BoundaryBasis::BoundaryBasis(const Paving& paving) : paving_(paving), sites_(boundary_sites(paving)) {
  std::size_t off = 0;
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t face = std::size_t(paving.R((axis + 1) % 3)) * paving.R((axis + 2) % 3);
    face_offset_[2 * axis] = off;
    off += face;
    face_offset_[2 * axis + 1] = off;
    off += face;
  }
}

int BoundaryBasis::slot_of(std::size_t site, int comp) const {
  const auto ax = sites_[site].tangential_axes();
  if (ax[0] == comp) return 0;
  if (ax[1] == comp) return 1;
  return -1;
}

std::size_t BoundaryBasis::site_index(const Point3& n) const {
  BoundarySite s;
  if (!classify_boundary(paving_, n, s)) throw UndefinedValueError("not a boundary point: " + point_string(n));
  const auto [a, b] = s.tangential_axes();
  const std::size_t within = std::size_t(n[a] - 1) * paving_.R(b) + std::size_t(n[b] - 1);
  return face_offset_[2 * s.face_axis + (s.face_sign > 0 ? 1 : 0)] + within;
}

std::vector<std::size_t> BoundaryBasis::indices_where(const std::function<bool(const BoundarySite&)>& pred) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < sites_.size(); ++s)
    if (pred(sites_[s]))
      for (std::size_t k = 0; k < 4; ++k) out.push_back(4 * s + k);
  return out;
}

PotentialLookup lookup_of(const DiagonalPotential& V) {
  return [&V](Fld f, int c, const Point3& n) { return V(f, c, n); };
}

DirichletSystem assemble_dirichlet_system(const PotentialLookup& V, const Paving& paving) {
  const BoundaryBasis basis(paving);
  const std::size_t N = 6 * paving.volume();
  DirichletSystem sys{paving, Eigen::MatrixXcd::Zero(Eigen::Index(N), Eigen::Index(N)),
                      Eigen::MatrixXcd::Zero(Eigen::Index(N), Eigen::Index(basis.dim()))};
  const cdouble inv2i = 1.0 / (2.0 * kI);
  for (std::size_t lin = 0; lin < paving.volume(); ++lin) {
    const Point3 n = paving.site(lin);
    for (const auto& pr : kPairs) {
      for (int c = 0; c < 3; ++c) {
        const auto r = Eigen::Index(interior_index(paving, n, pr.X, c));
        for (const auto& t : kCurl[c]) {
          for (int side : {1, -1}) {
            const Point3 nb = n + unit(t.axis, side);
            const cdouble coef = inv2i * t.sign * double(side);
            if (paving.contains(nb)) {
              sys.A(r, Eigen::Index(interior_index(paving, nb, pr.X, t.comp))) += coef;
            } else {
              const std::size_t s = basis.site_index(nb);
              sys.B(r, Eigen::Index(BoundaryBasis::index(s, pr.X, basis.slot_of(s, t.comp)))) += coef;
            }
          }
        }
        sys.A(r, Eigen::Index(interior_index(paving, n, pr.Y, c))) += -pr.sgn * V(pr.Y, c, n);
      }
    }
  }
  if (sys.A.rows() != sys.A.cols()) throw std::logic_error("Dirichlet system is not square");
  return sys;
}

DirichletSystem assemble_dirichlet_system(const DiagonalPotential& V) {
  return assemble_dirichlet_system(lookup_of(V), V.paving());
}

SingularValueEstimate estimate_singular_values(const Eigen::MatrixXcd& A) {
  SingularValueEstimate est;
  if (A.rows() <= 1000) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    est.sigma_max = s(0);
    est.sigma_min = s(s.size() - 1);
    return est;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const Eigen::MatrixXcd AH = A.adjoint();
  Eigen::PartialPivLU<Eigen::MatrixXcd> luh(AH);
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(A.cols()).normalized();
  for (int it = 0; it < 40; ++it) x = (A.adjoint() * (A * x)).normalized();
  est.sigma_max = (A * x).norm();
  Eigen::VectorXcd y = Eigen::VectorXcd::Ones(A.cols()).normalized();
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXcd z = lu.solve(Eigen::VectorXcd(luh.solve(y)));
    if (!z.allFinite() || z.norm() == 0.0) {
      est.sigma_min = 0;
      return est;
    }
    y = z.normalized();
  }
  est.sigma_min = 1.0 / luh.solve(y).norm();
  return est;
}

DirichletSolver::DirichletSolver(const DiagonalPotential& V) : DirichletSolver(assemble_dirichlet_system(V)) {}

DirichletSolver::DirichletSolver(DirichletSystem system) : system_(std::move(system)) {
  sv_ = estimate_singular_values(system_.A);
  if (!(sv_.sigma_min >= 1e-10 * sv_.sigma_max)) {
    std::ostringstream msg;
    msg << std::scientific << std::setprecision(3) << "Dirichlet system is singular: sigma_min = " << sv_.sigma_min
        << ", ||A|| = " << sv_.sigma_max;
    throw SingularSystemError(msg.str(), sv_.sigma_min, sv_.sigma_max);
  }
  lu_.compute(system_.A);
}

Eigen::MatrixXcd DirichletSolver::solve_interior(const Eigen::MatrixXcd& F) const {
  Eigen::MatrixXcd rhs = -(system_.B * F);
  Eigen::MatrixXcd X(rhs.rows(), rhs.cols());
  parallel_for(std::size_t(rhs.cols()), [&](std::size_t j) {
    X.col(Eigen::Index(j)) = lu_.solve(rhs.col(Eigen::Index(j)));
  });
  return X;
}

Field DirichletSolver::solve(const TangentialData& f) const {
  const Eigen::VectorXcd x = solve_interior(f);
  return field_from_solution(system_.paving, x, f);
}

Field solve_dirichlet(const DiagonalPotential& V, const TangentialData& f) { return DirichletSolver(V).solve(f); }

Field field_from_solution(const Paving& paving, const Eigen::VectorXcd& interior, const TangentialData& f) {
  const BoundaryBasis basis(paving);
  Field u = Field::on_closure(paving);
  for (std::size_t lin = 0; lin < paving.volume(); ++lin) {
    const Point3 n = paving.site(lin);
    for (Fld F : {Fld::E, Fld::H})
      for (int c = 0; c < 3; ++c) u.set(F, c, n, interior(Eigen::Index(interior_index(paving, n, F, c))));
  }
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    for (Fld F : {Fld::E, Fld::H})
      for (int t = 0; t < 2; ++t) u.set(F, ax[t], site.point, f(Eigen::Index(BoundaryBasis::index(s, F, t))));
  }
  return u;
}

TangentialData dirichlet_trace(const Field& u, const BoundaryBasis& basis) {
  TangentialData f(Eigen::Index(basis.dim()));
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    for (Fld F : {Fld::E, Fld::H})
      for (int t = 0; t < 2; ++t) f(Eigen::Index(BoundaryBasis::index(s, F, t))) = u.get(F, ax[t], site.point);
  }
  return f;
}

TangentialData neumann_trace(const Field& u, const BoundaryBasis& basis) {
  TangentialData g(Eigen::Index(basis.dim()));
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    for (Fld F : {Fld::E, Fld::H}) {
      Vec3c at{0.0, 0.0, 0.0};
      for (int a : ax) at[a] = u.get(F, a, site.point);
      const Vec3c d = tangential_derivative(at, u.vec(F, site.inner()), site);
      for (int t = 0; t < 2; ++t) g(Eigen::Index(BoundaryBasis::index(s, F, t))) = d[ax[t]];
    }
  }
  return g;
}

double lattice_residual(const Field& u, const PotentialLookup& V, const Paving& paving) {
  double r = 0;
  for (std::size_t lin = 0; lin < paving.volume(); ++lin) {
    const Point3 n = paving.site(lin);
    for (const auto& pr : kPairs) {
      const auto m = curl(u, pr.X, n);
      for (int c = 0; c < 3; ++c) r = std::max(r, std::abs(m[c] - pr.sgn * V(pr.Y, c, n) * u.get(pr.Y, c, n)));
    }
  }
  return r;
}

double eigenvalue_indicator(const MaterialTensor& m, cdouble lambda) {
  const DiagonalPotential V = potential_from_material(m, lambda);
  return estimate_singular_values(assemble_dirichlet_system(V).A).sigma_min;
}

std::vector<cdouble> dirichlet_eigenvalues(const MaterialTensor& m) {
  // A(lambda) = C + lambda G with G the potential part at lambda = 1; eigenvalues of -G^{-1} C.
  const DiagonalPotential V1 = potential_from_material(m, 1.0);
  const Paving& paving = m.paving;
  const PotentialLookup zero = [](Fld, int, const Point3&) { return cdouble(0); };
  const Eigen::MatrixXcd C = assemble_dirichlet_system(zero, paving).A;
  const Eigen::MatrixXcd G = assemble_dirichlet_system(V1).A - C;
  const Eigen::MatrixXcd T = -G.partialPivLu().solve(C);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, false);
  std::vector<cdouble> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cdouble a, cdouble b) { return std::abs(a) < std::abs(b); });
  return ev;
}

namespace {

// Normal component at m: u^X_1(m) = (D2 u^Y_3 - D3 u^Y_2)(m) / (-sgn 2i V^X_1(m)).
cdouble solve_normal(const PotentialLookup& V, const Field& u, const Pairing& pr, const Point3& m) {
  const cdouble num = difference(u, pr.Y, 2, m, 1) - difference(u, pr.Y, 1, m, 2);
  return num / (-pr.sgn * 2.0 * kI * V(pr.X, 0, m));
}

// Tangential step at n: u^X_2(n+e1), u^X_3(n+e1).
std::array<cdouble, 2> step_tangential(const PotentialLookup& V, const Field& u, const Pairing& pr, const Point3& n) {
  const Point3 back = n - unit(0);
  const cdouble u2 = pr.sgn * 2.0 * kI * V(pr.Y, 2, n) * u.get(pr.Y, 2, n) + difference(u, pr.X, 0, n, 1) +
                     u.get(pr.X, 1, back);
  const cdouble u3 = -pr.sgn * 2.0 * kI * V(pr.Y, 1, n) * u.get(pr.Y, 1, n) + difference(u, pr.X, 0, n, 2) +
                     u.get(pr.X, 2, back);
  return {u2, u3};
}

}  // namespace

Field solve_mixed(const PotentialLookup& V, const MixedBoundaryData& data, const Paving& paving) {
  const BoundaryBasis basis(paving);
  Field u = Field::on_closure(paving);
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    if (site.face_axis == 0 && site.face_sign > 0) continue;
    const auto ax = site.tangential_axes();
    for (Fld F : {Fld::E, Fld::H})
      for (int t = 0; t < 2; ++t)
        u.set(F, ax[t], site.point, data.dirichlet(Eigen::Index(BoundaryBasis::index(s, F, t))));
  }
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    if (!(site.face_axis == 0 && site.face_sign < 0)) continue;
    for (Fld F : {Fld::E, Fld::H}) {
      Vec3c g{0.0, 0.0, 0.0};
      for (int t = 0; t < 2; ++t)
        g[site.tangential_axes()[t]] = data.neumann(Eigen::Index(BoundaryBasis::index(s, F, t)));
      const Vec3c d = wedge_inverse(g, site);
      for (int c : {1, 2}) u.set(F, c, site.inner(), u.get(F, c, site.point) - d[c]);
    }
  }
  for (int n1 = 1; n1 <= paving.R1; ++n1) {
    for (int n2 = 1; n2 <= paving.R2; ++n2)
      for (int n3 = 1; n3 <= paving.R3; ++n3)
        for (const auto& pr : kPairs) u.set(pr.X, 0, {n1, n2, n3}, solve_normal(V, u, pr, {n1, n2, n3}));
    for (int n2 = 1; n2 <= paving.R2; ++n2)
      for (int n3 = 1; n3 <= paving.R3; ++n3)
        for (const auto& pr : kPairs) {
          const auto v = step_tangential(V, u, pr, {n1, n2, n3});
          u.set(pr.X, 1, {n1 + 1, n2, n3}, v[0]);
          u.set(pr.X, 2, {n1 + 1, n2, n3}, v[1]);
        }
  }
  return u;
}

Field solve_mixed(const DiagonalPotential& V, const MixedBoundaryData& data) {
  return solve_mixed(lookup_of(V), data, V.paving());
}

Field make_march_window(const Paving& paving, int n1_max) {
  const int M = 2 * n1_max + 2;
  return Field({-1, 1 - M, 1 - M}, {n1_max, paving.R2 + M, paving.R3 + M});
}

void march_forward(const PotentialLookup& V, Field& u, const Paving& paving, int n1_max) {
  const Point3 lo = u.lo(), hi = u.hi();
  if (lo.n1 > -1 || hi.n1 < n1_max) throw WindowExhaustedError("march window does not span the requested layers");
  for (int n1 = 0; n1 < n1_max; ++n1) {
    for (int n2 = lo.n2; n2 <= hi.n2; ++n2)
      for (int n3 = lo.n3; n3 <= hi.n3; ++n3)
        for (const auto& pr : kPairs) {
          try {
            const auto v = step_tangential(V, u, pr, {n1, n2, n3});
            u.set(pr.X, 1, {n1 + 1, n2, n3}, v[0]);
            u.set(pr.X, 2, {n1 + 1, n2, n3}, v[1]);
          } catch (const UndefinedValueError&) {
          }
        }
    for (int n2 = lo.n2; n2 <= hi.n2; ++n2)
      for (int n3 = lo.n3; n3 <= hi.n3; ++n3)
        for (const auto& pr : kPairs) {
          try {
            u.set(pr.X, 0, {n1 + 1, n2, n3}, solve_normal(V, u, pr, {n1 + 1, n2, n3}));
          } catch (const UndefinedValueError&) {
          }
        }
  }
  for (int n1 = 0; n1 <= n1_max; ++n1)
    for (int n2 = 0; n2 <= paving.R2 + 1; ++n2)
      for (int n3 = 0; n3 <= paving.R3 + 1; ++n3)
        for (Fld F : {Fld::E, Fld::H})
          for (int c = 0; c < 3; ++c)
            if (!u.defined(F, c, {n1, n2, n3}))
              throw WindowExhaustedError("march window exhausted at " + point_string({n1, n2, n3}));
}

cdouble CauchyData::dirichlet_value(const Point3& n, Fld f, int comp) const {
  const std::size_t s = basis.site_index(n);
  const int t = basis.slot_of(s, comp);
  if (t < 0) throw UndefinedValueError("normal component requested at " + point_string(n));
  return dirichlet(Eigen::Index(BoundaryBasis::index(s, f, t)));
}

cdouble CauchyData::inner_value(const Point3& n, Fld f, int comp) const {
  const std::size_t s = basis.site_index(n);
  const int t = basis.slot_of(s, comp);
  if (t < 0) throw UndefinedValueError("normal inner component requested at " + point_string(n));
  return inner(Eigen::Index(BoundaryBasis::index(s, f, t)));
}

CauchyData cauchy_from_field(const Field& u, const BoundaryBasis& basis) {
  CauchyData cd{basis, dirichlet_trace(u, basis), TangentialData(Eigen::Index(basis.dim()))};
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    for (Fld F : {Fld::E, Fld::H})
      for (int t = 0; t < 2; ++t) cd.inner(Eigen::Index(BoundaryBasis::index(s, F, t))) = u.get(F, ax[t], site.inner());
  }
  return cd;
}

CauchyData cauchy_from_traces(const BoundaryBasis& basis, const TangentialData& f, const TangentialData& lambda_f) {
  CauchyData cd{basis, f, TangentialData(Eigen::Index(basis.dim()))};
  for (std::size_t s = 0; s < basis.sites().size(); ++s) {
    const auto& site = basis.sites()[s];
    const auto ax = site.tangential_axes();
    for (Fld F : {Fld::E, Fld::H}) {
      Vec3c g{0.0, 0.0, 0.0};
      for (int t = 0; t < 2; ++t) g[ax[t]] = lambda_f(Eigen::Index(BoundaryBasis::index(s, F, t)));
      const Vec3c d = wedge_inverse(g, site);
      for (int t = 0; t < 2; ++t) {
        const auto k = Eigen::Index(BoundaryBasis::index(s, F, t));
        cd.inner(k) = f(k) - d[ax[t]];
      }
    }
  }
  return cd;
}

BoundaryValuePacket::BoundaryValuePacket(CauchyData data, int q) : data_(std::move(data)), q_(q) {
  // Drop values outside the packet so that stray reads cannot succeed silently.
  const auto& sites = data_.basis.sites();
  for (std::size_t s = 0; s < sites.size(); ++s)
    if (!covers(sites[s].point))
      for (std::size_t k = 0; k < 4; ++k) {
        data_.dirichlet(Eigen::Index(4 * s + k)) = std::nan("");
        data_.inner(Eigen::Index(4 * s + k)) = std::nan("");
      }
}

cdouble BoundaryValuePacket::dirichlet_value(const Point3& n, Fld f, int comp) const {
  if (!covers(n)) throw UndefinedValueError("packet does not cover " + point_string(n));
  return data_.dirichlet_value(n, f, comp);
}

cdouble BoundaryValuePacket::inner_value(const Point3& n, Fld f, int comp) const {
  if (!covers(n)) throw UndefinedValueError("packet does not cover " + point_string(n));
  return data_.inner_value(n, f, comp);
}

BoundaryValuePacket BoundaryValuePacket::scaled(cdouble c) const {
  BoundaryValuePacket p = *this;
  p.data_.dirichlet *= c;
  p.data_.inner *= c;
  return p;
}

Field propagate_backward(const PotentialLookup& V, const BoundaryValuePacket& packet) {
  const Paving& paving = packet.paving();
  const int q = packet.q();
  const BoundaryBasis basis(paving);
  Field u = Field::on_closure(paving);
  for (const auto& site : basis.sites()) {
    if (!packet.covers(site.point)) continue;
    for (int a : site.tangential_axes())
      for (Fld F : {Fld::E, Fld::H}) u.set(F, a, site.point, packet.dirichlet_value(site.point, F, a));
  }
  const int R1 = paving.R1;
  for (int n1 = R1; n1 >= 1; --n1) {
    for (int n2 = 1; n2 <= paving.R2; ++n2)
      for (int n3 = 1; n3 <= paving.R3; ++n3) {
        const Point3 n{n1, n2, n3};
        const int pl = plane_index(n);
        if (pl < q - 1) continue;
        const bool full = pl >= q;
        for (const auto& pr : kPairs) {
          if (n1 == R1) {
            const Point3 b = n + unit(0);
            if (full) u.set(pr.X, 1, n, packet.inner_value(b, pr.X, 1));
            u.set(pr.X, 2, n, packet.inner_value(b, pr.X, 2));
            continue;
          }
          // Reversed tangential step at b = n + e1.
          const Point3 b = n + unit(0);
          const Point3 b2 = b + unit(0);
          if (full)
            u.set(pr.X, 1, n,
                  u.get(pr.X, 1, b2) - pr.sgn * 2.0 * kI * V(pr.Y, 2, b) * u.get(pr.Y, 2, b) -
                      difference(u, pr.X, 0, b, 1));
          u.set(pr.X, 2, n,
                u.get(pr.X, 2, b2) + pr.sgn * 2.0 * kI * V(pr.Y, 1, b) * u.get(pr.Y, 1, b) -
                    difference(u, pr.X, 0, b, 2));
        }
      }
    for (int n2 = 1; n2 <= paving.R2; ++n2)
      for (int n3 = 1; n3 <= paving.R3; ++n3) {
        const Point3 m{n1, n2, n3};
        if (plane_index(m) < q) continue;
        for (const auto& pr : kPairs) u.set(pr.X, 0, m, solve_normal(V, u, pr, m));
      }
  }
  return u;
}

}  // namespace lc
