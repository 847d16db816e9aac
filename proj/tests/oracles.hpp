#pragma once
// Independent references for the tests: a literal dense assembly of the lattice equations with
// its own unknown numbering, curl table and cross product. Shares only plain types with the library.

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include "lattice_calderon/reconstruction.hpp"
#include "lattice_calderon/rng.hpp"

namespace oracle {

using lc::cdouble;
using lc::Fld;
using lc::Point3;

// (M v)_c = (2i)^{-1} sum of sign * (v_comp(n + e_axis) - v_comp(n - e_axis)).
inline constexpr int kCurl[3][2][3] = {
    {{-1, 1, 2}, {1, 2, 1}}, {{1, 0, 2}, {-1, 2, 0}}, {{-1, 0, 1}, {1, 1, 0}}};

inline int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

struct Face {
  Point3 n;
  int axis;
  int sign;
};

inline bool inside(const lc::Paving& p, const Point3& n) {
  return n.n1 >= 1 && n.n1 <= p.R1 && n.n2 >= 1 && n.n2 <= p.R2 && n.n3 >= 1 && n.n3 <= p.R3;
}

// Boundary points adjacent to exactly one face, in arbitrary (oracle-local) order.
inline std::vector<Face> faces(const lc::Paving& p) {
  std::vector<Face> out;
  for (int a = 0; a <= p.R1 + 1; ++a)
    for (int b = 0; b <= p.R2 + 1; ++b)
      for (int c = 0; c <= p.R3 + 1; ++c) {
        const Point3 n{a, b, c};
        int out_axis = -1, count = 0, sign = 0;
        for (int j = 0; j < 3; ++j) {
          const int R = j == 0 ? p.R1 : (j == 1 ? p.R2 : p.R3);
          if (n[j] < 1 || n[j] > R) {
            ++count;
            out_axis = j;
            sign = n[j] < 1 ? -1 : 1;
          }
        }
        if (count == 1) out.push_back({n, out_axis, sign});
      }
  return out;
}

using Key = std::tuple<int, int, int, int, int>;  // field, comp, n1, n2, n3
inline Key key(Fld f, int c, const Point3& n) { return {int(f), c, n.n1, n.n2, n.n3}; }

using DirichletValue = std::function<cdouble(Fld, int, const Point3&)>;
using NeumannValue = std::function<cdouble(Fld, int, const Point3&)>;  // component c of the wedge at n

struct DenseSolution {
  std::map<Key, cdouble> values;
  double residual = 0;
  cdouble at(Fld f, int c, const Point3& n) const { return values.at(key(f, c, n)); }
};

// Square system: lattice equations on Omega, Dirichlet rows on faces where dirichlet_face holds, Neumann rows on
// faces where neumann_face holds. Unknowns: all components on Omega and tangential ones on faces.
inline DenseSolution dense_solve(const lc::PotentialLookup& V, const lc::Paving& paving,
                                 const std::function<bool(const Face&)>& dirichlet_face, const DirichletValue& fd,
                                 const std::function<bool(const Face&)>& neumann_face, const NeumannValue& gn) {
  std::map<Key, int> idx;
  std::vector<Key> keys;
  auto add = [&](Key k) {
    idx.emplace(k, int(keys.size()));
    keys.push_back(k);
  };
  for (int a = 1; a <= paving.R1; ++a)
    for (int b = 1; b <= paving.R2; ++b)
      for (int c = 1; c <= paving.R3; ++c)
        for (Fld f : {Fld::E, Fld::H})
          for (int j = 0; j < 3; ++j) add(key(f, j, {a, b, c}));
  const auto fs = faces(paving);
  for (const auto& fc : fs)
    for (Fld f : {Fld::E, Fld::H})
      for (int j = 0; j < 3; ++j)
        if (j != fc.axis) add(key(f, j, fc.n));
  const int N = int(keys.size());
  std::vector<std::vector<std::pair<int, cdouble>>> rows;
  std::vector<cdouble> rhs;
  const cdouble two_i(0.0, 2.0);
  for (int a = 1; a <= paving.R1; ++a)
    for (int b = 1; b <= paving.R2; ++b)
      for (int c = 1; c <= paving.R3; ++c) {
        const Point3 n{a, b, c};
        for (Fld X : {Fld::E, Fld::H}) {
          const Fld Y = X == Fld::E ? Fld::H : Fld::E;
          const double sgn = X == Fld::E ? 1.0 : -1.0;  // M u^E = V^H u^H, M u^H = -V^E u^E
          for (int comp = 0; comp < 3; ++comp) {
            std::vector<std::pair<int, cdouble>> row;
            for (const auto& t : kCurl[comp]) {
              Point3 e{0, 0, 0};
              e[t[2]] = 1;
              row.push_back({idx.at(key(X, t[1], n + e)), double(t[0]) / two_i});
              row.push_back({idx.at(key(X, t[1], n - e)), -double(t[0]) / two_i});
            }
            row.push_back({idx.at(key(Y, comp, n)), -sgn * V(Y, comp, n)});
            rows.push_back(row);
            rhs.push_back(0.0);
          }
        }
      }
  for (const auto& fc : fs) {
    if (dirichlet_face(fc))
      for (Fld f : {Fld::E, Fld::H})
        for (int j = 0; j < 3; ++j)
          if (j != fc.axis) {
            rows.push_back({{idx.at(key(f, j, fc.n)), 1.0}});
            rhs.push_back(fd(f, j, fc.n));
          }
    if (neumann_face(fc)) {
      Point3 nu{0, 0, 0};
      nu[fc.axis] = fc.sign;
      const Point3 m = fc.n - nu;
      // ((u(n) - u(m)) with normal slot dropped) x nu, component c.
      for (Fld f : {Fld::E, Fld::H})
        for (int c = 0; c < 3; ++c) {
          if (c == fc.axis) continue;
          std::vector<std::pair<int, cdouble>> row;
          for (int j = 0; j < 3; ++j) {
            if (j == fc.axis) continue;
            const int e = levi_civita(c, j, fc.axis) * fc.sign;
            if (e == 0) continue;
            row.push_back({idx.at(key(f, j, fc.n)), double(e)});
            row.push_back({idx.at(key(f, j, m)), -double(e)});
          }
          rows.push_back(row);
          rhs.push_back(gn(f, c, fc.n));
        }
    }
  }
  if (int(rows.size()) != N) throw std::logic_error("oracle system is not square");
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  Eigen::VectorXcd b(N);
  for (int r = 0; r < N; ++r) {
    for (const auto& [col, v] : rows[std::size_t(r)]) A(r, col) += v;
    b(r) = rhs[std::size_t(r)];
  }
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  const Eigen::VectorXcd x = lu.solve(b);
  DenseSolution out;
  out.residual = (A * x - b).cwiseAbs().maxCoeff();
  for (int i = 0; i < N; ++i) out.values[keys[std::size_t(i)]] = x(i);
  return out;
}

inline DenseSolution dense_dirichlet(const lc::PotentialLookup& V, const lc::Paving& paving, const DirichletValue& fd) {
  return dense_solve(
      V, paving, [](const Face&) { return true; }, fd, [](const Face&) { return false; },
      [](Fld, int, const Point3&) { return cdouble(0); });
}

// Dirichlet on all faces except 1+, Neumann on 1-.
inline DenseSolution dense_mixed(const lc::PotentialLookup& V, const lc::Paving& paving, const DirichletValue& fd,
                                 const NeumannValue& gn) {
  return dense_solve(
      V, paving, [](const Face& f) { return !(f.axis == 0 && f.sign > 0); }, fd,
      [](const Face& f) { return f.axis == 0 && f.sign < 0; }, gn);
}

// Literal wedge (u(n) - u(m)) x nu of a dense solution, component c.
inline cdouble dense_wedge(const DenseSolution& s, const Face& fc, Fld f, int c) {
  Point3 nu{0, 0, 0};
  nu[fc.axis] = fc.sign;
  const Point3 m = fc.n - nu;
  cdouble out = 0;
  for (int j = 0; j < 3; ++j)
    if (j != fc.axis) out += double(levi_civita(c, j, fc.axis) * fc.sign) * (s.at(f, j, fc.n) - s.at(f, j, m));
  return out;
}

// Random admissible real or complex potential at lambda = 1 with the library's documented generator.
inline lc::DiagonalPotential random_potential(const lc::Paving& paving, std::uint64_t seed,
                                              lc::MediumKind kind = lc::MediumKind::Real) {
  lc::SplitMix64 rng(seed);
  return lc::potential_from_material(lc::draw_admissible_material(paving, rng, kind, 1.0), 1.0);
}

}  // namespace oracle
