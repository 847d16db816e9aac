#pragma once

#include <array>
#include <atomic>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lattice_calderon/errors.hpp"
#include "lattice_calderon/geometry.hpp"

namespace lc {

enum class Fld : int { E = 0, H = 1 };
inline Fld other(Fld f) { return f == Fld::E ? Fld::H : Fld::E; }
inline int slot(Fld f, int comp) { return 3 * int(f) + comp; }
std::string point_string(const Point3& n);

// Six-component field over an axis-aligned window [lo, hi] with explicit undefined markers.
// In closure mode (window = Omega plus one layer) component j can only be stored on Omega and on
// the faces dOmega_k with k != j.
template <class Scalar = cdouble>
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(Point3 lo, Point3 hi) : lo_(lo), hi_(hi) {
    for (int a = 0; a < 3; ++a) ext_[a] = hi[a] - lo[a] + 1;
    const std::size_t n = std::size_t(ext_[0]) * ext_[1] * ext_[2] * 6;
    values_.assign(n, Scalar(0));
    defined_.assign(n, 0);
  }

  static LatticeField on_closure(const Paving& paving) {
    LatticeField f({0, 0, 0}, {paving.R1 + 1, paving.R2 + 1, paving.R3 + 1});
    f.closure_ = true;
    f.paving_ = paving;
    return f;
  }

  const Point3& lo() const { return lo_; }
  const Point3& hi() const { return hi_; }
  bool in_window(const Point3& n) const {
    for (int a = 0; a < 3; ++a)
      if (n[a] < lo_[a] || n[a] > hi_[a]) return false;
    return true;
  }
  // Whether a component may be stored at n (closure mode restriction).
  bool admissible(Fld f, int comp, const Point3& n) const {
    (void)f;
    if (!in_window(n)) return false;
    if (!closure_) return true;
    if (paving_.contains(n)) return true;
    BoundarySite s;
    return classify_boundary(paving_, n, s) && s.face_axis != comp;
  }
  bool defined(Fld f, int comp, const Point3& n) const {
    return in_window(n) && defined_[index(f, comp, n)];
  }
  Scalar get(Fld f, int comp, const Point3& n) const {
    if (!defined(f, comp, n))
      throw UndefinedValueError("read of undefined component " + std::string(f == Fld::E ? "E" : "H") +
                                std::to_string(comp + 1) + " at " + point_string(n));
    return values_[index(f, comp, n)];
  }
  void set(Fld f, int comp, const Point3& n, Scalar v) {
    if (!admissible(f, comp, n))
      throw UndefinedValueError("component " + std::string(f == Fld::E ? "E" : "H") + std::to_string(comp + 1) +
                                " cannot be stored at " + point_string(n));
    const std::size_t i = index(f, comp, n);
    values_[i] = v;
    defined_[i] = 1;
  }
  void unset(Fld f, int comp, const Point3& n) {
    if (in_window(n)) defined_[index(f, comp, n)] = 0;
  }
  std::array<Scalar, 3> vec(Fld f, const Point3& n) const {
    return {get(f, 0, n), get(f, 1, n), get(f, 2, n)};
  }

 private:
  std::size_t index(Fld f, int comp, const Point3& n) const {
    const std::size_t cell =
        (std::size_t(n.n1 - lo_.n1) * ext_[1] + std::size_t(n.n2 - lo_.n2)) * ext_[2] + std::size_t(n.n3 - lo_.n3);
    return cell * 6 + std::size_t(slot(f, comp));
  }

  Point3 lo_{}, hi_{};
  std::array<int, 3> ext_{0, 0, 0};
  std::vector<Scalar> values_;
  std::vector<std::uint8_t> defined_;
  bool closure_ = false;
  Paving paving_{};
};

using Field = LatticeField<cdouble>;

// u(n+e_j) - u(n-e_j).
template <class Scalar>
Scalar difference(const LatticeField<Scalar>& u, Fld f, int comp, const Point3& n, int axis) {
  return u.get(f, comp, n + unit(axis)) - u.get(f, comp, n - unit(axis));
}

// M v = (2i)^{-1}(-D3 v2 + D2 v3, D3 v1 - D1 v3, -D2 v1 + D1 v2).
template <class Scalar>
std::array<Scalar, 3> curl(const LatticeField<Scalar>& u, Fld f, const Point3& n) {
  const Scalar inv2i = Scalar(1) / Scalar(0, 2);
  return {inv2i * (-difference(u, f, 1, n, 2) + difference(u, f, 2, n, 1)),
          inv2i * (difference(u, f, 0, n, 2) - difference(u, f, 2, n, 0)),
          inv2i * (-difference(u, f, 0, n, 1) + difference(u, f, 1, n, 0))};
}

// H0 u = (M u^H, -M u^E).
template <class Scalar>
std::array<Scalar, 6> apply_H0(const LatticeField<Scalar>& u, const Point3& n) {
  const auto mh = curl(u, Fld::H, n);
  const auto me = curl(u, Fld::E, n);
  return {mh[0], mh[1], mh[2], -me[0], -me[1], -me[2]};
}

struct MaterialTensor {
  Paving paving;
  std::vector<std::array<cdouble, 3>> eps, mu;  // lexicographic over Omega
  std::array<double, 3> eps0{1, 1, 1}, mu0{1, 1, 1};

  MaterialTensor() = default;
  explicit MaterialTensor(const Paving& p);
  cdouble entry(Fld f, int comp, const Point3& n) const;
  void set_entry(Fld f, int comp, const Point3& n, cdouble v);
  // All entries positive real within 1e-9 relative.
  bool physical() const;
};

// Admissible potential V; identity outside Omega. Reads may be counted (truth-access guard).
class DiagonalPotential {
 public:
  DiagonalPotential() = default;
  explicit DiagonalPotential(const Paving& p, cdouble fill = cdouble(-1.0));

  const Paving& paving() const { return paving_; }
  cdouble operator()(Fld f, int comp, const Point3& n) const {
    if (read_counter_) read_counter_->fetch_add(1, std::memory_order_relaxed);
    if (!paving_.contains(n)) return 1.0;
    return values_[paving_.linear_index(n)][slot(f, comp)];
  }
  void set(Fld f, int comp, const Point3& n, cdouble v);
  void attach_read_counter(std::atomic<long>* counter) { read_counter_ = counter; }
  // Max relative entrywise difference over Omega.
  double max_relative_difference(const DiagonalPotential& other) const;

 private:
  Paving paving_{};
  std::vector<std::array<cdouble, 6>> values_;
  std::atomic<long>* read_counter_ = nullptr;
};

// V = -lambda D_a^{-1} on Omega.
DiagonalPotential potential_from_material(const MaterialTensor& m, cdouble lambda);
MaterialTensor material_from_potential(const DiagonalPotential& V, cdouble lambda);

// Relative max-entry difference of two materials on the same paving.
double material_max_relative_error(const MaterialTensor& a, const MaterialTensor& b);

}  // namespace lc
