#include "lattice_calderon/operators.hpp"

#include <algorithm>
#include <cmath>

namespace lc {

std::string point_string(const Point3& n) {
  return "(" + std::to_string(n.n1) + "," + std::to_string(n.n2) + "," + std::to_string(n.n3) + ")";
}

MaterialTensor::MaterialTensor(const Paving& p)
    : paving(p), eps(p.volume(), {1.0, 1.0, 1.0}), mu(p.volume(), {1.0, 1.0, 1.0}) {}

cdouble MaterialTensor::entry(Fld f, int comp, const Point3& n) const {
  const auto& arr = f == Fld::E ? eps : mu;
  return arr[paving.linear_index(n)][comp];
}

void MaterialTensor::set_entry(Fld f, int comp, const Point3& n, cdouble v) {
  auto& arr = f == Fld::E ? eps : mu;
  arr[paving.linear_index(n)][comp] = v;
}

bool MaterialTensor::physical() const {
  auto ok = [](const std::array<cdouble, 3>& a) {
    return std::all_of(a.begin(), a.end(),
                       [](cdouble z) { return z.real() > 0 && std::abs(z.imag()) <= 1e-9 * std::abs(z); });
  };
  return std::all_of(eps.begin(), eps.end(), ok) && std::all_of(mu.begin(), mu.end(), ok);
}

DiagonalPotential::DiagonalPotential(const Paving& p, cdouble fill) : paving_(p) {
  std::array<cdouble, 6> f;
  f.fill(fill);
  values_.assign(p.volume(), f);
}

void DiagonalPotential::set(Fld f, int comp, const Point3& n, cdouble v) {
  if (!paving_.contains(n)) throw ValidationError("potential entries live on Omega only: " + point_string(n));
  if (v == cdouble(0)) throw ValidationError("inadmissible zero potential entry at " + point_string(n));
  values_[paving_.linear_index(n)][slot(f, comp)] = v;
}

double DiagonalPotential::max_relative_difference(const DiagonalPotential& other) const {
  double err = 0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    for (int s = 0; s < 6; ++s)
      err = std::max(err, std::abs(values_[i][s] - other.values_[i][s]) / std::abs(other.values_[i][s]));
  return err;
}

DiagonalPotential potential_from_material(const MaterialTensor& m, cdouble lambda) {
  if (lambda == cdouble(0)) throw ValidationError("spectral parameter must be nonzero");
  DiagonalPotential V(m.paving);
  for (std::size_t i = 0; i < m.paving.volume(); ++i) {
    const Point3 n = m.paving.site(i);
    for (int c = 0; c < 3; ++c) {
      if (m.eps[i][c] == cdouble(0) || m.mu[i][c] == cdouble(0))
        throw ValidationError("zero material entry at " + point_string(n));
      V.set(Fld::E, c, n, -lambda / m.eps[i][c]);
      V.set(Fld::H, c, n, -lambda / m.mu[i][c]);
    }
  }
  return V;
}

MaterialTensor material_from_potential(const DiagonalPotential& V, cdouble lambda) {
  if (lambda == cdouble(0)) throw ValidationError("spectral parameter must be nonzero");
  MaterialTensor m(V.paving());
  for (std::size_t i = 0; i < m.paving.volume(); ++i) {
    const Point3 n = m.paving.site(i);
    for (int c = 0; c < 3; ++c) {
      const cdouble ve = V(Fld::E, c, n), vh = V(Fld::H, c, n);
      if (ve == cdouble(0) || vh == cdouble(0)) throw ValidationError("zero potential entry at " + point_string(n));
      m.eps[i][c] = -lambda / ve;
      m.mu[i][c] = -lambda / vh;
    }
  }
  return m;
}

double material_max_relative_error(const MaterialTensor& a, const MaterialTensor& b) {
  if (!(a.paving == b.paving)) throw ValidationError("material pavings differ");
  double err = 0;
  for (std::size_t i = 0; i < a.paving.volume(); ++i)
    for (int c = 0; c < 3; ++c) {
      err = std::max(err, std::abs(a.eps[i][c] - b.eps[i][c]) / std::abs(b.eps[i][c]));
      err = std::max(err, std::abs(a.mu[i][c] - b.mu[i][c]) / std::abs(b.mu[i][c]));
    }
  return err;
}

}  // namespace lc
