#include "lattice_calderon/rng.hpp"

#include <numbers>

#include "lattice_calderon/solver.hpp"

namespace lc {

MaterialTensor random_material(const Paving& paving, SplitMix64& rng, MediumKind kind, double lo, double hi) {
  if (!(lo > 0) || !(hi >= lo)) throw ValidationError("random material range must satisfy 0 < lo <= hi");
  MaterialTensor m(paving);
  auto draw = [&]() -> cdouble {
    const double r = rng.uniform(lo, hi);
    if (kind == MediumKind::Real) return r;
    return std::polar(r, rng.uniform(0.0, 2.0 * std::numbers::pi));
  };
  for (std::size_t i = 0; i < paving.volume(); ++i) {
    for (int c = 0; c < 3; ++c) m.eps[i][c] = draw();
    for (int c = 0; c < 3; ++c) m.mu[i][c] = draw();
  }
  return m;
}

MaterialTensor draw_admissible_material(const Paving& paving, SplitMix64& rng, MediumKind kind, cdouble lambda,
                                        int max_attempts) {
  for (int a = 0; a < max_attempts; ++a) {
    MaterialTensor m = random_material(paving, rng, kind);
    const auto A = assemble_dirichlet_system(potential_from_material(m, lambda)).A;
    const auto sv = estimate_singular_values(A);
    if (sv.sigma_min >= 1e-10 * sv.sigma_max) return m;
  }
  throw NumericalError("no admissible material drawn in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace lc
