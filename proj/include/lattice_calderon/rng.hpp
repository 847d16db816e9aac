#pragma once

#include <cstdint>

#include "lattice_calderon/operators.hpp"

namespace lc {

// SplitMix64 (Steele, Lea, Flood): the documented generator for reproducible fixtures.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Top 53 bits scaled into [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

enum class MediumKind { Real, ComplexAnnulus };

// Draw order: sites lexicographic; per site eps1..3 then mu1..3. A real entry is U[lo,hi]; a complex
// entry draws the modulus U[lo,hi] and then the argument U[0,2pi).
MaterialTensor random_material(const Paving& paving, SplitMix64& rng, MediumKind kind, double lo = 0.5, double hi = 2.0);

// Redraws from the same stream until the Dirichlet system at lambda is nonsingular
// (sigma_min >= 1e-10 ||A||). Throws NumericalError after max_attempts.
MaterialTensor draw_admissible_material(const Paving& paving, SplitMix64& rng, MediumKind kind, cdouble lambda,
                                        int max_attempts = 16);

}  // namespace lc
