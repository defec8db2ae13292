#pragma once

#include <doctest.h>

#include "bbgky/dynamics.hpp"
#include "bbgky/random.hpp"

namespace bbgky::test {

// Generic complex Hamiltonian on d = 2 with a swap-symmetric potential of
// Frobenius norm phi_norm.
inline HamiltonianSpec sample_spec(double phi_norm = 1.0, std::uint64_t seed = 7) {
  HamiltonianSpec spec;
  spec.d = 2;
  spec.hbar = 1.0;
  Matrix k(2, 2);
  k << 0.5, Complex(0.2, 0.1), Complex(0.2, -0.1), -0.3;
  spec.K = k;
  Xoshiro256StarStar rng(seed);
  const Matrix a = random_gaussian(rng, 4, 4);
  const Matrix swap = permutation_matrix(2, {1, 0});
  Matrix phi = 0.5 * (a + a.adjoint());
  phi = 0.5 * (phi + swap * phi * swap.adjoint());
  spec.Phi = phi_norm * phi / phi.norm();
  return spec;
}

inline HamiltonianSpec free_spec() {
  HamiltonianSpec spec = sample_spec();
  spec.Phi.setZero();
  return spec;
}

inline ParticleOperator random_op(Xoshiro256StarStar& rng, int d, const LabelSet& labels) {
  const auto dim = static_cast<Eigen::Index>(ipow(d, labels.size()));
  return ParticleOperator(d, labels, random_gaussian(rng, dim, dim));
}

}  // namespace bbgky::test
