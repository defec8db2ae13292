#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

#include "bbgky/sequence.hpp"

namespace bbgky {

// xoshiro256** (Blackman and Vigna), state seeded through splitmix64.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* algorithm = "xoshiro256** seeded by splitmix64";

  explicit Xoshiro256StarStar(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Standard normal deviate by Box-Muller on 53-bit uniforms.
  double normal();
  // Uniform in [0, 1).
  double uniform();

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Matrix with independent complex entries, real and imaginary parts N(0,1).
Matrix random_gaussian(Xoshiro256StarStar& rng, Eigen::Index rows, Eigen::Index cols);

// Hermitian operator with given trace norm; optionally permutation averaged.
ParticleOperator random_hermitian(Xoshiro256StarStar& rng, int d, const LabelSet& labels,
                                  double norm = 1.0, bool symmetric = false);

// Positive semidefinite, trace one, permutation symmetric (A A^dagger averaged).
ParticleOperator random_state(Xoshiro256StarStar& rng, int d, const LabelSet& labels);

enum class SequenceKind {
  Correlation,  // symmetric Hermitian, trace norms 0.9 / (2 e^3)
  State,        // positive, trace one, symmetric
  Bounded       // symmetric Hermitian, trace norm one
};

SequenceKind parse_sequence_kind(const std::string& name);

// Norm used for correlation-kind samples, below the convergence radius.
double correlation_sample_norm();

OperatorSequence random_sequence(int d, int n_max, std::uint64_t seed, SequenceKind kind);
OperatorSequence random_sequence(int d, int n_max, Xoshiro256StarStar& rng, SequenceKind kind);

}  // namespace bbgky
