#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "bbgky/tensor.hpp"

namespace bbgky {

struct HamiltonianSpec {
  int d = 2;
  Matrix K;    // d x d one-body term
  Matrix Phi;  // d^2 x d^2 two-body potential, symmetric under factor swap
  std::map<int, Matrix> PhiK;  // optional k-body potentials (k >= 3)
  double hbar = 1.0;

  // Throws DomainError naming the offending field.
  void validate() const;
};

// H = sum_i K(i) + sum_{i<j} Phi(i,j) on the given labels.
ParticleOperator build_hamiltonian(const HamiltonianSpec& spec, const LabelSet& labels);

// Phi^{(k)} embedded on the given k labels (k = 2 uses Phi).
ParticleOperator interaction_potential(const HamiltonianSpec& spec, const LabelSet& labels);

struct LiouvillianMode {
  enum class Kind { Full, Kinetic, Interaction };
  Kind kind = Kind::Full;
  LabelSet labels;  // Kinetic: one label; Interaction: two or more labels

  static LiouvillianMode full() { return {}; }
  static LiouvillianMode kinetic(int i) { return {Kind::Kinetic, {i}}; }
  static LiouvillianMode interaction(int i1, int i2);
  static LiouvillianMode interaction_k(LabelSet labels);
};

// -(i/hbar)[A, f] where A is H on f's labels (Full), K(i) (Kinetic) or the
// interaction potential on the mode labels (Interaction).
ParticleOperator liouvillian(const HamiltonianSpec& spec, const ParticleOperator& f,
                             const LiouvillianMode& mode = LiouvillianMode::full());

// Spectral data of H_n, shared by all propagators on n particles.
struct Spectrum {
  Eigen::VectorXd energies;
  Matrix vectors;
};

// Holds a Hamiltonian together with a thread-safe cache of propagators
// keyed by (particle count, time). All particles are identical, so H on
// any n labels has the same matrix in canonical order.
class Dynamics {
 public:
  explicit Dynamics(HamiltonianSpec spec);

  const HamiltonianSpec& spec() const { return spec_; }
  int d() const { return spec_.d; }
  double hbar() const { return spec_.hbar; }

  // e^{-i t H_n / hbar}.
  std::shared_ptr<const Matrix> propagator(std::size_t n, double t) const;
  // e^{-i t K / hbar}.
  std::shared_ptr<const Matrix> free_propagator(double t) const;

  // Tensor product of the n-particle propagators on each block (identity on
  // labels of `full` outside every block), in the canonical order of full.
  Matrix block_propagator(const std::vector<LabelSet>& blocks, const LabelSet& full,
                          double t) const;

  // Scattering unitary W with  G-hat f = W f W^dagger  on each block.
  Matrix block_scattering(const std::vector<LabelSet>& blocks, const LabelSet& full,
                          double t) const;

  std::size_t cached_propagators() const;
  void clear_cache() const;

 private:
  const Spectrum& spectrum(std::size_t n) const;

  HamiltonianSpec spec_;
  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::unique_ptr<Spectrum>> spectra_;
  mutable std::map<std::pair<std::size_t, double>, std::shared_ptr<const Matrix>> cache_;
};

// e^{-itH/hbar} f e^{itH/hbar} with H on f's labels.
ParticleOperator evolve_group(const Dynamics& dyn, const ParticleOperator& f, double t);

// Interacting group composed with the inverse free groups of each particle:
// first undo free motion for time t, then apply the interacting evolution.
ParticleOperator scattering_operator(const Dynamics& dyn, const ParticleOperator& f, double t);

// Conjugates f by the one-particle propagator e^{-itK/hbar} on every factor.
ParticleOperator free_evolve(const Dynamics& dyn, const ParticleOperator& f, double t);

}  // namespace bbgky
