#pragma once

#include <vector>

#include "bbgky/dynamics.hpp"
#include "bbgky/report.hpp"
#include "bbgky/sequence.hpp"

namespace bbgky {

// sum_i (-N(i)) g_s + Tr_{s+1} sum_{i in Y} (-N_int(i,s+1)) (g_{s+1} + sum_P g(X1) g(X2)),
// P over two-block partitions of (Y, s+1) separating i from s+1. Needs s+1 <= n_max.
ParticleOperator vlasov_hierarchy_rhs(const HamiltonianSpec& spec, const OperatorSequence& g,
                                      int s);

// -(i/hbar)[K + Tr_2(Phi (I x g)), g] for g on label 1.
ParticleOperator vlasov_kinetic_rhs(const HamiltonianSpec& spec, const ParticleOperator& g1);

struct VlasovTrajectory {
  std::vector<double> times;
  std::vector<ParticleOperator> states;
  double step = 0.0;
  // Largest entry difference at the grid times between step and step/2.
  double step_doubling_gap = 0.0;
};

// Classical RK4 with a fixed step from t = 0 to every grid time (grid
// ascending, nonnegative). Throws std::runtime_error if the trace norm
// exceeds 1e3 or the step-doubling gap exceeds 1e-8.
VlasovTrajectory vlasov_integrate(const HamiltonianSpec& spec, const ParticleOperator& g1_0,
                                  const std::vector<double>& t_grid, double step = 1e-3);

// (2 ||Phi||_op ||g1||_1)^{-1}; infinity when Phi = 0.
double vlasov_radius(const HamiltonianSpec& spec, const ParticleOperator& g1_0);

struct VlasovSeriesResult {
  ParticleOperator value;
  std::vector<ParticleOperator> terms;  // order 0..order_cap
  double radius = 0.0;
  bool within_radius = true;
};

// Partial sum of the iteration series of the kinetic equation up to
// order_cap (<= 8). Order n is the n-fold time-ordered integral of free
// evolutions with interaction insertions, evaluated level by level in the
// interaction picture with 16-point Gauss-Legendre collocation on [0, t].
VlasovSeriesResult vlasov_series(const HamiltonianSpec& spec, const ParticleOperator& g1_0,
                                 double t, int order_cap);

struct HartreeTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double max_norm_drift = 0.0;
};

// i hbar d/dt psi = (K + Tr_2(Phi (I x |psi><psi|))) psi by RK4; throws
// std::runtime_error on norm drift above 1e-6.
HartreeTrajectory hartree_pure(const HamiltonianSpec& spec, const Vector& psi0,
                               const std::vector<double>& t_grid, double step = 1e-3);

struct ScalingExperiment {
  std::vector<double> epsilons;  // strictly decreasing, positive
  std::vector<double> times;
  OperatorSequence base_g0;      // chaos data: only the one-particle component
  void validate() const;
};

struct ScalingCell {
  double epsilon = 0.0;
  double t = 0.0;
  std::vector<double> scaled_norms;  // ||eps^s G_s(t)||_1 for s = 2..n_max
  double vlasov_gap = 0.0;           // ||eps G_1(t) - g_1(t)||_1
};

struct ScalingReport {
  VerificationReport summary;
  std::vector<ScalingCell> cells;  // epsilon-major, then time
  bool correlations_monotone = true;
  bool gap_monotone = true;
};

// Interaction scaled to eps Phi, initial data G_1(0) = g_1 / eps; the
// marginal correlations come from the nonlinear hierarchy solution.
ScalingReport epsilon_scaling(const HamiltonianSpec& spec, const ScalingExperiment& exp);

}  // namespace bbgky
