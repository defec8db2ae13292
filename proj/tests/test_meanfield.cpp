#include <cmath>

#include "bbgky/meanfield.hpp"
#include "bbgky/sequence.hpp"
#include "test_support.hpp"

using namespace bbgky;
using bbgky::test::free_spec;
using bbgky::test::sample_spec;

namespace {

ParticleOperator state1(std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  return random_state(rng, 2, {1});
}

ParticleOperator free_evolved(const HamiltonianSpec& spec, const ParticleOperator& g, double t) {
  return evolve_group(Dynamics(spec), g, t);
}

}  // namespace

TEST_CASE("factorized hierarchy reproduces the kinetic equation") {
  const HamiltonianSpec spec = sample_spec();
  const ParticleOperator g1 = state1(1);
  OperatorSequence g(2, 3);
  g[1] = g1;
  const ParticleOperator k1 = vlasov_kinetic_rhs(spec, g1);
  const ParticleOperator r1 = vlasov_hierarchy_rhs(spec, g, 1);
  const ParticleOperator r2 = vlasov_hierarchy_rhs(spec, g, 2);
  CHECK(max_abs_diff(r1, k1) < 1e-12);
  const ParticleOperator lhs =
      r2 + tensor_product(r1, g1.relabeled({2})) + tensor_product(g1, r1.relabeled({2}));
  const ParticleOperator rhs =
      tensor_product(k1, g1.relabeled({2})) + tensor_product(g1, k1.relabeled({2}));
  CHECK(max_abs_diff(lhs, rhs) < 1e-10);
  CHECK_THROWS_AS(vlasov_hierarchy_rhs(spec, g, 3), std::out_of_range);
}

TEST_CASE("kinetic equation preserves trace and Hermiticity") {
  const HamiltonianSpec spec = sample_spec();
  const VlasovTrajectory traj = vlasov_integrate(spec, state1(2), {0.0, 0.5, 1.0, 2.0});
  REQUIRE(traj.states.size() == 4);
  for (const auto& g : traj.states) {
    CHECK(std::abs(g.trace() - 1.0) < 1e-10);
    CHECK(hermiticity_error(g.matrix()) < 1e-12);
  }
  CHECK(traj.step_doubling_gap < 1e-8);
}

TEST_CASE("free kinetic equation is the free group") {
  const HamiltonianSpec spec = free_spec();
  const ParticleOperator g1 = state1(3);
  CHECK(std::isinf(vlasov_radius(spec, g1)));
  const VlasovTrajectory traj = vlasov_integrate(spec, g1, {0.7});
  CHECK(max_abs_diff(traj.states.back(), free_evolved(spec, g1, 0.7)) < 1e-12);
  for (int order = 0; order <= 4; ++order) {
    const VlasovSeriesResult series = vlasov_series(spec, g1, 0.7, order);
    CHECK(max_abs_diff(series.value, free_evolved(spec, g1, 0.7)) < 1e-12);
  }
}

TEST_CASE("iteration series matches RK4 inside the radius") {
  const HamiltonianSpec spec = sample_spec();
  const ParticleOperator g1 = state1(4);
  const double radius = vlasov_radius(spec, g1);
  REQUIRE(std::isfinite(radius));
  const double t = 0.25 * radius;
  const VlasovTrajectory rk = vlasov_integrate(spec, g1, {t});
  double previous = 1.0;
  for (int order : {2, 4, 6}) {
    const VlasovSeriesResult series = vlasov_series(spec, g1, t, order);
    CHECK(series.within_radius);
    CHECK(series.terms.size() == static_cast<std::size_t>(order + 1));
    const double err = max_abs_diff(series.value, rk.states.back());
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-6);
  CHECK_FALSE(vlasov_series(spec, g1, 2.0 * radius, 2).within_radius);
  CHECK_THROWS_AS(vlasov_series(spec, g1, t, 9), std::out_of_range);
}

TEST_CASE("pure Hartree evolution matches the kinetic equation") {
  const HamiltonianSpec spec = sample_spec();
  Xoshiro256StarStar rng(5);
  const Vector psi = random_gaussian(rng, 2, 1).col(0).normalized();
  const HartreeTrajectory hartree = hartree_pure(spec, psi, {0.5, 1.0});
  const VlasovTrajectory vlasov =
      vlasov_integrate(spec, ParticleOperator(2, {1}, psi * psi.adjoint()), {0.5, 1.0});
  for (std::size_t k = 0; k < 2; ++k) {
    const Vector& phi = hartree.states[k];
    CHECK(max_abs_diff(ParticleOperator(2, {1}, phi * phi.adjoint()), vlasov.states[k]) < 1e-8);
  }
  CHECK(hartree.max_norm_drift < 1e-10);
  CHECK_THROWS_AS(hartree_pure(spec, 2.0 * psi, {1.0}), DomainError);
}

TEST_CASE("epsilon ladder") {
  const HamiltonianSpec spec = sample_spec();
  ScalingExperiment exp;
  exp.epsilons = {1.0, 0.5, 0.25, 0.125};
  exp.times = {0.5, 1.0};
  exp.base_g0 = chaos_sequence(state1(6), 3);
  const ScalingReport rep = epsilon_scaling(spec, exp);
  REQUIRE(rep.cells.size() == 8);
  CHECK(rep.correlations_monotone);
  CHECK(rep.gap_monotone);
  for (const auto& cell : rep.cells) CHECK(cell.scaled_norms.size() == 2);
  const ScalingCell& coarse = rep.cells[1];
  const ScalingCell& fine = rep.cells[7];
  CHECK(fine.vlasov_gap < coarse.vlasov_gap);
}

TEST_CASE("scaling experiment rejects bad input") {
  const HamiltonianSpec spec = sample_spec();
  ScalingExperiment exp;
  exp.times = {0.5};
  exp.base_g0 = chaos_sequence(state1(7), 2);
  exp.epsilons = {0.5, 1.0};
  CHECK_THROWS_AS(epsilon_scaling(spec, exp), DomainError);
  exp.epsilons = {1.0, -0.5};
  CHECK_THROWS_AS(epsilon_scaling(spec, exp), DomainError);
  exp.epsilons = {1.0, 0.5};
  exp.base_g0[2] = tensor_product(state1(8), state1(9).relabeled({2}));
  CHECK_THROWS_AS(epsilon_scaling(spec, exp), PreconditionError);
}

TEST_CASE("kinetic equation rejects bad input") {
  const HamiltonianSpec spec = sample_spec();
  const ParticleOperator g1 = state1(10);
  CHECK_THROWS_AS(vlasov_integrate(spec, g1.relabeled({2}), {1.0}), DomainError);
  CHECK_THROWS_AS(vlasov_integrate(spec, g1, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(vlasov_integrate(spec, g1, {1.0}, 0.0), DomainError);
  Xoshiro256StarStar rng(11);
  const ParticleOperator skew(2, {1}, random_gaussian(rng, 2, 2));
  CHECK_THROWS_AS(vlasov_integrate(spec, skew, {1.0}), DomainError);
}
