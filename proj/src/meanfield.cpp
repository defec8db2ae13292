#include "bbgky/meanfield.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "bbgky/hierarchy.hpp"
#include "bbgky/parallel.hpp"
#include "bbgky/partitions.hpp"

namespace bbgky {

namespace {

constexpr int kNodes = 16;

void require_pair_potentials(const HamiltonianSpec& spec, const char* what) {
  if (!spec.PhiK.empty()) throw PreconditionError(std::string(what) + " supports pair potentials only");
}

ParticleOperator trace_down(const ParticleOperator& op, int s) {
  return partial_trace(op, label_range(1, s));
}

// Tr_2(Phi (I x g)) on label 1.
Matrix mean_field_potential(const HamiltonianSpec& spec, const Matrix& g) {
  const ParticleOperator phi(spec.d, {1, 2}, spec.Phi);
  return partial_trace(apply_local_right(phi, g, {2}), {1}).matrix();
}

Matrix kinetic_rhs(const HamiltonianSpec& spec, const Matrix& g) {
  const Matrix h = spec.K + mean_field_potential(spec, g);
  return Complex(0.0, -1.0 / spec.hbar) * (h * g - g * h);
}

Vector hartree_rhs(const HamiltonianSpec& spec, const Vector& psi) {
  const Matrix rho = psi * psi.adjoint();
  const Matrix h = spec.K + mean_field_potential(spec, rho);
  return Complex(0.0, -1.0 / spec.hbar) * (h * psi);
}

template <class State, class Rhs>
State rk4_step(const State& y, double dt, const Rhs& f) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * dt) * k1));
  const State k3 = f(State(y + (0.5 * dt) * k2));
  const State k4 = f(State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_grid(const std::vector<double>& grid) {
  double prev = 0.0;
  for (double t : grid) {
    if (!std::isfinite(t) || t < prev)
      throw DomainError("time grid must be finite, nonnegative and ascending");
    prev = t;
  }
}

// Integrates from 0 through every grid time with uniform sub-steps no
// longer than step.
template <class State, class Rhs, class Guard>
std::vector<State> integrate(const State& y0, const std::vector<double>& grid, double step,
                             const Rhs& f, const Guard& guard) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  std::vector<State> out;
  State y = y0;
  double t = 0.0;
  for (double target : grid) {
    const double span = target - t;
    if (span > 0.0) {
      const auto n = static_cast<long>(std::ceil(span / step - 1e-9));
      const double dt = span / static_cast<double>(n);
      for (long k = 0; k < n; ++k) {
        y = rk4_step(y, dt, f);
        guard(y);
      }
    }
    t = target;
    out.push_back(y);
  }
  return out;
}

// Single-particle free evolution applied to every factor.
ParticleOperator free_all(const Matrix& u, const ParticleOperator& f) {
  const Matrix ua = u.adjoint();
  ParticleOperator out = f;
  for (int i : f.labels()) {
    out = apply_local_left(u, {i}, out);
    out = apply_local_right(out, ua, {i});
  }
  return out;
}

// Tr_{m+1} sum_{k<=m} (-N_int(k, m+1)) f for f on 1..m+1.
ParticleOperator insertion(const HamiltonianSpec& spec, const ParticleOperator& f) {
  const int m = static_cast<int>(f.particles()) - 1;
  ParticleOperator acc = ParticleOperator::zero(f.d(), f.labels());
  for (int k = 1; k <= m; ++k) acc += liouvillian(spec, f, LiouvillianMode::interaction(k, m + 1));
  return trace_down(acc, m);
}

struct Collocation {
  std::array<double, kNodes> nodes{};    // on [-1, 1], ascending
  std::array<double, kNodes> weights{};
  Eigen::MatrixXd integration;           // int_{-1}^{x_i} l_j(u) du
};

const Collocation& collocation() {
  static const Collocation c = [] {
    using Rule = boost::math::quadrature::gauss<double, kNodes>;
    Collocation out;
    const auto& a = Rule::abscissa();
    const auto& w = Rule::weights();
    const std::size_t half = a.size();
    for (std::size_t k = 0; k < half; ++k) {
      out.nodes[half - 1 - k] = -a[k];
      out.weights[half - 1 - k] = w[k];
      out.nodes[half + k] = a[k];
      out.weights[half + k] = w[k];
    }
    // l_j = sum_k c_jk P_k with c_jk = (2k+1)/2 w_j P_k(x_j), exact for the
    // interpolating polynomial of degree 15.
    auto antiderivative = [](int k, double x) {
      if (k == 0) return x + 1.0;
      return (boost::math::legendre_p(k + 1, x) - boost::math::legendre_p(k - 1, x)) /
             (2.0 * k + 1.0);
    };
    out.integration = Eigen::MatrixXd::Zero(kNodes, kNodes);
    for (int j = 0; j < kNodes; ++j)
      for (int k = 0; k < kNodes; ++k) {
        const double cjk =
            0.5 * (2.0 * k + 1.0) * out.weights[j] * boost::math::legendre_p(k, out.nodes[j]);
        for (int i = 0; i < kNodes; ++i) out.integration(i, j) += cjk * antiderivative(k, out.nodes[i]);
      }
    return out;
  }();
  return c;
}

// Operator norm of a Hermitian matrix.
double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly)
      .eigenvalues().cwiseAbs().maxCoeff();
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[k - 1] * (1.0 + 1e-12) + 1e-15) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

ParticleOperator vlasov_hierarchy_rhs(const HamiltonianSpec& spec, const OperatorSequence& g,
                                      int s) {
  require_pair_potentials(spec, "vlasov_hierarchy_rhs");
  if (s < 1 || s + 1 > g.n_max())
    throw std::out_of_range("vlasov_hierarchy_rhs needs 1 <= s and s + 1 <= n_max");
  ParticleOperator acc = ParticleOperator::zero(g.d(), label_range(1, s));
  for (int i = 1; i <= s; ++i) acc += liouvillian(spec, g[s], LiouvillianMode::kinetic(i));
  const LabelSet wide = label_range(1, s + 1);
  for (int i = 1; i <= s; ++i) {
    PartitionConstraints split;
    split.block_count = 2;
    split.pinned = {{i, 0}, {s + 1, 1}};
    ParticleOperator inner = g[s + 1];
    for (const SetPartition& p : enumerate_partitions(wide, split)) inner += g.product_on(p.blocks);
    acc += trace_down(liouvillian(spec, inner, LiouvillianMode::interaction(i, s + 1)), s);
  }
  return acc;
}

ParticleOperator vlasov_kinetic_rhs(const HamiltonianSpec& spec, const ParticleOperator& g1) {
  if (g1.labels() != LabelSet{1}) throw DomainError("kinetic equation state must live on label 1");
  return ParticleOperator(spec.d, {1}, kinetic_rhs(spec, g1.matrix()));
}

VlasovTrajectory vlasov_integrate(const HamiltonianSpec& spec, const ParticleOperator& g1_0,
                                  const std::vector<double>& t_grid, double step) {
  require_pair_potentials(spec, "vlasov_integrate");
  if (g1_0.labels() != LabelSet{1}) throw DomainError("kinetic equation state must live on label 1");
  if (hermiticity_error(g1_0.matrix()) > 1e-12) throw DomainError("initial state must be Hermitian");
  check_grid(t_grid);
  auto f = [&](const Matrix& g) -> Matrix { return kinetic_rhs(spec, g); };
  auto guard = [](const Matrix& g) {
    if (!g.allFinite() || trace_norm(g) > 1e3)
      throw std::runtime_error("kinetic equation integration diverged; reduce the step");
  };
  const std::vector<Matrix> coarse = integrate<Matrix>(g1_0.matrix(), t_grid, step, f, guard);
  const std::vector<Matrix> fine = integrate<Matrix>(g1_0.matrix(), t_grid, 0.5 * step, f, guard);
  VlasovTrajectory out;
  out.times = t_grid;
  out.step = step;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    out.states.emplace_back(spec.d, LabelSet{1}, coarse[k]);
    out.step_doubling_gap =
        std::max(out.step_doubling_gap, (coarse[k] - fine[k]).cwiseAbs().maxCoeff());
  }
  if (out.step_doubling_gap > 1e-8)
    throw std::runtime_error("kinetic equation step-doubling gap " +
                             std::to_string(out.step_doubling_gap) + " exceeds 1e-8");
  return out;
}

double vlasov_radius(const HamiltonianSpec& spec, const ParticleOperator& g1_0) {
  const double denom = 2.0 * op_norm(spec.Phi) * trace_norm(g1_0);
  return denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
}

VlasovSeriesResult vlasov_series(const HamiltonianSpec& spec, const ParticleOperator& g1_0,
                                 double t, int order_cap) {
  require_pair_potentials(spec, "vlasov_series");
  if (order_cap < 0 || order_cap > 8) throw std::out_of_range("order_cap must lie in 0..8");
  if (g1_0.labels() != LabelSet{1}) throw DomainError("kinetic equation state must live on label 1");
  VlasovSeriesResult out;
  out.radius = vlasov_radius(spec, g1_0);
  out.within_radius = std::abs(t) < out.radius;

  const ParticleOperator k1(spec.d, {1}, spec.K);
  auto propagator = [&](double tau) { return unitary_propagator(k1, tau, spec.hbar).matrix(); };
  const Collocation& col = collocation();
  const double half = 0.5 * t;
  std::array<Matrix, kNodes> forward, backward;
  for (int j = 0; j < kNodes; ++j) {
    const double x = half * (col.nodes[j] + 1.0);
    forward[j] = propagator(x);
    backward[j] = propagator(-x);
  }
  const Matrix total = propagator(t);

  out.terms.push_back(free_all(total, g1_0));
  for (int n = 1; n <= order_cap; ++n) {
    std::vector<ParticleOperator> factors;
    for (int i = 1; i <= n + 1; ++i) factors.push_back(g1_0.relabeled({i}));
    const ParticleOperator psi = tensor_product(factors);
    // level[j] holds J_{m+1}(x_j) in the interaction picture.
    std::vector<ParticleOperator> level(kNodes, psi);
    for (int m = n; m >= 1; --m) {
      const std::vector<ParticleOperator> inserted =
          ordered_map<ParticleOperator>(kNodes, [&](std::size_t j) {
            return free_all(backward[j], insertion(spec, free_all(forward[j], level[j])));
          });
      if (m == 1) {
        ParticleOperator acc = ParticleOperator::zero(spec.d, {1});
        for (int j = 0; j < kNodes; ++j) acc += (half * col.weights[j]) * inserted[j];
        out.terms.push_back(free_all(total, acc));
      } else {
        for (int i = 0; i < kNodes; ++i) {
          ParticleOperator acc = ParticleOperator::zero(spec.d, label_range(1, m));
          for (int j = 0; j < kNodes; ++j) acc += (half * col.integration(i, j)) * inserted[j];
          level[i] = acc;
        }
      }
    }
  }
  out.value = out.terms.front();
  for (std::size_t k = 1; k < out.terms.size(); ++k) out.value += out.terms[k];
  return out;
}

HartreeTrajectory hartree_pure(const HamiltonianSpec& spec, const Vector& psi0,
                               const std::vector<double>& t_grid, double step) {
  require_pair_potentials(spec, "hartree_pure");
  if (psi0.size() != spec.d) throw DomainError("state vector must have d entries");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw DomainError("state vector must be normalized");
  check_grid(t_grid);
  HartreeTrajectory out;
  out.times = t_grid;
  auto f = [&](const Vector& psi) -> Vector { return hartree_rhs(spec, psi); };
  auto guard = [&](const Vector& psi) {
    const double drift = std::abs(psi.norm() - 1.0);
    out.max_norm_drift = std::max(out.max_norm_drift, drift);
    if (!(drift <= 1e-6)) throw std::runtime_error("Hartree norm drift exceeds 1e-6");
  };
  out.states = integrate<Vector>(psi0, t_grid, step, f, guard);
  return out;
}

// ---------------------------------------------------------------------------

void ScalingExperiment::validate() const {
  if (epsilons.empty()) throw DomainError("epsilons must be nonempty");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw DomainError("epsilons must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1]))
      throw DomainError("epsilons must be strictly decreasing");
  }
  check_grid(times);
  if (base_g0.n_max() < 1) throw DomainError("scaling data needs a one-particle component");
  for (int s = 2; s <= base_g0.n_max(); ++s)
    if (trace_norm(base_g0[s]) != 0.0) throw PreconditionError("scaling data must be of chaos type");
}

ScalingReport epsilon_scaling(const HamiltonianSpec& spec, const ScalingExperiment& exp) {
  exp.validate();
  const int nmax = exp.base_g0.n_max();
  const ParticleOperator g1 = exp.base_g0[1];
  const VlasovTrajectory limit = vlasov_integrate(spec, g1, exp.times);

  const std::vector<std::vector<ScalingCell>> rows =
      ordered_map<std::vector<ScalingCell>>(exp.epsilons.size(), [&](std::size_t k) {
        const double eps = exp.epsilons[k];
        HamiltonianSpec scaled = spec;
        scaled.Phi *= eps;
        const Dynamics dyn(scaled);
        const OperatorSequence g0 = chaos_sequence((1.0 / eps) * g1, nmax);
        std::vector<ScalingCell> cells;
        for (std::size_t j = 0; j < exp.times.size(); ++j) {
          const double t = exp.times[j];
          ScalingCell cell;
          cell.epsilon = eps;
          cell.t = t;
          const OperatorSequence gt = solve_nonlinear_sequence(dyn, g0, t);
          for (int s = 2; s <= nmax; ++s)
            cell.scaled_norms.push_back(std::pow(eps, s) * trace_norm(gt[s]));
          cell.vlasov_gap = trace_norm(eps * gt[1] - limit.states[j]);
          cells.push_back(std::move(cell));
        }
        return cells;
      });

  ScalingReport rep;
  for (const auto& row : rows) rep.cells.insert(rep.cells.end(), row.begin(), row.end());
  const std::size_t nt = exp.times.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    std::vector<double> gaps;
    for (std::size_t k = 0; k < rows.size(); ++k) gaps.push_back(rows[k][j].vlasov_gap);
    rep.gap_monotone = rep.gap_monotone && non_increasing(gaps);
    for (std::size_t k = 1; k < gaps.size(); ++k)
      if (gaps[k - 1] > 0.0) worst = std::max(worst, gaps[k] / gaps[k - 1]);
    for (int s = 2; s <= nmax; ++s) {
      std::vector<double> norms;
      for (std::size_t k = 0; k < rows.size(); ++k) norms.push_back(rows[k][j].scaled_norms[s - 2]);
      rep.correlations_monotone = rep.correlations_monotone && non_increasing(norms);
      for (std::size_t k = 1; k < norms.size(); ++k)
        if (norms[k - 1] > 0.0) worst = std::max(worst, norms[k] / norms[k - 1]);
    }
  }
  rep.summary.name = "mean-field scaling ladder";
  rep.summary.samples = rep.cells.size();
  rep.summary.max_observed = worst;
  rep.summary.bound = 1.0;
  rep.summary.pass = rep.correlations_monotone && rep.gap_monotone;
  return rep;
}

}  // namespace bbgky
