#include "bbgky/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbgky/parallel.hpp"
#include "bbgky/partitions.hpp"
#include "bbgky/random.hpp"

namespace bbgky {

namespace {

void require_component(const OperatorSequence& f, int s, const char* what) {
  if (s < 1 || s > f.n_max())
    throw std::out_of_range(std::string(what) + ": s = " + std::to_string(s) +
                            " outside 1.." + std::to_string(f.n_max()));
}

double inv_factorial(int n) { return 1.0 / static_cast<double>(factorial(n)); }

// sum over partitions of labels of the product of components of f.
ParticleOperator expand_on(const OperatorSequence& f, const LabelSet& labels) {
  ParticleOperator acc = ParticleOperator::zero(f.d(), labels);
  for (const SetPartition& p : enumerate_partitions(labels)) acc += f.product_on(p.blocks);
  return acc;
}

ParticleOperator trace_down(const ParticleOperator& op, int s) {
  return partial_trace(op, label_range(1, s));
}

}  // namespace

// ---------------------------------------------------------------------------

ParticleOperator place_on(const ParticleOperator& op, const std::vector<int>& labels) {
  if (labels.size() != op.particles()) throw DomainError("placement needs one label per factor");
  const LabelSet sorted = make_label_set(labels);
  std::vector<int> perm(labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j)
    perm[j] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), labels[j]) -
                               sorted.begin());
  bool identity = true;
  for (std::size_t j = 0; j < perm.size(); ++j) identity = identity && perm[j] == static_cast<int>(j);
  if (identity) return op.relabeled(sorted);
  const Matrix p = permutation_matrix(op.d(), perm);
  return ParticleOperator(op.d(), sorted, p * op.matrix() * p.adjoint());
}

// ---------------------------------------------------------------------------

VonNeumannSolver::VonNeumannSolver(const Dynamics& dyn, OperatorSequence g0)
    : dyn_(dyn), g0_(std::move(g0)) {
  if (g0_.d() != dyn_.d()) throw DomainError("sequence dimension differs from the system");
}

ParticleOperator VonNeumannSolver::solve(int s, double t) const {
  require_component(g0_, s, "solve_von_neumann");
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find({s, t});
    if (it != memo_.end()) return it->second;
  }
  const std::vector<SetPartition> parts = enumerate_partitions(label_range(1, s));
  const std::vector<ParticleOperator> terms =
      ordered_map<ParticleOperator>(parts.size(), [&](std::size_t k) {
        return cluster_cumulant(dyn_, t, parts[k].blocks, g0_.product_on(parts[k].blocks));
      });
  ParticleOperator acc = ParticleOperator::zero(g0_.d(), label_range(1, s));
  for (const auto& term : terms) acc += term;
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(std::make_pair(s, t), acc);
  return acc;
}

OperatorSequence VonNeumannSolver::sequence(double t) const {
  OperatorSequence out(g0_.d(), g0_.n_max());
  out.set_scalar(g0_.scalar());
  for (int s = 1; s <= g0_.n_max(); ++s) out[s] = solve(s, t);
  return out;
}

ParticleOperator solve_von_neumann(const Dynamics& dyn, const OperatorSequence& g0, int s,
                                   double t) {
  return VonNeumannSolver(dyn, g0).solve(s, t);
}

OperatorSequence evolve_correlations(const Dynamics& dyn, const OperatorSequence& g0, double t) {
  return VonNeumannSolver(dyn, g0).sequence(t);
}

// ---------------------------------------------------------------------------

OperatorSequence cluster_expand(const OperatorSequence& f) {
  OperatorSequence out(f.d(), f.n_max());
  out.set_scalar(f.scalar());
  for (int s = 1; s <= f.n_max(); ++s) out[s] = expand_on(f, label_range(1, s));
  return out;
}

OperatorSequence cluster_invert(const OperatorSequence& f) {
  OperatorSequence out(f.d(), f.n_max());
  out.set_scalar(f.scalar());
  for (int s = 1; s <= f.n_max(); ++s) {
    const LabelSet labels = label_range(1, s);
    ParticleOperator acc = ParticleOperator::zero(f.d(), labels);
    for (const SetPartition& p : enumerate_partitions(labels)) {
      ParticleOperator term = f.product_on(p.blocks);
      term *= Complex(static_cast<double>(moebius_coefficient(p)), 0.0);
      acc += term;
    }
    out[s] = acc;
  }
  return out;
}

ParticleOperator cluster_correlation(const OperatorSequence& g, const ClusterSet& raw) {
  const ClusterSet clusters = make_cluster_set(raw);
  const LabelSet theta = decluster(clusters);
  if (static_cast<int>(theta.size()) > g.n_max())
    throw std::out_of_range("cluster set carries more particles than n_max");
  ParticleOperator acc = ParticleOperator::zero(g.d(), theta);
  for (const ClusterGrouping& grouping : enumerate_cluster_partitions(clusters)) {
    std::vector<ParticleOperator> factors;
    for (const ClusterSet& z : grouping) factors.push_back(expand_on(g, decluster(z)));
    ParticleOperator term = tensor_product(factors);
    term *= Complex(static_cast<double>(moebius_coefficient(grouping.size())), 0.0);
    acc += term;
  }
  return acc;
}

ParticleOperator cluster_correlation_from_particles(const OperatorSequence& g, const LabelSet& y,
                                                    const LabelSet& extras) {
  if (y.empty()) throw DomainError("the leading cluster must be nonempty");
  if (!labels_disjoint(y, extras)) throw DomainError("cluster and extra labels overlap");
  ClusterSet clusters{y};
  for (int j : extras) clusters.push_back({j});
  return cluster_correlation(g, clusters);
}

ParticleOperator cluster_correlation_evolve(const Dynamics& dyn, const OperatorSequence& g0,
                                            const LabelSet& y, const LabelSet& extras,
                                            double t) {
  if (y.empty()) throw DomainError("the leading cluster must be nonempty");
  if (!labels_disjoint(y, extras)) throw DomainError("cluster and extra labels overlap");
  if (static_cast<int>(y.size() + extras.size()) > g0.n_max())
    throw std::out_of_range("cluster set carries more particles than n_max");
  ClusterSet clusters{y};
  for (int j : extras) clusters.push_back({j});
  clusters = make_cluster_set(clusters);
  const LabelSet theta = decluster(clusters);

  const std::vector<ClusterGrouping> groupings = enumerate_cluster_partitions(clusters);
  const std::vector<ParticleOperator> terms =
      ordered_map<ParticleOperator>(groupings.size(), [&](std::size_t k) {
        ClusterSet groups;
        std::vector<ParticleOperator> factors;
        for (const ClusterSet& z : groupings[k]) {
          groups.push_back(decluster(z));
          factors.push_back(cluster_correlation(g0, z));
        }
        return cluster_cumulant(dyn, t, groups, tensor_product(factors));
      });
  ParticleOperator acc = ParticleOperator::zero(g0.d(), theta);
  for (const auto& term : terms) acc += term;
  return acc;
}

// ---------------------------------------------------------------------------

OperatorSequence exp_annihilation(const OperatorSequence& f, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  const int nmax = f.n_max();
  OperatorSequence out(f.d(), nmax);
  Complex scalar = f.scalar();
  for (int n = 1; n <= nmax; ++n)
    scalar += (n % 2 == 1 && sign < 0 ? -1.0 : 1.0) * inv_factorial(n) * f[n].trace();
  out.set_scalar(scalar);
  for (int s = 1; s <= nmax; ++s) {
    ParticleOperator acc = f[s];
    for (int n = 1; s + n <= nmax; ++n) {
      const double w = (n % 2 == 1 && sign < 0 ? -1.0 : 1.0) * inv_factorial(n);
      acc += w * trace_down(f[s + n], s);
    }
    out[s] = acc;
  }
  return out;
}

OperatorSequence apply_annihilation(const OperatorSequence& f) {
  const int nmax = f.n_max();
  OperatorSequence out(f.d(), nmax);
  if (nmax >= 1) out.set_scalar(f[1].trace());
  for (int s = 1; s < nmax; ++s) out[s] = trace_down(f[s + 1], s);
  return out;
}

OperatorSequence apply_creation(const OperatorSequence& f) {
  const int nmax = f.n_max();
  OperatorSequence out(f.d(), nmax);
  if (nmax >= 1) out[1] = f.scalar() * ParticleOperator::identity(f.d(), {1});
  for (int s = 2; s <= nmax; ++s) {
    const LabelSet y = label_range(1, s);
    ParticleOperator acc = ParticleOperator::zero(f.d(), y);
    for (int j = 1; j <= s; ++j) acc += embed(f.on(label_difference(y, {j})), y);
    out[s] = acc;
  }
  return out;
}

OperatorSequence exp_creation(const OperatorSequence& f) {
  OperatorSequence out = f;
  OperatorSequence power = f;
  for (int k = 1; k <= f.n_max(); ++k) {
    power = apply_creation(power);
    OperatorSequence term = power;
    term *= Complex(inv_factorial(k), 0.0);
    out += term;
  }
  return out;
}

Complex pairing(const OperatorSequence& f, const OperatorSequence& g) {
  if (f.n_max() != g.n_max() || f.d() != g.d()) throw DomainError("sequence shapes differ");
  Complex acc = f.scalar() * g.scalar();
  for (int s = 1; s <= f.n_max(); ++s)
    acc += inv_factorial(s) * (f[s].matrix().cwiseProduct(g[s].matrix().transpose())).sum();
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

ParticleOperator marginal_from_solver(const VonNeumannSolver& solver, int s, double t) {
  const int nmax = solver.initial().n_max();
  ParticleOperator acc = solver.solve(s, t);
  for (int n = 1; s + n <= nmax; ++n) acc += inv_factorial(n) * trace_down(solver.solve(s + n, t), s);
  return acc;
}

}  // namespace

ParticleOperator marginal_correlation(const Dynamics& dyn, const OperatorSequence& g0, int s,
                                      double t) {
  require_component(g0, s, "marginal_correlation");
  return marginal_from_solver(VonNeumannSolver(dyn, g0), s, t);
}

OperatorSequence marginal_correlations(const Dynamics& dyn, const OperatorSequence& g0,
                                       double t) {
  const VonNeumannSolver solver(dyn, g0);
  OperatorSequence out(g0.d(), g0.n_max());
  for (int s = 1; s <= g0.n_max(); ++s) out[s] = marginal_from_solver(solver, s, t);
  return out;
}

ParticleOperator marginal_density_from_clusters(const Dynamics& dyn, const OperatorSequence& g0,
                                                int s, double t) {
  require_component(g0, s, "marginal_density_from_clusters");
  const LabelSet y = label_range(1, s);
  ParticleOperator acc = ParticleOperator::zero(g0.d(), y);
  for (int n = 0; s + n <= g0.n_max(); ++n) {
    const LabelSet extras = n == 0 ? LabelSet{} : label_range(s + 1, s + n);
    acc += inv_factorial(n) * trace_down(cluster_correlation_evolve(dyn, g0, y, extras, t), s);
  }
  return acc;
}

ParticleOperator solve_bbgky(const Dynamics& dyn, const OperatorSequence& f0, int s, double t) {
  require_component(f0, s, "solve_bbgky");
  const LabelSet y = label_range(1, s);
  ParticleOperator acc = ParticleOperator::zero(f0.d(), y);
  for (int n = 0; s + n <= f0.n_max(); ++n) {
    const LabelSet extras = n == 0 ? LabelSet{} : label_range(s + 1, s + n);
    acc += inv_factorial(n) * trace_down(forward_cumulant(dyn, t, y, extras, f0[s + n]), s);
  }
  return acc;
}

OperatorSequence solve_bbgky_sequence(const Dynamics& dyn, const OperatorSequence& f0, double t) {
  OperatorSequence out(f0.d(), f0.n_max());
  out.set_scalar(f0.scalar());
  for (int s = 1; s <= f0.n_max(); ++s) out[s] = solve_bbgky(dyn, f0, s, t);
  return out;
}

// ---------------------------------------------------------------------------

EstimateConstants estimate_constants(const OperatorSequence& f, int up_to) {
  if (up_to < 1 || up_to > f.n_max()) throw std::out_of_range("estimate range outside 1..n_max");
  EstimateConstants k;
  for (int n = 1; n <= f.n_max(); ++n) {
    const double norm = trace_norm(f[n]);
    k.c_frak = std::max(k.c_frak, norm);
    if (n <= up_to) k.c = std::max(k.c, norm);
  }
  return k;
}

VerificationReport verify_von_neumann_bound(const Dynamics& dyn, int s, double t,
                                            std::size_t sample_count, std::uint64_t seed,
                                            bool bounded_samples) {
  if (s < 1 || s > 4) throw std::out_of_range("von Neumann bound check supports 1 <= s <= 4");
  VerificationReport rep;
  rep.name = "correlation operator bound";
  rep.samples = sample_count;
  Xoshiro256StarStar rng(seed);
  const SequenceKind kind = bounded_samples ? SequenceKind::Bounded : SequenceKind::Correlation;
  double worst_margin = -1.0;
  for (std::size_t k = 0; k < sample_count; ++k) {
    const OperatorSequence g0 = random_sequence(dyn.d(), s, rng, kind);
    const double c = estimate_constants(g0, s).c;
    const double bound = static_cast<double>(factorial(s)) * std::exp(2.0 * s) * std::pow(c, s);
    const double norm = trace_norm(solve_von_neumann(dyn, g0, s, t));
    if (norm / bound > worst_margin) {
      worst_margin = norm / bound;
      rep.max_observed = norm;
      rep.bound = bound;
      rep.constant = c;
    }
    if (norm > bound) rep.pass = false;
  }
  return rep;
}

}  // namespace bbgky
