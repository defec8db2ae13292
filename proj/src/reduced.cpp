#include <cmath>
#include <string>

#include "bbgky/hierarchy.hpp"
#include "bbgky/parallel.hpp"
#include "bbgky/partitions.hpp"
#include "bbgky/random.hpp"

namespace bbgky {

namespace {

double inv_factorial(int n) { return 1.0 / static_cast<double>(factorial(n)); }
double sign_power(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

ParticleOperator trace_down(const ParticleOperator& op, int s) {
  return partial_trace(op, label_range(1, s));
}

void require_pair_potentials(const Dynamics& dyn, const char* what) {
  if (!dyn.spec().PhiK.empty())
    throw PreconditionError(std::string(what) + " supports pair potentials only");
}

// -(i/hbar)[H_sub, f] with H the Hamiltonian of the labels sub inside f.
ParticleOperator liouvillian_on(const HamiltonianSpec& spec, const ParticleOperator& f,
                                const LabelSet& sub) {
  if (sub == f.labels()) return liouvillian(spec, f);
  const Matrix h = build_hamiltonian(spec, sub).matrix();
  ParticleOperator out = apply_local_left(h, sub, f);
  out -= apply_local_right(f, h, sub);
  out *= Complex(0.0, -1.0 / spec.hbar);
  return out;
}

// sum_{i1 in X1, i2 in X2} (-N_int(i1, i2)) f.
ParticleOperator cross_interaction(const HamiltonianSpec& spec, const ParticleOperator& f,
                                   const LabelSet& x1, const LabelSet& x2) {
  ParticleOperator acc = ParticleOperator::zero(f.d(), f.labels());
  for (int i1 : x1)
    for (int i2 : x2) acc += liouvillian(spec, f, LiouvillianMode::interaction(i1, i2));
  return acc;
}

LabelSet consecutive(int first, int count) {
  return count == 0 ? LabelSet{} : label_range(first, first + count - 1);
}

// All vectors c with 0 <= c_i <= caps[i].
std::vector<std::vector<int>> bounded_vectors(const std::vector<int>& caps) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(caps.size(), 0);
  while (true) {
    out.push_back(c);
    std::size_t i = 0;
    while (i < c.size() && c[i] == caps[i]) c[i++] = 0;
    if (i == c.size()) break;
    ++c[i];
  }
  return out;
}

struct ReducedTerm {
  std::vector<LabelSet> blocks;
  std::vector<int> counts;
  double weight;
};

// U_{1+n}(t; 1..s, s+1..s+n | g0) on labels 1..s+n.
ParticleOperator reduced_cumulant_canonical(const Dynamics& dyn, double t, int s, int n,
                                            const OperatorSequence& g0) {
  const int nmax = g0.n_max();
  const int total = s + n;
  std::vector<ReducedTerm> jobs;
  for (int k = 0; k <= n; ++k) {
    const double coef = sign_power(k) * static_cast<double>(binomial(n, k));
    for (const SetPartition& p : enumerate_partitions(label_range(1, total - k))) {
      for (const std::vector<int>& c : weak_compositions(k, p.size())) {
        bool fits = true;
        double multinomial = static_cast<double>(factorial(k));
        for (std::size_t i = 0; i < c.size(); ++i) {
          fits = fits && static_cast<int>(p.blocks[i].size()) + c[i] <= nmax;
          multinomial /= static_cast<double>(factorial(c[i]));
        }
        if (fits) jobs.push_back({p.blocks, c, coef * multinomial});
      }
    }
  }
  const std::vector<ParticleOperator> terms =
      ordered_map<ParticleOperator>(jobs.size(), [&](std::size_t j) {
        const ReducedTerm& job = jobs[j];
        int k = 0;
        for (int ci : job.counts) k += ci;
        int next = total - k + 1;
        std::vector<ParticleOperator> factors;
        for (std::size_t i = 0; i < job.blocks.size(); ++i) {
          factors.push_back(
              g0.on(label_union(job.blocks[i], consecutive(next, job.counts[i]))));
          next += job.counts[i];
        }
        ParticleOperator term = cluster_cumulant(dyn, t, job.blocks, tensor_product(factors));
        term *= Complex(job.weight, 0.0);
        return term;
      });
  ParticleOperator acc = ParticleOperator::zero(g0.d(), label_range(1, total));
  for (const auto& term : terms) acc += term;
  return acc;
}

// Terms of the correlation closure with n <= n_max - s additional particles
// whose removed labels push the total beyond n_max. Removed labels are traced
// inside each factor before the cumulant acts, which leaves it unchanged.
ParticleOperator closure_tail(const Dynamics& dyn, double t, int s, const OperatorSequence& g0) {
  const int nmax = g0.n_max();
  // traced[m][c] = Tr over the last c labels of component m + c, on 1..m.
  std::vector<std::vector<ParticleOperator>> traced(nmax + 1);
  for (int m = 1; m <= nmax; ++m)
    for (int c = 0; m + c <= nmax; ++c) traced[m].push_back(trace_down(g0[m + c], m));

  struct TailJob {
    int n;
    SetPartition partition;
  };
  std::vector<TailJob> jobs;
  for (int n = 0; s + n <= nmax; ++n)
    for (const SetPartition& p : enumerate_partitions(label_range(1, s + n))) jobs.push_back({n, p});

  const std::vector<ParticleOperator> terms =
      ordered_map<ParticleOperator>(jobs.size(), [&](std::size_t j) {
        const int n = jobs[j].n;
        const auto& blocks = jobs[j].partition.blocks;
        std::vector<int> caps;
        for (const auto& b : blocks) caps.push_back(nmax - static_cast<int>(b.size()));
        ParticleOperator operand = ParticleOperator::zero(g0.d(), label_range(1, s + n));
        bool any = false;
        for (const std::vector<int>& c : bounded_vectors(caps)) {
          int k = 0;
          double weight = 1.0;
          for (int ci : c) {
            k += ci;
            weight *= inv_factorial(ci);
          }
          if (n + k <= nmax - s) continue;
          std::vector<ParticleOperator> factors;
          for (std::size_t i = 0; i < blocks.size(); ++i)
            factors.push_back(traced[blocks[i].size()][c[i]].relabeled(blocks[i]));
          operand += (sign_power(k) * weight) * tensor_product(factors);
          any = true;
        }
        if (!any) return ParticleOperator::zero(g0.d(), label_range(1, s));
        return inv_factorial(n) * trace_down(cluster_cumulant(dyn, t, blocks, operand), s);
      });
  ParticleOperator acc = ParticleOperator::zero(g0.d(), label_range(1, s));
  for (const auto& term : terms) acc += term;
  return acc;
}

}  // namespace

ParticleOperator reduced_cumulant(const Dynamics& dyn, double t, const LabelSet& y,
                                  const LabelSet& extras, const OperatorSequence& g0) {
  if (y.empty()) throw DomainError("the leading cluster must be nonempty");
  if (!labels_disjoint(y, extras)) throw DomainError("cluster and extra labels overlap");
  const int s = static_cast<int>(y.size());
  const int n = static_cast<int>(extras.size());
  if (s + n > g0.n_max())
    throw std::out_of_range("reduced cumulant needs |Y| + n <= n_max, got " +
                            std::to_string(s + n));
  const ParticleOperator u = reduced_cumulant_canonical(dyn, t, s, n, g0);
  std::vector<int> order(y.begin(), y.end());
  order.insert(order.end(), extras.begin(), extras.end());
  return place_on(u, order);
}

ParticleOperator solve_nonlinear_bbgky(const Dynamics& dyn, const OperatorSequence& g0, int s,
                                       double t, SeriesClosure closure) {
  if (s < 1 || s > g0.n_max())
    throw std::out_of_range("solve_nonlinear_bbgky: s outside 1..n_max");
  if (closure == SeriesClosure::Density) return solve_nonlinear_sequence(dyn, g0, t, closure)[s];
  ParticleOperator acc = ParticleOperator::zero(g0.d(), label_range(1, s));
  for (int n = 0; s + n <= g0.n_max(); ++n)
    acc += inv_factorial(n) * trace_down(reduced_cumulant_canonical(dyn, t, s, n, g0), s);
  if (closure == SeriesClosure::Correlation) acc += closure_tail(dyn, t, s, g0);
  return acc;
}

OperatorSequence solve_nonlinear_sequence(const Dynamics& dyn, const OperatorSequence& g0,
                                          double t, SeriesClosure closure) {
  if (closure == SeriesClosure::Density) {
    // Densities of the underlying finite system, their correlations evolved
    // by the von Neumann hierarchy, then mapped back.
    OperatorSequence f0 = cluster_expand(g0);
    f0.set_scalar(1.0);
    OperatorSequence d0 = exp_annihilation(f0, -1);
    d0.set_scalar(0.0);
    const OperatorSequence dt = cluster_expand(evolve_correlations(dyn, cluster_invert(d0), t));
    OperatorSequence out = cluster_invert(exp_annihilation(dt, +1));
    out.set_scalar(0.0);
    return out;
  }
  OperatorSequence out(g0.d(), g0.n_max());
  for (int s = 1; s <= g0.n_max(); ++s) out[s] = solve_nonlinear_bbgky(dyn, g0, s, t, closure);
  return out;
}

// ---------------------------------------------------------------------------

ParticleOperator von_neumann_generator(const Dynamics& dyn, const OperatorSequence& g, int s) {
  require_pair_potentials(dyn, "von_neumann_generator");
  if (s < 1 || s > g.n_max()) throw std::out_of_range("von_neumann_generator: s outside 1..n_max");
  const HamiltonianSpec& spec = dyn.spec();
  const LabelSet y = label_range(1, s);
  ParticleOperator acc = liouvillian(spec, g[s]);
  PartitionConstraints two;
  two.block_count = 2;
  for (const SetPartition& p : enumerate_partitions(y, two))
    acc += cross_interaction(spec, g.product_on(p.blocks), p.blocks[0], p.blocks[1]);
  return acc;
}

ParticleOperator nonlinear_bbgky_rhs(const Dynamics& dyn, const OperatorSequence& g, int s) {
  require_pair_potentials(dyn, "nonlinear_bbgky_rhs");
  if (s < 1 || s > g.n_max()) throw std::out_of_range("nonlinear_bbgky_rhs: s outside 1..n_max");
  ParticleOperator acc = von_neumann_generator(dyn, g, s);
  if (s == g.n_max()) return acc;
  const HamiltonianSpec& spec = dyn.spec();
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

ParticleOperator generator_series_term(const Dynamics& dyn, const OperatorSequence& f, int s,
                                       int n) {
  require_pair_potentials(dyn, "generator_series_term");
  if (s < 1 || n < 0 || s + n > f.n_max())
    throw std::out_of_range("generator_series_term needs 1 <= s and s + n <= n_max");
  const HamiltonianSpec& spec = dyn.spec();
  const int total = s + n;
  ParticleOperator acc = ParticleOperator::zero(f.d(), label_range(1, total));
  PartitionConstraints two;
  two.block_count = 2;
  for (int k = 0; k <= n; ++k) {
    const double coef = sign_power(k) * static_cast<double>(binomial(n, k));
    const int m = total - k;
    const LabelSet base = label_range(1, m);
    ParticleOperator part = liouvillian_on(spec, f[total], base);
    for (const SetPartition& p : enumerate_partitions(base, two)) {
      for (int k1 = 0; k1 <= k; ++k1) {
        const LabelSet x1 = label_union(p.blocks[0], consecutive(m + 1, k - k1));
        const LabelSet x2 = label_union(p.blocks[1], consecutive(m + 1 + k - k1, k1));
        const ParticleOperator prod = tensor_product(f.on(x1), f.on(x2));
        part += static_cast<double>(binomial(k, k1)) *
                cross_interaction(spec, prod, p.blocks[0], p.blocks[1]);
      }
    }
    acc += coef * part;
  }
  return inv_factorial(n) * trace_down(acc, s);
}

ParticleOperator closure_generator(const Dynamics& dyn, const OperatorSequence& g, int s) {
  if (s < 1 || s > g.n_max()) throw std::out_of_range("closure_generator: s outside 1..n_max");
  const OperatorSequence corr = exp_annihilation(g, -1);
  ParticleOperator acc = ParticleOperator::zero(g.d(), label_range(1, s));
  for (int n = 0; s + n <= g.n_max(); ++n)
    acc += inv_factorial(n) * trace_down(von_neumann_generator(dyn, corr, s + n), s);
  return acc;
}

// ---------------------------------------------------------------------------

VerificationReport verify_reduced_bound(const Dynamics& dyn, int s, int n, double t,
                                        std::size_t sample_count, std::uint64_t seed) {
  if (s < 1 || n < 0 || s + n > 4)
    throw std::out_of_range("reduced cumulant bound check supports s + n <= 4");
  VerificationReport rep;
  rep.name = "reduced cumulant bound";
  rep.samples = sample_count;
  Xoshiro256StarStar rng(seed);
  double worst = -1.0;
  for (std::size_t k = 0; k < sample_count; ++k) {
    const OperatorSequence g0 = random_sequence(dyn.d(), s + n, rng, SequenceKind::Correlation);
    const double c = estimate_constants(g0, s + n).c;
    const double bound = 2.0 * static_cast<double>(factorial(n) * factorial(s)) *
                         std::pow(2.0 * std::exp(3.0) * c, s + n);
    const double norm =
        trace_norm(reduced_cumulant_canonical(dyn, t, s, n, g0));
    if (norm / bound > worst) {
      worst = norm / bound;
      rep.max_observed = norm;
      rep.bound = bound;
      rep.constant = c;
    }
    if (norm > bound) rep.pass = false;
  }
  return rep;
}

}  // namespace bbgky
