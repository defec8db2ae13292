#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "bbgky/experiment.hpp"
#include "bbgky/hierarchy.hpp"
#include "bbgky/meanfield.hpp"
#include "bbgky/partitions.hpp"

namespace bbgky {

namespace {

CheckRow row(std::string name, std::string tag, double value, double bound) {
  const bool pass = std::isfinite(value) && value <= bound;
  return {std::move(name), std::move(tag), value, bound, pass};
}

double relative_gap(const ParticleOperator& a, const ParticleOperator& ref) {
  return trace_norm(a - ref) / std::max(trace_norm(ref), 1e-300);
}

std::vector<double> check_times(const SystemConfig& c) {
  if (c.times.empty()) return {0.5};
  return c.times;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

HamiltonianSpec free_spec(const SystemConfig& c) {
  HamiltonianSpec spec = c.hamiltonian();
  spec.Phi = Matrix::Zero(spec.Phi.rows(), spec.Phi.cols());
  return spec;
}

// Central difference of a time-dependent operator at t.
ParticleOperator derivative(const std::function<ParticleOperator(double)>& f, double t,
                            double h = 1e-3) {
  return (0.5 / h) * (f(t + h) - f(t - h));
}

// Five-point stencil, fourth order in h.
ParticleOperator derivative4(const std::function<ParticleOperator(double)>& f, double t,
                             double h = 1e-3) {
  ParticleOperator out = 8.0 * (f(t + h) - f(t - h));
  out -= f(t + 2 * h) - f(t - 2 * h);
  out *= Complex(1.0 / (12.0 * h), 0.0);
  return out;
}

ParticleOperator chaos_product(const ParticleOperator& g1, int count) {
  std::vector<ParticleOperator> factors;
  for (int i = 1; i <= count; ++i) factors.push_back(g1.relabeled({i}));
  return tensor_product(factors);
}

}  // namespace

std::vector<CheckRow> tensor_checks(const SystemConfig& c) {
  std::vector<CheckRow> rows;
  const double tol = c.tolerances.identity;
  Xoshiro256StarStar rng(mix(c.seed, 1));
  const ParticleOperator a = random_hermitian(rng, c.d, {1});
  const ParticleOperator b = random_hermitian(rng, c.d, {2});
  const ParticleOperator ab = tensor_product(a, b);
  rows.push_back(row("partial trace of a product", "Tr_2(a x b) = a Tr b",
                     max_abs_diff(partial_trace(ab, {1}), b.trace() * a), tol));
  rows.push_back(row("trace of an embedding", "Tr(a x I) = d Tr a",
                     std::abs(embed(a, {1, 2}).trace() - static_cast<double>(c.d) * a.trace()),
                     tol));

  const int m = std::min(c.n_max, 3);
  const LabelSet labels = label_range(1, m);
  const ParticleOperator f = random_hermitian(rng, c.d, labels);
  const HamiltonianSpec spec = c.hamiltonian();
  const ParticleOperator h = build_hamiltonian(spec, labels);
  double norm_gap = 0.0;
  for (double t : check_times(c)) {
    const Matrix u = unitary_propagator(h, t, c.hbar).matrix();
    norm_gap = std::max(norm_gap, std::abs(trace_norm(conjugate(u, f)) - trace_norm(f)));
  }
  rows.push_back(row("unitary conjugation keeps the trace norm", "||U f U*||_1 = ||f||_1",
                     norm_gap, tol));
  if (m >= 2) {
    for (int sign : {1, -1}) {
      const Matrix s = symmetrizer(c.d, static_cast<std::size_t>(m), sign);
      rows.push_back(row(sign > 0 ? "symmetrizer is a projector" : "antisymmetrizer is a projector",
                         "S_n^2 = S_n", (s * s - s).cwiseAbs().maxCoeff(), tol));
    }
    rows.push_back(row("permutation average is symmetric", "p f p^-1 = f after averaging",
                       permutation_symmetry_error(permutation_average(f)), tol));
  }
  return rows;
}

std::vector<CheckRow> partition_checks(const SystemConfig&) {
  std::vector<CheckRow> rows;
  double count_gap = 0.0;
  double moebius_sum = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const auto parts = enumerate_partitions(label_range(1, n));
    const PartitionCounts counts = partition_counts(n);
    std::uint64_t stirling_sum = 0;
    for (auto v : counts.stirling) stirling_sum += v;
    count_gap = std::max({count_gap, std::abs(static_cast<double>(parts.size()) -
                                              static_cast<double>(counts.bell)),
                          std::abs(static_cast<double>(stirling_sum) -
                                   static_cast<double>(counts.bell))});
    if (n >= 2) {
      std::int64_t total = 0;
      for (const auto& p : parts) total += moebius_coefficient(p);
      moebius_sum = std::max(moebius_sum, std::abs(static_cast<double>(total)));
    }
  }
  rows.push_back(row("partitions counted by Bell and Stirling numbers",
                     "|Pi(n)| = Bell(n) = sum_l s(n,l), n <= 6", count_gap, 0.0));
  rows.push_back(row("Moebius weights sum to zero", "sum_P (-1)^{|P|-1}(|P|-1)! = 0, 2 <= n <= 6",
                     moebius_sum, 0.0));

  // Exact integer left side against n! e^n in long double.
  long double worst = 0.0L;
  for (int n = 1; n <= 10; ++n) {
    const PartitionCounts counts = partition_counts(n);
    std::uint64_t lhs = 0;
    for (int l = 1; l <= n; ++l) lhs += counts.stirling[l - 1] * factorial(l - 1);
    const long double rhs = static_cast<long double>(factorial(n)) * std::exp(static_cast<long double>(n));
    worst = std::max(worst, static_cast<long double>(lhs) / rhs);
  }
  rows.push_back(row("Stirling sum bounded by n! e^n",
                     "sum_l s(n,l)(l-1)! <= n! e^n, n <= 10 (ratio)", static_cast<double>(worst),
                     1.0));
  return rows;
}

std::vector<CheckRow> dynamics_checks(const SystemConfig& c) {
  std::vector<CheckRow> rows;
  const Dynamics dyn(c.hamiltonian());
  const int m = std::min(c.n_max, 3);
  const LabelSet labels = label_range(1, m);
  Xoshiro256StarStar rng(mix(c.seed, 2));
  const ParticleOperator f = random_hermitian(rng, c.d, labels);
  double unitarity = 0.0, group = 0.0, trace = 0.0;
  for (double t : check_times(c)) {
    const Matrix& u = *dyn.propagator(static_cast<std::size_t>(m), t);
    unitarity = std::max(unitarity,
                         (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff());
    const ParticleOperator ft = evolve_group(dyn, f, t);
    group = std::max(group, max_abs_diff(evolve_group(dyn, ft, 0.3), evolve_group(dyn, f, t + 0.3)));
    trace = std::max(trace, std::abs(ft.trace() - f.trace()));
  }
  rows.push_back(row("propagator is unitary", "U U* = I", unitarity, c.tolerances.identity));
  rows.push_back(row("evolution group property", "G(t1) G(t2) = G(t1 + t2)", group,
                     c.tolerances.group));
  rows.push_back(row("evolution keeps the trace", "Tr G(t) f = Tr f", trace, c.tolerances.identity));
  const ParticleOperator fd = derivative([&](double t) { return evolve_group(dyn, f, t); }, 0.0);
  rows.push_back(row("generator of the evolution", "d/dt G(t) f at 0 = -(i/hbar)[H, f]",
                     relative_gap(fd, liouvillian(dyn.spec(), f)), c.tolerances.generator));
  if (m >= 2) {
    ParticleOperator interaction = ParticleOperator::zero(c.d, labels);
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j)
        interaction += liouvillian(dyn.spec(), f, LiouvillianMode::interaction(i, j));
    const ParticleOperator sd =
        derivative([&](double t) { return scattering_operator(dyn, f, t); }, 0.0);
    const double scale = std::max(trace_norm(interaction), trace_norm(f));
    rows.push_back(row("generator of the scattering operator",
                       "d/dt G-hat(t) f at 0 = sum of pair interaction generators",
                       trace_norm(sd - interaction) / scale, c.tolerances.generator));
  }
  return rows;
}

std::vector<CheckRow> cumulant_checks(const SystemConfig& c) {
  std::vector<CheckRow> rows;
  const Dynamics dyn(c.hamiltonian());
  const Dynamics free_dyn(free_spec(c));
  const int m = std::min(c.n_max, 3);
  Xoshiro256StarStar rng(mix(c.seed, 3));

  const ParticleOperator f1 = random_hermitian(rng, c.d, label_range(1, m));
  rows.push_back(row("first-order cumulant at t = 0", "A_1(0) = I",
                     max_abs_diff(cluster_cumulant(dyn, 0.0, {label_range(1, m)}, f1), f1),
                     c.tolerances.cumulant_initial));
  if (m >= 2) {
    double initial = 0.0, free_value = 0.0;
    for (int n = 2; n <= m; ++n) {
      const ParticleOperator f = random_hermitian(rng, c.d, label_range(1, n));
      initial = std::max(initial,
                         trace_norm(cluster_cumulant(dyn, 0.0, singletons(label_range(1, n)), f)));
      for (double t : check_times(c))
        free_value = std::max(
            free_value,
            trace_norm(cluster_cumulant(free_dyn, t, singletons(label_range(1, n)), f)));
    }
    rows.push_back(row("higher cumulants vanish at t = 0", "A_n(0) = 0, n >= 2", initial,
                       c.tolerances.cumulant_initial));
    rows.push_back(row("cumulants vanish without interaction", "Phi = 0: A_n(t) = 0, n >= 2",
                       free_value, c.tolerances.free_vanishing));
  }
  double ratio = 0.0;
  for (int n = 1; n <= m; ++n) {
    const VerificationReport rep =
        verify_cumulant_bound(dyn, n, check_times(c).back(), 100, mix(c.seed, 30 + n));
    ratio = std::max(ratio, rep.max_observed / rep.bound);
  }
  rows.push_back(row("cumulant norm bound", "||A_n(t) f||_1 <= n! e^n ||f||_1 (ratio)", ratio, 1.0));
  return rows;
}

std::vector<CheckRow> hierarchy_checks(const SystemConfig& c) {
  std::vector<CheckRow> rows;
  const Tolerances& tol = c.tolerances;
  const Dynamics dyn(c.hamiltonian());
  const int nmax = c.n_max;
  const std::vector<double> times = check_times(c);

  double roundtrip = 0.0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const OperatorSequence x = random_sequence(c.d, nmax, mix(c.seed, 40 + k), SequenceKind::Bounded);
    roundtrip = std::max({roundtrip, max_abs_diff(cluster_invert(cluster_expand(x)), x),
                          max_abs_diff(cluster_expand(cluster_invert(x)), x)});
  }
  rows.push_back(row("Moebius roundtrip", "cluster_invert o cluster_expand = id", roundtrip,
                     tol.roundtrip));

  for (double t : times) {
    double gap = 0.0;
    for (std::uint64_t k = 0; k < 3; ++k) {
      const OperatorSequence g0 =
          random_sequence(c.d, nmax, mix(c.seed, 50 + k), SequenceKind::Correlation);
      const OperatorSequence big0 = exp_annihilation(g0, +1);
      for (int s = 1; s <= nmax; ++s)
        gap = std::max(gap, trace_norm(marginal_correlation(dyn, g0, s, t) -
                                       solve_nonlinear_bbgky(dyn, big0, s, t)));
    }
    char label[48];
    std::snprintf(label, sizeof label, "dual route at t = %g", t);
    rows.push_back(row(label,
                       "G_s(t) from g(t) = nonlinear hierarchy solution", gap, tol.dual_route));
  }

  {
    Xoshiro256StarStar rng(mix(c.seed, 60));
    const ParticleOperator g1 = random_state(rng, c.d, {1});
    const OperatorSequence chaos = chaos_sequence(g1, nmax);
    double gap = 0.0;
    for (double t : times)
      for (int s = 1; s <= nmax; ++s) {
        const ParticleOperator nonlinear = solve_nonlinear_bbgky(dyn, chaos, s, t);
        ParticleOperator direct = ParticleOperator::zero(c.d, label_range(1, s));
        for (int n = 0; n <= nmax - s; ++n) {
          const ParticleOperator term = cluster_cumulant(
              dyn, t, singletons(label_range(1, s + n)), chaos_product(g1, s + n));
          direct += (1.0 / static_cast<double>(factorial(n))) * partial_trace(term, label_range(1, s));
        }
        const ParticleOperator traced = marginal_correlation(dyn, chaos, s, t);
        gap = std::max({gap, trace_norm(nonlinear - direct), trace_norm(traced - direct)});
      }
    rows.push_back(row("chaos data through three routes",
                       "sum_n 1/n! Tr A_{s+n}(t) prod G_1(0) = nonlinear = traced g(t)", gap,
                       tol.chaos));
    if (nmax >= 2) {
      const Dynamics free_dyn(free_spec(c));
      double worst = 0.0;
      for (double t : times)
        for (int s = 2; s <= nmax; ++s)
          worst = std::max(worst, trace_norm(solve_nonlinear_bbgky(free_dyn, chaos, s, t)));
      rows.push_back(row("free chaos stays uncorrelated", "Phi = 0: G_s(t) = 0, s >= 2", worst,
                         tol.free_vanishing));
    }
  }

  const OperatorSequence big0 =
      exp_annihilation(random_sequence(c.d, nmax, mix(c.seed, 70), SequenceKind::Correlation), +1);
  {
    const OperatorSequence mid = solve_nonlinear_sequence(dyn, big0, 0.7);
    double gap = 0.0;
    for (int s = 1; s <= nmax; ++s)
      gap = std::max(gap, trace_norm(solve_nonlinear_bbgky(dyn, mid, s, 0.3) -
                                     solve_nonlinear_bbgky(dyn, big0, s, 1.0)));
    rows.push_back(row("group property of the nonlinear hierarchy",
                       "evolving 0.7 then 0.3 = evolving 1.0", gap, tol.group));
  }

  const OperatorSequence f = random_sequence(c.d, nmax, mix(c.seed, 71), SequenceKind::Bounded);
  {
    double gap = 0.0;
    for (int s = 1; s <= std::min(nmax, 2); ++s) {
      const LabelSet y = label_range(1, s);
      const ParticleOperator fd =
          derivative([&](double t) { return reduced_cumulant(dyn, t, y, {}, f); }, 0.0);
      gap = std::max(gap, relative_gap(fd, von_neumann_generator(dyn, f, s)));
    }
    rows.push_back(row("first reduced cumulant generator", "d/dt U_1(t; Y) at 0 = N(Y | f)", gap,
                       tol.generator));
  }
  if (nmax >= 3) {
    double worst = 0.0;
    for (int s = 1; s + 2 <= nmax && s <= 2; ++s)
      for (int n = 2; s + n <= nmax; ++n) {
        const LabelSet y = label_range(1, s);
        const LabelSet extras = label_range(s + 1, s + n);
        const ParticleOperator fd = derivative4(
            [&](double t) { return reduced_cumulant(dyn, t, y, extras, f); }, 0.0);
        worst = std::max(worst, trace_norm(partial_trace(fd, y)));
      }
    rows.push_back(row("traced reduced cumulant generators vanish",
                       "Tr d/dt U_{1+n}(t) at 0 = 0, n >= 2", worst, tol.traced_generator));
    double third = 0.0;
    for (int s = 1; s + 2 <= nmax; ++s)
      third = std::max(third, trace_norm(generator_series_term(dyn, f, s, 2)));
    rows.push_back(row("third generator term vanishes", "I_3 = 0", third, tol.third_term));
  }

  {
    const double t = times.front();
    double closed = 0.0, initial = 0.0;
    const OperatorSequence big_t = solve_nonlinear_sequence(dyn, big0, t);
    for (int s = 1; s <= std::min(nmax, 2); ++s) {
      const ParticleOperator fd =
          derivative([&](double u) { return solve_nonlinear_bbgky(dyn, big0, s, u); }, t);
      closed = std::max(closed, relative_gap(fd, closure_generator(dyn, big_t, s)));
      const ParticleOperator fd0 = derivative(
          [&](double u) { return solve_nonlinear_bbgky(dyn, big0, s, u, SeriesClosure::Truncated); },
          0.0);
      initial = std::max(initial, relative_gap(fd0, nonlinear_bbgky_rhs(dyn, big0, s)));
    }
    rows.push_back(row("generator of the closed series", "d/dt G_s(t) = closure generator",
                       closed, tol.generator));
    rows.push_back(row("hierarchy generator at t = 0", "d/dt G_s(t) at 0 = nonlinear hierarchy rhs",
                       initial, tol.generator));

    double strong = 0.0, through_f = 0.0;
    auto density_flow = [&](double u) {
      return solve_nonlinear_sequence(dyn, big0, u, SeriesClosure::Density);
    };
    const OperatorSequence dens_t = density_flow(t);
    for (int s = 1; s < nmax; ++s) {
      const ParticleOperator fd =
          derivative4([&](double u) { return density_flow(u)[s]; }, t);
      strong = std::max(strong, relative_gap(fd, nonlinear_bbgky_rhs(dyn, dens_t, s)));
    }
    OperatorSequence f_big0 = cluster_expand(big0);
    f_big0.set_scalar(1.0);
    const OperatorSequence via_f = cluster_invert(solve_bbgky_sequence(dyn, f_big0, t));
    for (int s = 1; s <= nmax; ++s)
      through_f = std::max(through_f, trace_norm(dens_t[s] - via_f[s]));
    if (nmax >= 2)
      rows.push_back(row("finite-system closure solves the hierarchy",
                         "d/dt G_s(t) = nonlinear hierarchy rhs, s < n_max, densities vanish above n_max",
                         strong, tol.generator));
    rows.push_back(row("finite-system closure against the BBGKY flow",
                       "G(t) = cluster_invert(F(t)), F(0) = cluster_expand(G(0))", through_f,
                       tol.triangle));

    // d/dt (f, G(t)) against the pairing with the closure generator.
    const OperatorSequence test = random_sequence(c.d, nmax, mix(c.seed, 72), SequenceKind::Bounded);
    auto pairing_at = [&](double u) {
      return pairing(test, solve_nonlinear_sequence(dyn, big0, u));
    };
    const double h = 1e-3;
    const Complex fd = (pairing_at(t + h) - pairing_at(t - h)) / (2 * h);
    OperatorSequence gen(c.d, nmax);
    for (int s = 1; s <= nmax; ++s) gen[s] = closure_generator(dyn, big_t, s);
    const Complex exact = pairing(test, gen);
    rows.push_back(row("weak form of the hierarchy", "d/dt (f, G(t)) = (f, generator)",
                       std::abs(fd - exact) / std::max(std::abs(exact), 1e-300), tol.generator));
  }

  {
    const OperatorSequence lhs = apply_annihilation(f);
    const OperatorSequence g = random_sequence(c.d, nmax, mix(c.seed, 73), SequenceKind::Bounded);
    OperatorSequence g_low = g;
    g_low[nmax] = ParticleOperator::zero(c.d, label_range(1, nmax));
    const Complex a = pairing(lhs, g_low);
    const Complex b = pairing(f, apply_creation(g_low));
    rows.push_back(row("creation adjoint to annihilation", "(a f, g) = (f, a+ g)",
                       std::abs(a - b), tol.identity * std::max(1.0, std::abs(a))));
  }

  {
    const OperatorSequence g0 =
        random_sequence(c.d, nmax, mix(c.seed, 74), SequenceKind::Correlation);
    OperatorSequence f0(c.d, nmax);
    f0.set_scalar(1.0);
    for (int s = 1; s <= nmax; ++s) f0[s] = marginal_density_from_clusters(dyn, g0, s, 0.0);
    double gap = 0.0;
    for (double t : times)
      for (int s = 1; s <= nmax; ++s)
        gap = std::max(gap, trace_norm(marginal_density_from_clusters(dyn, g0, s, t) -
                                       solve_bbgky(dyn, f0, s, t)));
    rows.push_back(row("marginal densities through cluster correlations",
                       "F_s(t) from cluster correlations = BBGKY solution", gap, tol.triangle));
  }

  {
    const ParticleOperator rho = random_symmetric_state(c.d, nmax, mix(c.seed, 75));
    const OperatorSequence f0 = marginal_sequence(rho);
    double min_eig = std::numeric_limits<double>::infinity(), herm = 0.0, oracle = 0.0;
    for (double t : times) {
      const OperatorSequence ft = solve_bbgky_sequence(dyn, f0, t);
      const OperatorSequence exact = marginal_sequence(evolve_group(dyn, rho, t));
      for (int s = 1; s <= nmax; ++s) {
        min_eig = std::min(min_eig, min_eigenvalue(ft[s]));
        herm = std::max(herm, hermiticity_error(ft[s].matrix()));
      }
      oracle = std::max(oracle, max_abs_diff(ft, exact));
    }
    rows.push_back(row("BBGKY solution of a genuine state is positive",
                       "min eig F_s(t) >= 0 (negated)", -min_eig, tol.positivity));
    rows.push_back(row("BBGKY solution of a genuine state is Hermitian", "F_s(t)* = F_s(t)", herm,
                       tol.hermiticity));
    rows.push_back(row("BBGKY solution equals the evolved marginals",
                       "F_s(t) = n!/(n-s)! Tr rho(t)", oracle, tol.triangle));
  }
  return rows;
}

std::vector<CheckRow> estimate_checks(const SystemConfig& c) {
  std::vector<CheckRow> rows;
  const Dynamics dyn(c.hamiltonian());
  const int m = std::min(c.n_max, 3);
  const double t = check_times(c).back();
  double reduced = 0.0, correlation = 0.0;
  for (int s = 1; s <= m; ++s) {
    for (int n = 0; s + n <= m; ++n) {
      const VerificationReport rep =
          verify_reduced_bound(dyn, s, n, t, 100, mix(c.seed, 80 + 10 * s + n));
      reduced = std::max(reduced, rep.max_observed / rep.bound);
    }
    const VerificationReport rep =
        verify_von_neumann_bound(dyn, s, t, 100, mix(c.seed, 90 + s), true);
    correlation = std::max(correlation, rep.max_observed / rep.bound);
  }
  rows.push_back(row("reduced cumulant bound",
                     "||U_{1+n}||_1 <= 2 n! s! (2 e^3 c)^{s+n} (ratio)", reduced, 1.0));
  rows.push_back(row("correlation operator bound", "||g_s(t)||_1 <= s! e^{2s} c^s (ratio)",
                     correlation, 1.0));
  return rows;
}

std::vector<CheckRow> meanfield_checks(const SystemConfig& c, ScalingReport* scaling) {
  std::vector<CheckRow> rows;
  const Tolerances& tol = c.tolerances;
  const HamiltonianSpec spec = c.hamiltonian();
  Xoshiro256StarStar rng(mix(c.seed, 100));
  const ParticleOperator g1 = random_state(rng, c.d, {1});

  {
    OperatorSequence g(c.d, 3);
    g[1] = g1;
    const ParticleOperator k1 = vlasov_kinetic_rhs(spec, g1);
    const ParticleOperator r1 = vlasov_hierarchy_rhs(spec, g, 1);
    const ParticleOperator r2 = vlasov_hierarchy_rhs(spec, g, 2);
    const ParticleOperator product_rhs =
        r2 + tensor_product(r1, g1.relabeled({2})) + tensor_product(g1, r1.relabeled({2}));
    const ParticleOperator kinetic_product =
        tensor_product(k1, g1.relabeled({2})) + tensor_product(g1, k1.relabeled({2}));
    rows.push_back(row("kinetic equation from the factorized hierarchy",
                       "d/dt (g_1 x g_1) from the hierarchy = product rule of the kinetic rhs",
                       std::max(max_abs_diff(product_rhs, kinetic_product), max_abs_diff(r1, k1)),
                       tol.product_rule));
  }

  {
    const double radius = vlasov_radius(spec, g1);
    const double t = std::isfinite(radius) ? 0.25 * radius : 0.25;
    const VlasovSeriesResult series = vlasov_series(spec, g1, t, 6);
    const VlasovTrajectory rk = vlasov_integrate(spec, g1, {t});
    rows.push_back(row("iteration series against RK4", "series at t = t0 / 4 equals the ODE solution",
                       max_abs_diff(series.value, rk.states.back()), tol.vlasov_series));
  }

  {
    const Vector psi = random_gaussian(rng, c.d, 1).col(0).normalized();
    const ParticleOperator pure(c.d, {1}, psi * psi.adjoint());
    const HartreeTrajectory hartree = hartree_pure(spec, psi, {1.0});
    const VlasovTrajectory vlasov = vlasov_integrate(spec, pure, {1.0});
    const Vector& phi = hartree.states.back();
    rows.push_back(row("Hartree pure state against the kinetic equation",
                       "|psi(1)><psi(1)| = g_1(1) for pure data",
                       max_abs_diff(ParticleOperator(c.d, {1}, phi * phi.adjoint()),
                                    vlasov.states.back()),
                       tol.hartree));
    rows.push_back(row("kinetic equation keeps the trace", "Tr g_1(t) = Tr g_1(0)",
                       std::abs(vlasov.states.back().trace() - 1.0), tol.identity * 100));
  }

  if (c.n_max >= 2) {
    ScalingExperiment exp;
    exp.epsilons = c.scaling_epsilons();
    exp.times = check_times(c);
    exp.base_g0 = chaos_sequence(g1, c.n_max);
    const ScalingReport rep = epsilon_scaling(spec, exp);
    double corr_ratio = 0.0, gap_ratio = 0.0;
    for (std::size_t j = 0; j < exp.times.size(); ++j)
      for (std::size_t k = 1; k < exp.epsilons.size(); ++k) {
        const ScalingCell& prev = rep.cells[(k - 1) * exp.times.size() + j];
        const ScalingCell& cur = rep.cells[k * exp.times.size() + j];
        for (std::size_t s = 0; s < cur.scaled_norms.size(); ++s)
          if (prev.scaled_norms[s] > 0.0)
            corr_ratio = std::max(corr_ratio, cur.scaled_norms[s] / prev.scaled_norms[s]);
        if (prev.vlasov_gap > 0.0) gap_ratio = std::max(gap_ratio, cur.vlasov_gap / prev.vlasov_gap);
      }
    CheckRow corr = row("scaled correlations shrink with epsilon",
                        "||eps^s G_s(t)||_1 non-increasing as eps decreases (ratio)", corr_ratio, 1.0);
    corr.pass = rep.correlations_monotone;
    CheckRow gap = row("one-particle operator approaches the kinetic solution",
                       "||eps G_1(t) - g_1(t)||_1 non-increasing as eps decreases (ratio)",
                       gap_ratio, 1.0);
    gap.pass = rep.gap_monotone;
    rows.push_back(corr);
    rows.push_back(gap);
    if (scaling) *scaling = rep;
  }
  return rows;
}

std::vector<CheckRow> observable_checks(const SystemConfig& c,
                                        std::vector<std::vector<double>>* table) {
  std::vector<CheckRow> rows;
  if (c.n_max < 2) return rows;
  const Dynamics dyn(c.hamiltonian());
  const int n = c.n_max;
  const ParticleOperator rho = random_symmetric_state(c.d, n, mix(c.seed, 110));
  Xoshiro256StarStar rng(mix(c.seed, 111));
  const ParticleOperator a1 = random_hermitian(rng, c.d, {1});
  const LabelSet all = label_range(1, n);
  ParticleOperator a_total = ParticleOperator::zero(c.d, all);
  for (int i = 1; i <= n; ++i) a_total += embed(a1.relabeled({i}), all);
  const OperatorSequence f0 = marginal_sequence(rho);
  double mean_gap = 0.0, disp_gap = 0.0;
  for (double t : check_times(c)) {
    const OperatorSequence ft = solve_bbgky_sequence(dyn, f0, t);
    const OperatorSequence gt = cluster_invert(ft);
    const ObservableStats stats = observable_stats(a1, ft[1], gt[1], gt[2]);
    const ParticleOperator rho_t = evolve_group(dyn, rho, t);
    const Complex mean = (a_total.matrix() * rho_t.matrix()).trace();
    const Complex second = (a_total.matrix() * a_total.matrix() * rho_t.matrix()).trace();
    const Complex variance = second - mean * mean;
    if (table)
      table->push_back({t, stats.mean.real(), mean.real(), stats.dispersion.real(), variance.real()});
    mean_gap = std::max(mean_gap, std::abs(stats.mean - mean));
    disp_gap = std::max(disp_gap, std::abs(stats.dispersion - variance));
  }
  rows.push_back(row("mean value against the full state", "Tr(a F_1) = <A>", mean_gap,
                     c.tolerances.dispersion));
  rows.push_back(row("dispersion against the full state",
                     "Tr(a^2 G_1) + Tr(a a G_2) = <A^2> - <A>^2", disp_gap, c.tolerances.dispersion));
  return rows;
}

}  // namespace bbgky
