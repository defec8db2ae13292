// Acceptance suite: one PASS/FAIL line per criterion, indented diagnostics
// below it. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bbgky/experiment.hpp"
#include "bbgky/hierarchy.hpp"
#include "bbgky/meanfield.hpp"
#include "bbgky/partitions.hpp"

using namespace bbgky;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void verdict(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("CRITERION %2d %s  %s: %s\n", id, pass ? "PASS" : "FAIL", title.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

template <typename... Args>
void note(const char* fmt, Args... args) {
  std::printf("    ");
  if constexpr (sizeof...(args) == 0)
    std::fputs(fmt, stdout);
  else
    std::printf(fmt, args...);
  std::printf("\n");
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> kTimes{0.1, 0.5, 1.0};

Dynamics dynamics_for(std::uint64_t seed, int n_max) {
  return Dynamics(make_random_config(n_max, seed).hamiltonian());
}

HamiltonianSpec without_interaction(HamiltonianSpec spec) {
  spec.Phi.setZero();
  return spec;
}

ParticleOperator product_of(const ParticleOperator& g1, int count) {
  std::vector<ParticleOperator> factors;
  for (int i = 1; i <= count; ++i) factors.push_back(g1.relabeled({i}));
  return tensor_product(factors);
}

double relative_gap(const ParticleOperator& a, const ParticleOperator& ref) {
  return trace_norm(a - ref) / std::max(trace_norm(ref), 1e-300);
}

ParticleOperator central(const std::function<ParticleOperator(double)>& f, double t, double h) {
  return (0.5 / h) * (f(t + h) - f(t - h));
}

ParticleOperator five_point(const std::function<ParticleOperator(double)>& f, double t, double h) {
  ParticleOperator out = 8.0 * (f(t + h) - f(t - h));
  out -= f(t + 2 * h) - f(t - 2 * h);
  out *= Complex(1.0 / (12.0 * h), 0.0);
  return out;
}

void criterion1() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const OperatorSequence x = random_sequence(2, 4, seed, SequenceKind::Bounded);
    worst = std::max({worst, max_abs_diff(cluster_invert(cluster_expand(x)), x),
                      max_abs_diff(cluster_expand(cluster_invert(x)), x)});
  }
  const double elapsed = seconds_since(start);
  verdict(1, "Moebius roundtrip", worst <= 1e-12 && elapsed < 5.0,
          fmt("max error %.3e (<= 1e-12), %.2f s (< 5 s)", worst, elapsed));
}

void criterion2() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dynamics dyn = dynamics_for(100 + seed, 3);
    const OperatorSequence g0 = random_sequence(2, 3, 200 + seed, SequenceKind::Correlation);
    const OperatorSequence big0 = exp_annihilation(g0, +1);
    for (double t : kTimes)
      for (int s = 1; s <= 3; ++s)
        worst = std::max(worst, trace_norm(marginal_correlation(dyn, g0, s, t) -
                                           solve_nonlinear_bbgky(dyn, big0, s, t)));
  }
  const double elapsed = seconds_since(start);
  verdict(2, "dual-route equality", worst <= 1e-10 && elapsed < 60.0,
          fmt("max trace-norm gap over (seed, s, t) %.3e (<= 1e-10), %.2f s (< 60 s)", worst,
              elapsed));
}

void criterion3() {
  double routes = 0.0, free_norm = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dynamics dyn = dynamics_for(300 + seed, 3);
    const Dynamics free_dyn(without_interaction(dyn.spec()));
    Xoshiro256StarStar rng(400 + seed);
    const ParticleOperator g1 = random_state(rng, 2, {1});
    const OperatorSequence chaos = chaos_sequence(g1, 3);
    for (double t : kTimes)
      for (int s = 1; s <= 3; ++s) {
        ParticleOperator direct = ParticleOperator::zero(2, label_range(1, s));
        for (int n = 0; s + n <= 3; ++n)
          direct += (1.0 / static_cast<double>(factorial(n))) *
                    partial_trace(cluster_cumulant(dyn, t, singletons(label_range(1, s + n)),
                                                   product_of(g1, s + n)),
                                  label_range(1, s));
        routes = std::max({routes, trace_norm(solve_nonlinear_bbgky(dyn, chaos, s, t) - direct),
                           trace_norm(marginal_correlation(dyn, chaos, s, t) - direct)});
        if (s >= 2)
          free_norm = std::max(free_norm, trace_norm(solve_nonlinear_bbgky(free_dyn, chaos, s, t)));
      }
  }
  verdict(3, "chaos specialization", routes <= 1e-10 && free_norm <= 1e-12,
          fmt("route gap %.3e (<= 1e-10), Phi = 0 max ||G_s||_1 %.3e (<= 1e-12)", routes,
              free_norm));
}

void criterion4() {
  const double h = 1e-3;
  const std::vector<double> times{0.0, 0.5, 1.0};
  double worst = 0.0, density = 0.0, truncated0 = 0.0, closure = 0.0;
  std::vector<double> per_time(times.size(), 0.0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Dynamics dyn = dynamics_for(500 + seed, 3);
    const OperatorSequence big0 =
        exp_annihilation(random_sequence(2, 3, 600 + seed, SequenceKind::Correlation), +1);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double t = times[k];
      const OperatorSequence gt = solve_nonlinear_sequence(dyn, big0, t);
      const OperatorSequence dt = solve_nonlinear_sequence(dyn, big0, t, SeriesClosure::Density);
      for (int s = 1; s <= 2; ++s) {
        const ParticleOperator fd =
            central([&](double u) { return solve_nonlinear_bbgky(dyn, big0, s, u); }, t, h);
        const double gap = relative_gap(fd, nonlinear_bbgky_rhs(dyn, gt, s));
        worst = std::max(worst, gap);
        per_time[k] = std::max(per_time[k], gap);
        closure = std::max(closure, relative_gap(fd, closure_generator(dyn, gt, s)));
        const ParticleOperator fd_density = central(
            [&](double u) { return solve_nonlinear_bbgky(dyn, big0, s, u, SeriesClosure::Density); },
            t, h);
        density = std::max(density, relative_gap(fd_density, nonlinear_bbgky_rhs(dyn, dt, s)));
      }
    }
    for (int s = 1; s <= 2; ++s) {
      const ParticleOperator fd0 = central(
          [&](double u) { return solve_nonlinear_bbgky(dyn, big0, s, u, SeriesClosure::Truncated); },
          0.0, h);
      truncated0 = std::max(truncated0, relative_gap(fd0, nonlinear_bbgky_rhs(dyn, big0, s)));
    }
  }
  verdict(4, "strong-solution generator check", worst <= 1e-5,
          fmt("default closure, max relative error over t in {0, 0.5, 1}, s <= 2: %.3e (<= %.0e)",
              worst, 1e-5));
  note("default closure per time: t=0 %.3e, t=0.5 %.3e, t=1 %.3e", per_time[0], per_time[1],
       per_time[2]);
  note("default closure against its own exact generator: %.3e", closure);
  note("finite-system closure (densities vanish above n_max) against the rhs: %.3e", density);
  note("truncated closure at t = 0 against the rhs: %.3e", truncated0);
  note("the default closure satisfies the hierarchy only up to quadratic terms");
  note("whose partners need more than n_max particles; see the dual-route criterion");
}

void criterion5() {
  double worst = 0.0, density = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Dynamics dyn = dynamics_for(700 + seed, 3);
    const OperatorSequence big0 =
        exp_annihilation(random_sequence(2, 3, 800 + seed, SequenceKind::Correlation), +1);
    const OperatorSequence mid = solve_nonlinear_sequence(dyn, big0, 0.3);
    const OperatorSequence mid_d = solve_nonlinear_sequence(dyn, big0, 0.3, SeriesClosure::Density);
    for (int s = 1; s <= 3; ++s) {
      worst = std::max(worst, trace_norm(solve_nonlinear_bbgky(dyn, mid, s, 0.7) -
                                         solve_nonlinear_bbgky(dyn, big0, s, 1.0)));
      density = std::max(
          density, trace_norm(solve_nonlinear_bbgky(dyn, mid_d, s, 0.7, SeriesClosure::Density) -
                              solve_nonlinear_bbgky(dyn, big0, s, 1.0, SeriesClosure::Density)));
    }
  }
  verdict(5, "group property", worst <= 1e-9, fmt("gap %.3e (<= %.0e)", worst, 1e-9));
  note("finite-system closure: %.3e", density);
}

void criterion6() {
  double initial = 0.0, traced = 0.0, third = 0.0, traced_central = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Dynamics dyn = dynamics_for(900 + seed, 3);
    Xoshiro256StarStar rng(1000 + seed);
    for (int n = 1; n <= 3; ++n) {
      const ParticleOperator f = random_hermitian(rng, 2, label_range(1, n));
      const ParticleOperator a = cluster_cumulant(dyn, 0.0, singletons(label_range(1, n)), f);
      initial = std::max(initial, n == 1 ? max_abs_diff(a, f) : trace_norm(a));
    }
    const OperatorSequence f = random_sequence(2, 3, 1100 + seed, SequenceKind::Bounded);
    const LabelSet y{1};
    const LabelSet extras{2, 3};
    auto u = [&](double t) { return reduced_cumulant(dyn, t, y, extras, f); };
    traced = std::max(traced, trace_norm(partial_trace(five_point(u, 0.0, 1e-3), y)));
    traced_central = std::max(traced_central, trace_norm(partial_trace(central(u, 0.0, 1e-3), y)));
    third = std::max(third, trace_norm(generator_series_term(dyn, f, 1, 2)));
  }
  verdict(6, "cumulant identities", initial <= 1e-12 && traced <= 1e-8 && third <= 1e-10,
          fmt("A_n(0) = I delta_n1 error %.3e (<= 1e-12), traced generator %.3e (<= 1e-8), "
              "I_3 term %.3e (<= 1e-10)",
              initial, traced, third));
  note("traced generator by central difference, h = 1e-3: %.3e (O(h^2) error)", traced_central);
}

void criterion7() {
  double cumulant = 0.0, reduced = 0.0;
  const Dynamics dyn = dynamics_for(1200, 3);
  for (int n = 1; n <= 3; ++n) {
    const VerificationReport rep = verify_cumulant_bound(dyn, n, 1.0, 100, 1300 + n);
    cumulant = std::max(cumulant, rep.max_observed / rep.bound);
  }
  for (int s = 1; s <= 3; ++s)
    for (int n = 0; s + n <= 3; ++n) {
      const VerificationReport rep = verify_reduced_bound(dyn, s, n, 1.0, 100, 1400 + 10 * s + n);
      reduced = std::max(reduced, rep.max_observed / rep.bound);
    }
  bool stirling = true;
  long double stirling_ratio = 0.0L;
  for (int n = 1; n <= 10; ++n) {
    const PartitionCounts counts = partition_counts(n);
    std::uint64_t lhs = 0;
    for (int l = 1; l <= n; ++l) lhs += counts.stirling[l - 1] * factorial(l - 1);
    const long double rhs =
        static_cast<long double>(factorial(n)) * std::exp(static_cast<long double>(n));
    stirling = stirling && static_cast<long double>(lhs) <= rhs;
    stirling_ratio = std::max(stirling_ratio, static_cast<long double>(lhs) / rhs);
  }
  verdict(7, "norm estimates", cumulant <= 1.0 && reduced <= 1.0 && stirling,
          fmt("worst observed/bound: cumulant %.3e, reduced cumulant %.3e; Stirling ratio %.3e "
              "(n <= 10)",
              cumulant, reduced, static_cast<double>(stirling_ratio)));
}

void criterion8() {
  double triangle = 0.0, clusters_bbgky = 0.0, expand_gap = 0.0, density_route = 0.0;
  std::vector<double> lambda_gap;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Dynamics dyn = dynamics_for(1500 + seed, 3);
    const OperatorSequence g0 = random_sequence(2, 3, 1600 + seed, SequenceKind::Correlation);
    OperatorSequence f0(2, 3);
    f0.set_scalar(1.0);
    for (int s = 1; s <= 3; ++s) f0[s] = marginal_density_from_clusters(dyn, g0, s, 0.0);
    const OperatorSequence big0_f = cluster_invert(f0);
    for (double t : kTimes) {
      const OperatorSequence via_g = cluster_expand(marginal_correlations(dyn, g0, t));
      const OperatorSequence via_bbgky = solve_bbgky_sequence(dyn, f0, t);
      const OperatorSequence via_density =
          cluster_expand(solve_nonlinear_sequence(dyn, big0_f, t, SeriesClosure::Density));
      for (int s = 1; s <= 3; ++s) {
        const ParticleOperator via_clusters = marginal_density_from_clusters(dyn, g0, s, t);
        const double a = trace_norm(via_g[s] - via_clusters);
        const double b = trace_norm(via_clusters - via_bbgky[s]);
        const double c = trace_norm(via_g[s] - via_bbgky[s]);
        triangle = std::max({triangle, a, b, c});
        clusters_bbgky = std::max(clusters_bbgky, b);
        expand_gap = std::max(expand_gap, a);
        density_route = std::max({density_route, trace_norm(via_density[s] - via_clusters),
                                  trace_norm(via_density[s] - via_bbgky[s])});
      }
    }
    if (seed == 1)
      for (double lam : {1.0, 0.5, 0.25}) {
        OperatorSequence g = g0;
        g *= Complex(lam, 0.0);
        lambda_gap.push_back(trace_norm(marginal_density_from_clusters(dyn, g, 2, 0.0) -
                                        cluster_expand(marginal_correlations(dyn, g, 0.0))[2]));
      }
  }

  double min_eig = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Dynamics dyn = dynamics_for(1700 + seed, 3);
    const OperatorSequence f0 = marginal_sequence(random_symmetric_state(2, 3, 1800 + seed));
    for (double t : kTimes) {
      const OperatorSequence ft = solve_bbgky_sequence(dyn, f0, t);
      for (int s = 1; s <= 3; ++s) min_eig = std::min(min_eig, min_eigenvalue(ft[s]));
    }
  }
  verdict(8, "F-route consistency triangle", triangle <= 1e-10 && min_eig >= -1e-10,
          fmt("max pairwise gap %.3e (<= 1e-10), genuine-state min eig %.3e (>= -1e-10)", triangle,
              min_eig));
  note("cluster correlations against the BBGKY solution: %.3e", clusters_bbgky);
  note("partition sum over G(t) = e^a g(t) against cluster correlations: %.3e", expand_gap);
  note("gap at t = 0 for g scaled by 1, 1/2, 1/4: %.3e %.3e %.3e (quadratic)", lambda_gap[0],
       lambda_gap[1], lambda_gap[2]);
  note("partition sum over the finite-system closure G(t) against both: %.3e", density_route);
}

void criterion9() {
  double series = 0.0, hartree = 0.0;
  bool ladder = true;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const HamiltonianSpec spec = make_random_config(3, 1900 + seed).hamiltonian();
    Xoshiro256StarStar rng(2000 + seed);
    const ParticleOperator g1 = random_state(rng, 2, {1});
    const double t = 0.25 * vlasov_radius(spec, g1);
    series = std::max(series, max_abs_diff(vlasov_series(spec, g1, t, 6).value,
                                           vlasov_integrate(spec, g1, {t}).states.back()));
    const Vector psi = random_gaussian(rng, 2, 1).col(0).normalized();
    const Vector phi = hartree_pure(spec, psi, {1.0}).states.back();
    const ParticleOperator pure(2, {1}, psi * psi.adjoint());
    hartree = std::max(hartree, max_abs_diff(ParticleOperator(2, {1}, phi * phi.adjoint()),
                                             vlasov_integrate(spec, pure, {1.0}).states.back()));
    ScalingExperiment exp;
    exp.epsilons = {1.0, 0.5, 0.25, 0.125};
    exp.times = {0.5, 1.0};
    exp.base_g0 = chaos_sequence(g1, 3);
    const ScalingReport rep = epsilon_scaling(spec, exp);
    ladder = ladder && rep.correlations_monotone && rep.gap_monotone;
  }
  verdict(9, "Vlasov suite", series <= 1e-6 && hartree <= 1e-8 && ladder,
          fmt("series vs RK4 %.3e (<= 1e-6), Hartree vs Vlasov %.3e (<= 1e-8)", series, hartree) +
              (ladder ? ", epsilon ladder monotone" : ", epsilon ladder NOT monotone"));
}

void criterion10() {
  double worst = 0.0;
  bool pass = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SystemConfig c = make_random_config(2, 2100 + seed);
    c.times = {0.0, 0.5, 1.0};
    for (const CheckRow& r : observable_checks(c)) {
      worst = std::max(worst, r.value);
      pass = pass && r.pass;
    }
  }
  verdict(10, "observables", pass && worst <= 1e-10,
          fmt("mean and dispersion against the full state %.3e (<= %.0e)", worst, 1e-10));
}

void criterion11() {
  const auto start = Clock::now();
  const RunRecord record = verify_suite(make_random_config(3, 2200));
  const double elapsed = seconds_since(start);
  verdict(11, "verify-suite wall time", elapsed <= 300.0,
          fmt("%.2f s at n_max = 3, d = 2 (<= 300 s); %.0f rows", elapsed,
              static_cast<double>(record.rows.size())));
  for (const auto& name : record.failures()) note("failing row: %s", name.c_str());
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8,
                                                    criterion9, criterion10, criterion11};
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    try {
      criteria[k]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(k + 1), "raised an error", false, e.what());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
