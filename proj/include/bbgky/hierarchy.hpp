#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <utility>

#include "bbgky/cumulants.hpp"
#include "bbgky/report.hpp"
#include "bbgky/sequence.hpp"

namespace bbgky {

// ---- von Neumann hierarchy for correlation operators ----

// g_s(t) = sum over partitions P of (1..s) of A_|P|(t, P) applied to the
// product of initial components over the blocks. Results are memoized per
// (s, t); safe to share between threads.
class VonNeumannSolver {
 public:
  VonNeumannSolver(const Dynamics& dyn, OperatorSequence g0);

  const OperatorSequence& initial() const { return g0_; }
  ParticleOperator solve(int s, double t) const;
  // Components 1..n_max at time t.
  OperatorSequence sequence(double t) const;

 private:
  const Dynamics& dyn_;
  OperatorSequence g0_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, double>, ParticleOperator> memo_;
};

ParticleOperator solve_von_neumann(const Dynamics& dyn, const OperatorSequence& g0, int s,
                                   double t);
OperatorSequence evolve_correlations(const Dynamics& dyn, const OperatorSequence& g0, double t);

// ---- cluster expansions ----

// (cluster_expand f)_s = sum over partitions of (1..s) of the product of
// components; cluster_invert uses the Moebius weights. Scalars are kept.
OperatorSequence cluster_expand(const OperatorSequence& f);
OperatorSequence cluster_invert(const OperatorSequence& f);

// Correlation operator of a cluster set built from the particle correlation
// operators g: sum over groupings P of the clusters of the Moebius weight
// times the product over groups of the cluster expansion of g on theta(X).
ParticleOperator cluster_correlation(const OperatorSequence& g, const ClusterSet& clusters);

// Correlation of the cluster set ({Y}, {j} for j in extras) read off g.
ParticleOperator cluster_correlation_from_particles(const OperatorSequence& g, const LabelSet& y,
                                                    const LabelSet& extras);

// Same cluster correlation at time t through the cumulants of groups of
// operators applied to initial cluster correlations of g0.
ParticleOperator cluster_correlation_evolve(const Dynamics& dyn, const OperatorSequence& g0,
                                            const LabelSet& y, const LabelSet& extras,
                                            double t);

// ---- annihilation and creation ----

// (e^{sign a} f)_s = sum_n sign^n / n! Tr_{s+1..s+n} f_{s+n}, s = 0..n_max.
OperatorSequence exp_annihilation(const OperatorSequence& f, int sign);
// (a f)_s = Tr_{s+1} f_{s+1}.
OperatorSequence apply_annihilation(const OperatorSequence& f);
// (a+ f)_s = sum_j f_{s-1}(Y minus j); (a+ f)_1 = f_0 I. Adjoint of a under pairing.
OperatorSequence apply_creation(const OperatorSequence& f);
OperatorSequence exp_creation(const OperatorSequence& f);
// f_0 g_0 + sum_s 1/s! Tr(f_s g_s).
Complex pairing(const OperatorSequence& f, const OperatorSequence& g);

// ---- marginal operators ----

// G_s(t) = sum_{n <= n_max - s} 1/n! Tr_{s+1..s+n} g_{s+n}(t).
ParticleOperator marginal_correlation(const Dynamics& dyn, const OperatorSequence& g0, int s,
                                      double t);
OperatorSequence marginal_correlations(const Dynamics& dyn, const OperatorSequence& g0,
                                       double t);

// F_s(t) = sum_n 1/n! Tr g_{1+n}(t, {Y}, s+1..s+n) from evolved cluster
// correlations.
ParticleOperator marginal_density_from_clusters(const Dynamics& dyn, const OperatorSequence& g0,
                                                int s, double t);

// F_s(t) = sum_n 1/n! Tr A_{1+n}(t, {Y}, X \ Y) F_{s+n}(0).
ParticleOperator solve_bbgky(const Dynamics& dyn, const OperatorSequence& f0, int s, double t);
OperatorSequence solve_bbgky_sequence(const Dynamics& dyn, const OperatorSequence& f0, double t);

// ---- nonlinear hierarchy for marginal correlation operators ----

// How the series over additional particles is cut at n_max.
//   Correlation: every term that survives when the underlying correlation
//     sequence e^{-a} G0 vanishes above n_max. The result then equals
//     marginal_correlation(e^{-a} G0) exactly and inherits its group property.
//   Truncated: reduced cumulants U_{1+n} with s + n <= n_max only.
//   Density: the densities e^{-a} cluster_expand(G0) vanish above n_max, i.e.
//     a genuine system of at most n_max particles. The result is the exact
//     solution of the hierarchy truncated at n_max (G_{n_max+1} fixed by
//     F_{n_max+1} = 0), computed through the von Neumann hierarchy.
enum class SeriesClosure { Correlation, Truncated, Density };

// U_{1+n}(t; {Y}, extras | G0): sum_k (-1)^k C(n,k) sum over partitions P of
// the first s+n-k labels of A_|P| applied to products of components of G0,
// the last k labels being distributed over the blocks in consecutive
// segments with multinomial weights. Result lives on Y and extras.
ParticleOperator reduced_cumulant(const Dynamics& dyn, double t, const LabelSet& y,
                                  const LabelSet& extras, const OperatorSequence& g0);

ParticleOperator solve_nonlinear_bbgky(const Dynamics& dyn, const OperatorSequence& g0, int s,
                                       double t,
                                       SeriesClosure closure = SeriesClosure::Correlation);
OperatorSequence solve_nonlinear_sequence(const Dynamics& dyn, const OperatorSequence& g0,
                                          double t,
                                          SeriesClosure closure = SeriesClosure::Correlation);

// N(Y|g) = -N_s g_s + sum over unordered two-block partitions (X1, X2) of Y of
// sum_{i1 in X1, i2 in X2} (-N_int(i1,i2)) g(X1) g(X2).
ParticleOperator von_neumann_generator(const Dynamics& dyn, const OperatorSequence& g, int s);

// Right-hand side of the nonlinear hierarchy for G_s:
// N(Y|G) + Tr_{s+1} sum_{i in Y} (-N_int(i,s+1)) (G_{s+1} + sum_P G(X1) G(X2)),
// P running over two-block partitions of (Y, s+1) separating i from s+1.
// The trace term is absent at s = n_max. Pair potentials only.
ParticleOperator nonlinear_bbgky_rhs(const Dynamics& dyn, const OperatorSequence& g, int s);

// n-th term of the componentwise expansion of e^{a} N(.|e^{-a} f) at
// component s, including 1/n! and the trace over s+1..s+n.
ParticleOperator generator_series_term(const Dynamics& dyn, const OperatorSequence& f, int s,
                                       int n);

// Exact generator of the correlation closure:
// sum_{n <= n_max - s} 1/n! Tr_{s+1..s+n} N(1..s+n | e^{-a} G).
ParticleOperator closure_generator(const Dynamics& dyn, const OperatorSequence& g, int s);

// ---- estimates ----

struct EstimateConstants {
  double c = 0.0;       // max_n ||component n|| over the components that enter
  double c_frak = 0.0;  // max_n ||component n|| over the whole sequence
};

EstimateConstants estimate_constants(const OperatorSequence& f, int up_to);

// ||g_s(t)|| against s! e^{2s} c^s for random sequences of the given kind.
VerificationReport verify_von_neumann_bound(const Dynamics& dyn, int s, double t,
                                            std::size_t sample_count, std::uint64_t seed,
                                            bool bounded_samples);

// ||U_{1+n}(t; 1..s, s+1..s+n | G0)|| against 2 n! s! (2 e^3)^{s+n} c^{s+n}
// for correlation-kind samples.
VerificationReport verify_reduced_bound(const Dynamics& dyn, int s, int n, double t,
                                        std::size_t sample_count, std::uint64_t seed);

// ---- observables ----

struct ObservableStats {
  Complex mean;        // Tr_1(a_1 F_1)
  Complex dispersion;  // Tr_1(a_1^2 G_1) + Tr_12(a_1 a_2 G_2)
};

// a1 is a one-particle observable on label 1; F1, G1 on label 1, G2 on 1,2.
ObservableStats observable_stats(const ParticleOperator& a1, const ParticleOperator& f1,
                                 const ParticleOperator& g1, const ParticleOperator& g2);

// Low-order terms of the marginal correlation functional expressed through
// G_1(t): order 1 is the product of G_1 over 1..s evolved by the scattering
// cumulant of singletons, order 2 adds the one-extra-particle term.
// order_cap must be 0 or 1 (terms of orders 1 and 2).
ParticleOperator correlation_functional_low(const Dynamics& dyn, const ParticleOperator& g1_t,
                                            int s, int order_cap, double t);

// Helper: op on labels 1..m moved so that position j sits on labels[j]
// (labels need not be sorted); result lives on the sorted labels.
ParticleOperator place_on(const ParticleOperator& op, const std::vector<int>& labels);

}  // namespace bbgky
