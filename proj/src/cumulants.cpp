#include "bbgky/cumulants.hpp"

#include <cmath>

#include "bbgky/parallel.hpp"
#include "bbgky/random.hpp"

namespace bbgky {

namespace {

enum class GroupKind { Evolution, Scattering };

ParticleOperator cumulant_sum(const Dynamics& dyn, double t, const ClusterSet& raw_clusters,
                              const ParticleOperator& operand, GroupKind kind) {
  const ClusterSet clusters = make_cluster_set(raw_clusters);
  const LabelSet theta = decluster(clusters);
  if (!label_subset(theta, operand.labels()))
    throw DomainError("cumulant operand does not carry every clustered label");

  const std::vector<ClusterGrouping> groupings = enumerate_cluster_partitions(clusters);
  const std::vector<ParticleOperator> terms = ordered_map<ParticleOperator>(
      groupings.size(), [&](std::size_t g) {
        const ClusterGrouping& grouping = groupings[g];
        std::vector<LabelSet> blocks;
        for (const ClusterSet& z : grouping) blocks.push_back(decluster(z));
        const Matrix u = (kind == GroupKind::Evolution)
                             ? dyn.block_propagator(blocks, operand.labels(), t)
                             : dyn.block_scattering(blocks, operand.labels(), t);
        ParticleOperator term = conjugate(u, operand);
        term *= Complex(static_cast<double>(moebius_coefficient(grouping.size())), 0.0);
        return term;
      });

  ParticleOperator acc = ParticleOperator::zero(operand.d(), operand.labels());
  for (const auto& term : terms) acc += term;
  return acc;
}

}  // namespace

ClusterSet singletons(const LabelSet& labels) {
  ClusterSet out;
  for (int l : labels) out.push_back({l});
  return out;
}

ParticleOperator cluster_cumulant(const Dynamics& dyn, const CumulantRequest& req) {
  return cumulant_sum(dyn, req.t, req.clusters, req.operand, GroupKind::Evolution);
}

ParticleOperator cluster_cumulant(const Dynamics& dyn, double t, const ClusterSet& clusters,
                                  const ParticleOperator& operand) {
  return cumulant_sum(dyn, t, clusters, operand, GroupKind::Evolution);
}

ParticleOperator forward_cumulant(const Dynamics& dyn, double t, const LabelSet& y,
                                  const LabelSet& extras, const ParticleOperator& operand) {
  if (y.empty()) throw DomainError("the leading cluster must be nonempty");
  if (!labels_disjoint(y, extras)) throw DomainError("cluster and extra labels overlap");
  if (label_union(y, extras) != operand.labels())
    throw DomainError("operand labels must equal the cluster labels plus extras");
  ClusterSet clusters{y};
  for (int j : extras) clusters.push_back({j});
  return cumulant_sum(dyn, t, clusters, operand, GroupKind::Evolution);
}

ParticleOperator scattering_cumulant(const Dynamics& dyn, double t, const ClusterSet& clusters,
                                     const ParticleOperator& operand) {
  return cumulant_sum(dyn, t, clusters, operand, GroupKind::Scattering);
}

VerificationReport verify_cumulant_bound(const Dynamics& dyn, int n, double t,
                                         std::size_t sample_count, std::uint64_t seed) {
  if (n < 1 || n > 4) throw std::out_of_range("cumulant bound check supports 1 <= n <= 4");
  VerificationReport rep;
  rep.name = "cumulant norm bound";
  rep.bound = static_cast<double>(factorial(n)) * std::exp(static_cast<double>(n));
  rep.samples = sample_count;
  Xoshiro256StarStar rng(seed);
  const LabelSet labels = label_range(1, n);
  const ClusterSet clusters = singletons(labels);
  for (std::size_t k = 0; k < sample_count; ++k) {
    const ParticleOperator f = random_hermitian(rng, dyn.d(), labels);
    const double ratio = trace_norm(cluster_cumulant(dyn, t, clusters, f)) / trace_norm(f);
    rep.max_observed = std::max(rep.max_observed, ratio);
  }
  rep.pass = rep.max_observed <= rep.bound;
  return rep;
}

}  // namespace bbgky
