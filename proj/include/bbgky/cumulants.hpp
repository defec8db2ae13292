#pragma once

#include <cstdint>

#include "bbgky/dynamics.hpp"
#include "bbgky/partitions.hpp"
#include "bbgky/report.hpp"

namespace bbgky {

struct CumulantRequest {
  double t = 0.0;
  ClusterSet clusters;
  ParticleOperator operand;  // labels must contain decluster(clusters)
};

// sum over groupings P' of the clusters of (-1)^{|P'|-1}(|P'|-1)! times the
// product of the groups on theta(Z_k), applied to the operand. Operand
// labels outside the clusters are left untouched.
ParticleOperator cluster_cumulant(const Dynamics& dyn, const CumulantRequest& req);
ParticleOperator cluster_cumulant(const Dynamics& dyn, double t, const ClusterSet& clusters,
                                  const ParticleOperator& operand);

// Cumulant over the cluster set ({Y}, {j_1}, ..., {j_n}).
ParticleOperator forward_cumulant(const Dynamics& dyn, double t, const LabelSet& y,
                                  const LabelSet& extras, const ParticleOperator& operand);

// Same combinatorics with scattering operators in place of the groups.
ParticleOperator scattering_cumulant(const Dynamics& dyn, double t, const ClusterSet& clusters,
                                     const ParticleOperator& operand);

// Cluster set of singletons {1}, ..., {n} or of the given labels.
ClusterSet singletons(const LabelSet& labels);

// Samples random Hermitian f on n particles (trace norm 1) and compares
// ||A_n(t) f|| against n! e^n.
VerificationReport verify_cumulant_bound(const Dynamics& dyn, int n, double t,
                                         std::size_t sample_count, std::uint64_t seed);

}  // namespace bbgky
