#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bbgky/tensor.hpp"

namespace bbgky {

struct SetPartition {
  // Disjoint nonempty blocks ordered by their smallest element.
  std::vector<LabelSet> blocks;

  std::size_t size() const { return blocks.size(); }
  bool operator==(const SetPartition& other) const = default;
};

// Disjoint label blocks treated as atoms, ordered by smallest element.
using ClusterSet = std::vector<LabelSet>;

// One partition of a cluster set: each group Z_k is itself a ClusterSet.
using ClusterGrouping = std::vector<ClusterSet>;

struct PartitionConstraints {
  std::optional<std::size_t> block_count;
  // (label, block index): labels sharing an index must share a block and
  // labels with different indices must sit in different blocks.
  std::vector<std::pair<int, int>> pinned;
};

// Every partition of ground satisfying the constraints, each once, in
// lexicographic order of restricted-growth strings.
std::vector<SetPartition> enumerate_partitions(const LabelSet& ground,
                                               const PartitionConstraints& constraints = {});

std::vector<ClusterGrouping> enumerate_cluster_partitions(const ClusterSet& clusters);

// Canonical ordering of a cluster set; throws DomainError on overlap.
ClusterSet make_cluster_set(ClusterSet clusters);

LabelSet decluster(const ClusterSet& clusters);

// (-1)^{k-1} (k-1)! for a partition with k blocks.
std::int64_t moebius_coefficient(std::size_t block_count);
std::int64_t moebius_coefficient(const SetPartition& p);

struct PartitionCounts {
  std::uint64_t bell = 0;
  std::vector<std::uint64_t> stirling;  // s(n,1..n), second kind
};

PartitionCounts partition_counts(int n);

std::uint64_t factorial(int n);
std::uint64_t binomial(int n, int k);

// Compositions (c_1,...,c_parts) of total with nonnegative entries, in
// lexicographic order.
std::vector<std::vector<int>> weak_compositions(int total, std::size_t parts);

}  // namespace bbgky
