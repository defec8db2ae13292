#include "bbgky/partitions.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace bbgky {

namespace {

bool satisfies(const std::vector<int>& rgs, std::size_t blocks, const LabelSet& ground,
               const PartitionConstraints& c) {
  if (c.block_count && *c.block_count != blocks) return false;
  std::map<int, int> block_of_pin;  // pin index -> block
  std::map<int, int> pin_of_block;  // block -> pin index
  for (const auto& [label, index] : c.pinned) {
    auto it = std::lower_bound(ground.begin(), ground.end(), label);
    const int block = rgs[it - ground.begin()];
    auto [pos, inserted] = block_of_pin.emplace(index, block);
    if (!inserted && pos->second != block) return false;
    auto [bpos, binserted] = pin_of_block.emplace(block, index);
    if (!binserted && bpos->second != index) return false;
  }
  return true;
}

}  // namespace

std::vector<SetPartition> enumerate_partitions(const LabelSet& ground,
                                               const PartitionConstraints& constraints) {
  if (ground.empty()) throw DomainError("cannot partition an empty ground set");
  for (const auto& pin : constraints.pinned)
    if (!std::binary_search(ground.begin(), ground.end(), pin.first))
      throw DomainError("pinned label " + std::to_string(pin.first) + " is not in the ground set");

  const std::size_t n = ground.size();
  std::vector<SetPartition> out;
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);

  while (true) {
    const std::size_t blocks = static_cast<std::size_t>(prefix_max[n - 1]) + 1;
    if (satisfies(rgs, blocks, ground, constraints)) {
      SetPartition p;
      p.blocks.resize(blocks);
      for (std::size_t i = 0; i < n; ++i) p.blocks[rgs[i]].push_back(ground[i]);
      out.push_back(std::move(p));
    }
    // Next restricted-growth string in lexicographic order.
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

ClusterSet make_cluster_set(ClusterSet clusters) {
  for (auto& c : clusters) {
    c = make_label_set(c);
    if (c.empty()) throw DomainError("clusters must be nonempty");
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const LabelSet& a, const LabelSet& b) { return a.front() < b.front(); });
  decluster(clusters);
  return clusters;
}

LabelSet decluster(const ClusterSet& clusters) {
  std::vector<int> all;
  for (const auto& c : clusters) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw DomainError("clusters overlap");
  return all;
}

std::vector<ClusterGrouping> enumerate_cluster_partitions(const ClusterSet& clusters) {
  if (clusters.empty()) throw DomainError("cannot partition an empty cluster set");
  const LabelSet atoms = label_range(1, static_cast<int>(clusters.size()));
  std::vector<ClusterGrouping> out;
  for (const auto& p : enumerate_partitions(atoms)) {
    ClusterGrouping g;
    for (const auto& block : p.blocks) {
      ClusterSet z;
      for (int a : block) z.push_back(clusters[a - 1]);
      g.push_back(std::move(z));
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int k = 2; k <= n; ++k) r *= static_cast<std::uint64_t>(k);
  return r;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / j;
  return r;
}

std::int64_t moebius_coefficient(std::size_t block_count) {
  if (block_count == 0) throw DomainError("a partition has at least one block");
  const auto f = static_cast<std::int64_t>(factorial(static_cast<int>(block_count) - 1));
  return (block_count % 2 == 1) ? f : -f;
}

std::int64_t moebius_coefficient(const SetPartition& p) { return moebius_coefficient(p.size()); }

PartitionCounts partition_counts(int n) {
  if (n < 1) throw std::out_of_range("partition counts need n >= 1");
  if (n > 12) throw std::out_of_range("partition counts are limited to n <= 12");
  std::vector<std::vector<std::uint64_t>> s(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  s[0][0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k <= m; ++k) s[m][k] = k * s[m - 1][k] + s[m - 1][k - 1];
  PartitionCounts pc;
  for (int k = 1; k <= n; ++k) {
    pc.stirling.push_back(s[n][k]);
    pc.bell += s[n][k];
  }
  return pc;
}

std::vector<std::vector<int>> weak_compositions(int total, std::size_t parts) {
  std::vector<std::vector<int>> out;
  if (parts == 0) {
    if (total == 0) out.push_back({});
    return out;
  }
  std::vector<int> c(parts, 0);
  // Recursive fill, first entry varies slowest.
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == parts) {
      c[i] = left;
      out.push_back(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

}  // namespace bbgky
