#pragma once

// Louvain community detection on semantic networks.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topicevo/network.hpp"
#include "topicevo/types.hpp"

namespace topicevo {

struct Partition {
  std::size_t snapshot_index = 0;
  std::map<std::string, std::size_t> assignment;  // word -> cluster id, ids dense from 0
  double modularity = 0.0;

  std::size_t cluster_count() const;
  /// Cluster id -> sorted member words.
  std::vector<WordSet> clusters() const;

  bool operator==(const Partition&) const = default;
};

struct LouvainOptions {
  double resolution = 1.0;
  bool weighted = true;
  /// A node moves only if it raises modularity by more than this.
  double min_gain = 1e-7;
  /// Independent coarsen-and-refine passes drawn from one seeded stream; the
  /// highest-modularity result wins, the earliest on ties.
  std::size_t random_starts = 10;
};

/// Q = sum_c [ in(c)/2m - resolution * (tot(c)/2m)^2 ]. Zero for edgeless graphs.
double modularity(const SemanticNetwork& network, const std::map<std::string, std::size_t>& assignment,
                  double resolution = 1.0, bool weighted = true);

/// Two-phase Louvain: seeded-order local moving followed by aggregation,
/// repeated until a level moves no node, then refined by local moving on
/// each finer level. Deterministic in (network, seed).
/// Cluster ids are numbered by the lexicographically smallest member word.
Partition louvain(const SemanticNetwork& network, std::uint64_t seed, const LouvainOptions& options = {});

/// Builds a Partition from explicit clusters, renumbering ids densely in
/// order of each cluster's smallest word.
Partition partition_from_clusters(const SemanticNetwork& network, const std::vector<WordSet>& clusters,
                                  std::size_t snapshot_index = 0);

}  // namespace topicevo
