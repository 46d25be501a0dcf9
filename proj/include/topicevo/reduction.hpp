#pragma once

// Word reduction for one topic: k-core pruning with a TF-IDF safeguard,
// followed by TF-IDF ranking.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "topicevo/corpus.hpp"
#include "topicevo/network.hpp"
#include "topicevo/types.hpp"

namespace topicevo {

struct RankedWord {
  std::string word;
  double tfidf = 0.0;  // 0 for words missing from the snapshot's table
  std::uint32_t core = 0;

  bool operator==(const RankedWord&) const = default;
};

struct ReducedTopic {
  ClusterKey cluster;
  std::vector<RankedWord> kept;     // ranked
  std::vector<RankedWord> removed;  // sorted by word
  std::uint32_t core_threshold = 0;
  double mean_tfidf = 0.0;
};

/// Keeps words with core number >= k in `cluster_graph` (the cluster's induced
/// subgraph) and re-adds pruned words whose TF-IDF exceeds the snapshot mean.
ReducedTopic reduce_words(const SemanticNetwork& cluster_graph, std::uint32_t k, const TfidfTable& tfidf,
                          ClusterKey cluster = {});

/// TF-IDF descending, then core number descending, then word ascending.
std::vector<RankedWord> rank_words(std::vector<RankedWord> words);

std::vector<RankedWord> top_n_words(const std::vector<RankedWord>& ranked, std::size_t n);

}  // namespace topicevo
