#include "topicevo/reduction.hpp"

#include <algorithm>

#include "topicevo/error.hpp"

namespace topicevo {

ReducedTopic reduce_words(const SemanticNetwork& cluster_graph, std::uint32_t k, const TfidfTable& tfidf,
                          ClusterKey cluster) {
  if (cluster_graph.empty()) throw Error("reduce_words: cluster " + cluster.to_string() + " is empty");
  if (k == 0) throw Error("reduce_words: core threshold must be at least 1");
  ReducedTopic out;
  out.cluster = cluster;
  out.core_threshold = k;
  out.mean_tfidf = tfidf.mean;

  std::vector<RankedWord> kept;
  for (const auto& [word, core] : k_core_decomposition(cluster_graph)) {
    const auto value = tfidf.find(word);
    RankedWord rw{word, value.value_or(0.0), core};
    const bool safeguarded = value && *value > tfidf.mean;
    if (core >= k || safeguarded) {
      kept.push_back(std::move(rw));
    } else {
      out.removed.push_back(std::move(rw));
    }
  }
  out.kept = rank_words(std::move(kept));
  return out;
}

std::vector<RankedWord> rank_words(std::vector<RankedWord> words) {
  std::sort(words.begin(), words.end(), [](const RankedWord& a, const RankedWord& b) {
    if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
    if (a.core != b.core) return a.core > b.core;
    return a.word < b.word;
  });
  return words;
}

std::vector<RankedWord> top_n_words(const std::vector<RankedWord>& ranked, std::size_t n) {
  if (n == 0) throw Error("top_n_words: n must be at least 1");
  const auto count = std::min(n, ranked.size());
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace topicevo
