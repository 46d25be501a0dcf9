#pragma once

// Semantic similarity networks and the graph measures computed on them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "topicevo/corpus.hpp"
#include "topicevo/embedding.hpp"
#include "topicevo/types.hpp"

namespace topicevo {

struct WeightedEdge {
  std::string a;  // a < b
  std::string b;
  double weight = 0.0;

  bool operator==(const WeightedEdge&) const = default;
};

/// Undirected weighted word graph without self-loops. Node ids follow the
/// lexicographic order of the words; adjacency lists are sorted by neighbor id.
class SemanticNetwork {
 public:
  struct Neighbor {
    std::uint32_t node;
    double weight;
  };

  SemanticNetwork() = default;

  /// Builds from explicit nodes and edges. Edges must join distinct known
  /// nodes; repeated edges are merged (the first weight wins).
  static SemanticNetwork from_edges(std::vector<std::string> nodes, const std::vector<WeightedEdge>& edges,
                                    std::size_t snapshot_index = 0);
  /// Nodes are the endpoints of the edges.
  static SemanticNetwork from_edges(const std::vector<WeightedEdge>& edges, std::size_t snapshot_index = 0);

  std::size_t snapshot_index() const noexcept { return snapshot_index_; }
  std::size_t node_count() const noexcept { return words_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return words_.empty(); }

  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t node) const { return words_[node]; }
  std::optional<std::size_t> find(const std::string& word) const;
  bool contains(const std::string& word) const { return find(word).has_value(); }

  const std::vector<Neighbor>& neighbors(std::size_t node) const { return adjacency_[node]; }
  std::size_t degree(std::size_t node) const { return adjacency_[node].size(); }
  std::size_t degree(const std::string& word) const;
  double weighted_degree(std::size_t node) const;
  double total_weight() const noexcept { return total_weight_; }

  /// Edges with a < b, sorted by (a, b).
  std::vector<WeightedEdge> edges() const;

  /// Subgraph induced by `words` (all must be nodes). Isolated members are kept.
  SemanticNetwork induced_subgraph(const WordSet& words) const;

 private:
  std::size_t snapshot_index_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::size_t edge_count_ = 0;
  double total_weight_ = 0.0;
};

/// For every vocabulary word, queries its τ nearest neighbours and adds an
/// undirected edge for each neighbour whose cosine exceeds φ. Words left
/// without edges are not part of the network.
SemanticNetwork build_network(const EmbeddingModel& model, double phi, std::size_t tau);

/// 2|E_induced| / (n(n-1)); 0 for clusters with fewer than two words.
double density(const SemanticNetwork& network, const WordSet& cluster);

/// Mean of degree(w) / (|W|-1) over the cluster, degrees in the full network.
double cluster_centrality(const SemanticNetwork& network, const WordSet& cluster);

struct ClusterMetrics {
  std::size_t size = 0;
  double centrality = 0.0;
  double density = 0.0;
  double cluster_frequency = 0.0;
};

struct ClusterWords {
  ClusterKey key;
  WordSet words;
};

/// Mean raw term count of each cluster's words in its own snapshot, min-max
/// normalised over all clusters of all snapshots. `term_stats` is indexed by
/// snapshot. All values are 0 when every raw mean is equal.
std::map<ClusterKey, double> cluster_frequency(const std::vector<ClusterWords>& clusters,
                                               const std::vector<TermStats>& term_stats);

/// Core number per node id of an unweighted adjacency structure (bucket peeling).
std::vector<std::uint32_t> core_numbers(const std::vector<std::vector<std::uint32_t>>& adjacency);

using CoreMap = std::map<std::string, std::uint32_t>;

CoreMap k_core_decomposition(const SemanticNetwork& graph);

}  // namespace topicevo
