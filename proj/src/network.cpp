#include "topicevo/network.hpp"

#include <algorithm>
#include <limits>

#include "topicevo/error.hpp"

namespace topicevo {

WordSet make_word_set(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

std::string ClusterKey::to_string() const {
  return std::to_string(snapshot) + "," + std::to_string(cluster);
}

SemanticNetwork SemanticNetwork::from_edges(std::vector<std::string> nodes,
                                            const std::vector<WeightedEdge>& edges,
                                            std::size_t snapshot_index) {
  SemanticNetwork net;
  net.snapshot_index_ = snapshot_index;
  net.words_ = make_word_set(std::move(nodes));
  if (net.words_.size() >= std::numeric_limits<std::uint32_t>::max()) throw Error("network too large");
  net.index_.reserve(net.words_.size());
  for (std::uint32_t i = 0; i < net.words_.size(); ++i) net.index_.emplace(net.words_[i], i);
  net.adjacency_.resize(net.words_.size());

  auto id_of = [&](const std::string& w) {
    auto it = net.index_.find(w);
    if (it == net.index_.end()) throw Error("edge endpoint '" + w + "' is not a node");
    return it->second;
  };
  for (const auto& e : edges) {
    const std::uint32_t u = id_of(e.a);
    const std::uint32_t v = id_of(e.b);
    if (u == v) throw Error("self-loop on '" + e.a + "'");
    net.adjacency_[u].push_back({v, e.weight});
    net.adjacency_[v].push_back({u, e.weight});
  }
  for (auto& list : net.adjacency_) {
    std::stable_sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const Neighbor& x, const Neighbor& y) { return x.node == y.node; }),
               list.end());
  }
  for (std::uint32_t u = 0; u < net.adjacency_.size(); ++u) {
    for (const auto& nb : net.adjacency_[u]) {
      if (u < nb.node) {
        ++net.edge_count_;
        net.total_weight_ += nb.weight;
      }
    }
  }
  return net;
}

SemanticNetwork SemanticNetwork::from_edges(const std::vector<WeightedEdge>& edges, std::size_t snapshot_index) {
  std::vector<std::string> nodes;
  nodes.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    nodes.push_back(e.a);
    nodes.push_back(e.b);
  }
  return from_edges(std::move(nodes), edges, snapshot_index);
}

std::optional<std::size_t> SemanticNetwork::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SemanticNetwork::degree(const std::string& word) const {
  auto id = find(word);
  if (!id) throw Error("word '" + word + "' is not in the network");
  return degree(*id);
}

double SemanticNetwork::weighted_degree(std::size_t node) const {
  double s = 0.0;
  for (const auto& nb : adjacency_[node]) s += nb.weight;
  return s;
}

std::vector<WeightedEdge> SemanticNetwork::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count_);
  for (std::uint32_t u = 0; u < adjacency_.size(); ++u) {
    for (const auto& nb : adjacency_[u]) {
      if (u < nb.node) out.push_back({words_[u], words_[nb.node], nb.weight});
    }
  }
  return out;
}

SemanticNetwork SemanticNetwork::induced_subgraph(const WordSet& words) const {
  std::vector<std::uint32_t> members;
  members.reserve(words.size());
  for (const auto& w : words) {
    auto id = find(w);
    if (!id) throw Error("word '" + w + "' is not in the network");
    members.push_back(static_cast<std::uint32_t>(*id));
  }
  std::sort(members.begin(), members.end());
  std::vector<WeightedEdge> sub;
  for (auto u : members) {
    for (const auto& nb : adjacency_[u]) {
      if (u < nb.node && std::binary_search(members.begin(), members.end(), nb.node)) {
        sub.push_back({words_[u], words_[nb.node], nb.weight});
      }
    }
  }
  return from_edges(std::vector<std::string>(words.begin(), words.end()), sub, snapshot_index_);
}

SemanticNetwork build_network(const EmbeddingModel& model, double phi, std::size_t tau) {
  if (!(phi >= 0.0 && phi < 1.0)) throw Error("similarity threshold phi must lie in [0, 1)");
  if (tau == 0) throw Error("top-similar count tau must be at least 1");
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (const auto& hit : top_similar(model, i, tau)) {
      if (!(hit.score > phi)) continue;
      const std::string& w = model.word(i);
      if (w < hit.word) {
        edges.push_back({w, hit.word, hit.score});
      } else {
        edges.push_back({hit.word, w, hit.score});
      }
    }
  }
  return SemanticNetwork::from_edges(edges, model.snapshot_index());
}

namespace {

std::vector<std::uint32_t> member_ids(const SemanticNetwork& network, const WordSet& cluster) {
  std::vector<std::uint32_t> ids;
  ids.reserve(cluster.size());
  for (const auto& w : cluster) {
    auto id = network.find(w);
    if (!id) throw Error("cluster word '" + w + "' is not in the network");
    ids.push_back(static_cast<std::uint32_t>(*id));
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

double density(const SemanticNetwork& network, const WordSet& cluster) {
  const auto ids = member_ids(network, cluster);
  const std::size_t n = ids.size();
  if (n < 2) return 0.0;
  std::size_t internal = 0;
  for (auto u : ids) {
    for (const auto& nb : network.neighbors(u)) {
      if (u < nb.node && std::binary_search(ids.begin(), ids.end(), nb.node)) ++internal;
    }
  }
  return 2.0 * static_cast<double>(internal) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double cluster_centrality(const SemanticNetwork& network, const WordSet& cluster) {
  if (network.node_count() < 2) throw Error("cluster centrality needs a network with at least two nodes");
  const auto ids = member_ids(network, cluster);
  if (ids.empty()) throw Error("cluster centrality of an empty cluster");
  const double denom = static_cast<double>(network.node_count() - 1);
  double sum = 0.0;
  for (auto u : ids) sum += static_cast<double>(network.degree(u)) / denom;
  return sum / static_cast<double>(ids.size());
}

std::map<ClusterKey, double> cluster_frequency(const std::vector<ClusterWords>& clusters,
                                               const std::vector<TermStats>& term_stats) {
  std::map<ClusterKey, double> raw;
  for (const auto& c : clusters) {
    if (c.words.empty()) throw Error("cluster " + c.key.to_string() + " is empty");
    if (c.key.snapshot >= term_stats.size()) {
      throw Error("no term statistics for snapshot " + std::to_string(c.key.snapshot));
    }
    const auto& counts = term_stats[c.key.snapshot].counts;
    double sum = 0.0;
    for (const auto& w : c.words) {
      auto it = counts.find(w);
      if (it != counts.end()) sum += static_cast<double>(it->second);
    }
    raw[c.key] = sum / static_cast<double>(c.words.size());
  }
  if (raw.empty()) return raw;
  auto [lo, hi] = std::minmax_element(raw.begin(), raw.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  const double min = lo->second;
  const double max = hi->second;
  for (auto& [key, value] : raw) value = max > min ? (value - min) / (max - min) : 0.0;
  return raw;
}

std::vector<std::uint32_t> core_numbers(const std::vector<std::vector<std::uint32_t>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::uint32_t> degree(n);
  std::uint32_t max_degree = 0;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(adjacency[v].size());
    max_degree = std::max(max_degree, degree[v]);
  }
  // bin sort vertices by degree
  std::vector<std::uint32_t> bin(max_degree + 1, 0);
  for (auto d : degree) ++bin[d];
  std::uint32_t start = 0;
  for (auto& b : bin) {
    const std::uint32_t count = b;
    b = start;
    start += count;
  }
  std::vector<std::uint32_t> order(n), position(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    position[v] = bin[degree[v]]++;
    order[position[v]] = v;
  }
  for (std::uint32_t d = max_degree; d > 0; --d) bin[d] = bin[d - 1];
  if (!bin.empty()) bin[0] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t v = order[i];
    for (std::uint32_t u : adjacency[v]) {
      if (degree[u] > degree[v]) {
        const std::uint32_t du = degree[u];
        const std::uint32_t pu = position[u];
        const std::uint32_t pw = bin[du];
        const std::uint32_t w = order[pw];
        if (u != w) {
          order[pu] = w;
          position[w] = pu;
          order[pw] = u;
          position[u] = pw;
        }
        ++bin[du];
        --degree[u];
      }
    }
  }
  return degree;
}

CoreMap k_core_decomposition(const SemanticNetwork& graph) {
  std::vector<std::vector<std::uint32_t>> adjacency(graph.node_count());
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    for (const auto& nb : graph.neighbors(v)) adjacency[v].push_back(nb.node);
  }
  const auto cores = core_numbers(adjacency);
  CoreMap out;
  for (std::size_t v = 0; v < cores.size(); ++v) out.emplace(graph.word(v), cores[v]);
  return out;
}

}  // namespace topicevo
