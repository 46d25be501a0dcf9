#include "topicevo/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "topicevo/error.hpp"

namespace topicevo {

namespace {

// One level of the Louvain hierarchy. Edge lists hold each undirected edge in
// both directions; self_weight holds the weight folded into a node by
// aggregation, counted once.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency;
  std::vector<double> self_weight;

  std::size_t size() const { return adjacency.size(); }

  double degree(std::size_t i) const {
    double k = 2.0 * self_weight[i];
    for (const auto& [j, w] : adjacency[i]) k += w;
    return k;
  }
};

// Fisher-Yates driven by raw mt19937_64 output so the visit order does not
// depend on the standard library's distribution implementations.
void seeded_shuffle(std::vector<std::uint32_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

// Moves single nodes until no move gains more than min_gain. Starts from
// singletons unless `keep` is set, in which case `community` holds labels < n.
// Returns true if any node changed community.
bool local_moving(const LevelGraph& g, std::vector<std::uint32_t>& community, std::mt19937_64& rng,
                  const LouvainOptions& options, bool keep = false) {
  const std::size_t n = g.size();
  std::vector<double> k(n);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = g.degree(i);
    two_m += k[i];
  }
  if (!keep) {
    community.resize(n);
    std::iota(community.begin(), community.end(), 0u);
  }
  if (two_m <= 0.0) return false;
  const double m = two_m / 2.0;

  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[community[i]] += k[i];
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  seeded_shuffle(order, rng);

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t old_c = community[i];
      touched.clear();
      for (const auto& [j, w] : g.adjacency[i]) {
        const std::uint32_t c = community[j];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[old_c] -= k[i];
      auto gain = [&](std::uint32_t c) { return link[c] / m - options.resolution * tot[c] * k[i] / (2.0 * m * m); };
      const double stay = gain(old_c);
      std::uint32_t best = old_c;
      double best_gain = stay;
      for (std::uint32_t c : touched) {
        const double gc = gain(c);
        if (gc > best_gain) {
          best_gain = gc;
          best = c;
        }
      }
      if (best != old_c && best_gain - stay > options.min_gain) {
        community[i] = best;
        moved = true;
        any_move = true;
      }
      tot[community[i]] += k[i];
      for (std::uint32_t c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }
    }
  }
  return any_move;
}

// Renumbers community labels densely in order of first occurrence.
std::size_t renumber(std::vector<std::uint32_t>& community) {
  std::vector<std::uint32_t> remap(community.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : community) {
    if (remap[c] == UINT32_MAX) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& community, std::size_t count) {
  LevelGraph out;
  out.adjacency.resize(count);
  out.self_weight.assign(count, 0.0);
  std::vector<std::map<std::uint32_t, double>> links(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::uint32_t ci = community[i];
    out.self_weight[ci] += g.self_weight[i];
    for (const auto& [j, w] : g.adjacency[i]) {
      const std::uint32_t cj = community[j];
      if (ci == cj) {
        if (i < j) out.self_weight[ci] += w;
      } else {
        links[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    out.adjacency[c].assign(links[c].begin(), links[c].end());
  }
  return out;
}

}  // namespace

std::size_t Partition::cluster_count() const {
  std::size_t count = 0;
  for (const auto& [w, c] : assignment) count = std::max(count, c + 1);
  return count;
}

std::vector<WordSet> Partition::clusters() const {
  std::vector<WordSet> out(cluster_count());
  for (const auto& [w, c] : assignment) out[c].push_back(w);  // map order keeps words sorted
  return out;
}

double modularity(const SemanticNetwork& network, const std::map<std::string, std::size_t>& assignment,
                  double resolution, bool weighted) {
  const std::size_t n = network.node_count();
  std::vector<std::size_t> comm(n);
  std::size_t count = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto it = assignment.find(network.word(v));
    if (it == assignment.end()) throw Error("node '" + network.word(v) + "' has no cluster assignment");
    comm[v] = it->second;
    count = std::max(count, it->second + 1);
  }
  std::vector<double> in(count, 0.0), tot(count, 0.0);
  double two_m = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& nb : network.neighbors(v)) {
      const double w = weighted ? nb.weight : 1.0;
      tot[comm[v]] += w;
      two_m += w;
      if (comm[nb.node] == comm[v]) in[comm[v]] += w;
    }
  }
  if (two_m <= 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    const double share = tot[c] / two_m;
    q += in[c] / two_m - resolution * share * share;
  }
  return q;
}

namespace {

// One coarsen-then-refine pass; returns the level-0 community of every node.
std::vector<std::uint32_t> louvain_pass(const LevelGraph& base, std::mt19937_64& rng, const LouvainOptions& options) {
  std::vector<LevelGraph> levels{base};
  std::vector<std::vector<std::uint32_t>> maps;  // node at level l -> node at level l+1
  std::vector<std::uint32_t> community;
  while (local_moving(levels.back(), community, rng, options)) {
    const std::size_t count = renumber(community);
    maps.push_back(community);
    levels.push_back(aggregate(levels.back(), community, count));
  }
  // project down one level at a time and move single nodes again
  std::vector<std::uint32_t> part(levels.back().size());
  std::iota(part.begin(), part.end(), 0u);
  for (std::size_t l = maps.size(); l-- > 0;) {
    std::vector<std::uint32_t> finer(levels[l].size());
    for (std::size_t i = 0; i < finer.size(); ++i) finer[i] = part[maps[l][i]];
    local_moving(levels[l], finer, rng, options, true);
    part = std::move(finer);
  }
  return part;
}

}  // namespace

Partition louvain(const SemanticNetwork& network, std::uint64_t seed, const LouvainOptions& options) {
  if (network.empty()) throw Error("louvain: network is empty");
  if (options.random_starts == 0) throw Error("louvain: random_starts must be at least 1");
  const std::size_t n = network.node_count();

  LevelGraph base;
  base.adjacency.resize(n);
  base.self_weight.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& nb : network.neighbors(v)) {
      base.adjacency[v].emplace_back(nb.node, options.weighted ? nb.weight : 1.0);
    }
  }

  std::mt19937_64 rng(seed);
  Partition best;
  for (std::size_t start = 0; start < options.random_starts; ++start) {
    auto membership = louvain_pass(base, rng, options);
    renumber(membership);  // ids by smallest member word; node ids follow word order
    Partition p;
    p.snapshot_index = network.snapshot_index();
    for (std::size_t v = 0; v < n; ++v) p.assignment.emplace(network.word(v), membership[v]);
    p.modularity = modularity(network, p.assignment, options.resolution, options.weighted);
    if (start == 0 || p.modularity > best.modularity) best = std::move(p);
  }
  return best;
}

Partition partition_from_clusters(const SemanticNetwork& network, const std::vector<WordSet>& clusters,
                                  std::size_t snapshot_index) {
  std::vector<WordSet> sorted;
  for (const auto& c : clusters) {
    if (!c.empty()) sorted.push_back(make_word_set(c));
  }
  std::sort(sorted.begin(), sorted.end(), [](const WordSet& a, const WordSet& b) { return a.front() < b.front(); });
  Partition p;
  p.snapshot_index = snapshot_index;
  for (std::size_t c = 0; c < sorted.size(); ++c) {
    for (const auto& w : sorted[c]) {
      if (!p.assignment.emplace(w, c).second) throw Error("word '" + w + "' appears in two clusters");
    }
  }
  p.modularity = modularity(network, p.assignment);
  return p;
}

}  // namespace topicevo
