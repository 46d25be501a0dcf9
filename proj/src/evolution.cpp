#include "topicevo/evolution.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "topicevo/error.hpp"

namespace topicevo {

namespace {

std::size_t intersection_size(const WordSet& a, const WordSet& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

constexpr std::array<std::string_view, 7> kEventNames = {"Grow",  "Survive", "Contract", "Split",
                                                         "Merge", "Die",     "Birth"};

}  // namespace

double cluster_similarity(const WordSet& a, const WordSet& b) {
  if (a.empty() || b.empty()) throw Error("cluster_similarity: empty word set");
  const double common = static_cast<double>(intersection_size(a, b));
  return std::min(common / static_cast<double>(a.size()), common / static_cast<double>(b.size()));
}

SimilarityMatrix similarity_matrix(const Clustering& from, const Clustering& to) {
  // word -> clusters of `to` containing it, so only overlapping pairs are scored
  std::unordered_map<std::string, std::vector<std::size_t>> owners;
  for (std::size_t j = 0; j < to.size(); ++j) {
    for (const auto& w : to[j]) owners[w].push_back(j);
  }
  SimilarityMatrix matrix;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < from.size(); ++i) {
    candidates.clear();
    for (const auto& w : from[i]) {
      auto it = owners.find(w);
      if (it != owners.end()) candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (std::size_t j : candidates) {
      const double s = cluster_similarity(from[i], to[j]);
      if (s > 0.0) matrix.emplace(std::make_pair(i, j), s);
    }
  }
  return matrix;
}

double instability(std::size_t n_prev, std::size_t n_next) {
  if (n_prev == 0) throw Error("instability: predecessor topic has no words");
  return static_cast<double>(n_next) / static_cast<double>(n_prev) - 1.0;
}

std::string_view to_string(EventKind kind) { return kEventNames[static_cast<std::size_t>(kind)]; }

EventKind parse_event_kind(std::string_view text) {
  for (std::size_t k = 0; k < kEventNames.size(); ++k) {
    if (kEventNames[k] == text) return static_cast<EventKind>(k);
  }
  throw Error("unknown event kind '" + std::string(text) + "'");
}

void EventThresholds::validate() const {
  if (!(match >= 0.0 && match <= 1.0)) throw Error("match threshold must lie in [0, 1]");
  if (!(instability > 0.0)) throw Error("instability threshold must be positive");
}

std::vector<EventLabel> label_transition(const SimilarityMatrix& matrix, const Clustering& from,
                                         const Clustering& to, std::size_t transition,
                                         const EventThresholds& thresholds) {
  thresholds.validate();
  std::vector<std::vector<std::pair<std::size_t, double>>> successors(from.size());
  std::vector<std::vector<std::size_t>> predecessors(to.size());
  for (const auto& [ij, sim] : matrix) {
    const auto [i, j] = ij;
    if (i >= from.size() || j >= to.size()) throw Error("similarity matrix refers to an unknown cluster");
    if (sim > thresholds.match) {
      successors[i].emplace_back(j, sim);
      predecessors[j].push_back(i);
    }
  }

  std::vector<EventLabel> labels;
  for (std::size_t i = 0; i < from.size(); ++i) {
    EventLabel label;
    label.topic = {transition, i};
    label.transition = transition;
    const auto& matches = successors[i];  // ascending j (map order)
    for (const auto& [j, sim] : matches) label.partners.push_back(j);
    if (matches.empty()) {
      label.kind = EventKind::Die;
    } else {
      auto best = matches.front();
      for (const auto& m : matches) {
        if (m.second > best.second) best = m;
      }
      const double inst = instability(from[i].size(), to[best.first].size());
      label.instability = inst;
      if (matches.size() > 1) {
        label.kind = EventKind::Split;
      } else if (inst < -thresholds.instability) {
        label.kind = EventKind::Contract;
      } else if (inst > thresholds.instability) {
        label.kind = EventKind::Grow;
      } else {
        label.kind = EventKind::Survive;
      }
    }
    labels.push_back(std::move(label));
  }
  for (std::size_t j = 0; j < to.size(); ++j) {
    if (predecessors[j].size() == 1) continue;
    EventLabel label;
    label.topic = {transition + 1, j};
    label.transition = transition;
    label.kind = predecessors[j].empty() ? EventKind::Birth : EventKind::Merge;
    label.partners = predecessors[j];
    labels.push_back(std::move(label));
  }
  return labels;
}

std::vector<EventLabel> label_events(const std::vector<SimilarityMatrix>& matrices,
                                     const std::vector<Clustering>& partitions,
                                     const EventThresholds& thresholds) {
  if (partitions.size() >= 2 && matrices.size() < partitions.size() - 1) {
    throw Error("label_events: missing similarity matrix for transition " + std::to_string(matrices.size()));
  }
  std::vector<EventLabel> all;
  for (std::size_t t = 0; t + 1 < partitions.size(); ++t) {
    auto labels = label_transition(matrices[t], partitions[t], partitions[t + 1], t, thresholds);
    all.insert(all.end(), std::make_move_iterator(labels.begin()), std::make_move_iterator(labels.end()));
  }
  return all;
}

std::vector<TopicTimeSeries> build_time_series(const std::vector<Clustering>& partitions,
                                               const std::vector<SimilarityMatrix>& matrices) {
  const std::size_t snapshots = partitions.size();
  if (snapshots >= 2 && matrices.size() < snapshots - 1) {
    throw Error("build_time_series: missing similarity matrix for transition " +
                std::to_string(matrices.size()) + " -> " + std::to_string(matrices.size() + 1));
  }
  struct Link {
    std::size_t cluster = 0;
    double similarity = 0.0;
  };
  // successor[t][i]: argmax over row i of matrices[t]
  std::vector<std::vector<std::optional<Link>>> successor(snapshots);
  // continuing[t+1][j]: predecessor that carries its series into (t+1, j)
  std::vector<std::vector<std::optional<Link>>> continuing(snapshots);
  for (std::size_t t = 0; t < snapshots; ++t) {
    successor[t].resize(partitions[t].size());
    continuing[t].resize(partitions[t].size());
  }
  for (std::size_t t = 0; t + 1 < snapshots; ++t) {
    for (const auto& [ij, sim] : matrices[t]) {
      const auto [i, j] = ij;
      if (i >= partitions[t].size() || j >= partitions[t + 1].size()) {
        throw Error("similarity matrix " + std::to_string(t) + " refers to an unknown cluster");
      }
      if (!(sim > 0.0)) continue;
      auto& s = successor[t][i];
      if (!s || sim > s->similarity) s = Link{j, sim};  // ascending j keeps the lowest id on ties
    }
    for (std::size_t i = 0; i < partitions[t].size(); ++i) {
      const auto& s = successor[t][i];
      if (!s) continue;
      auto& c = continuing[t + 1][s->cluster];
      if (!c || s->similarity > c->similarity) c = Link{i, s->similarity};
    }
  }

  std::vector<TopicTimeSeries> series;
  std::map<ClusterKey, std::size_t> owner;
  for (std::size_t t = 0; t < snapshots; ++t) {
    for (std::size_t i = 0; i < partitions[t].size(); ++i) {
      if (continuing[t][i]) continue;
      TopicTimeSeries ts;
      ts.id = "ts-" + std::to_string(t) + "-" + std::to_string(i);
      ClusterKey at{t, i};
      ts.steps.push_back(at);
      for (;;) {
        const auto& s = successor[at.snapshot][at.cluster];
        if (!s) break;
        const ClusterKey next{at.snapshot + 1, s->cluster};
        if (continuing[next.snapshot][next.cluster]->cluster != at.cluster) {
          ts.merged_into = next;
          break;
        }
        ts.steps.push_back(next);
        ts.step_similarities.push_back(s->similarity);
        at = next;
      }
      for (const auto& k : ts.steps) owner[k] = series.size();
      ts.step_events.resize(ts.steps.size());
      series.push_back(std::move(ts));
    }
  }
  for (const auto& ts : series) {
    if (ts.merged_into) series[owner.at(*ts.merged_into)].absorbed.push_back(ts.id);
  }
  return series;
}

void attach_events(std::vector<TopicTimeSeries>& series, const std::vector<EventLabel>& labels) {
  std::map<ClusterKey, std::pair<std::size_t, std::size_t>> where;
  for (std::size_t s = 0; s < series.size(); ++s) {
    series[s].step_events.assign(series[s].steps.size(), {});
    for (std::size_t k = 0; k < series[s].steps.size(); ++k) where[series[s].steps[k]] = {s, k};
  }
  for (const auto& label : labels) {
    auto it = where.find(label.topic);
    if (it == where.end()) throw Error("event label for unknown topic " + label.topic.to_string());
    series[it->second.first].step_events[it->second.second].push_back(label);
  }
}

std::map<ClusterKey, std::size_t> series_index(const std::vector<TopicTimeSeries>& series) {
  std::map<ClusterKey, std::size_t> index;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (const auto& k : series[s].steps) {
      if (!index.emplace(k, s).second) throw Error("cluster " + k.to_string() + " belongs to two series");
    }
  }
  return index;
}

}  // namespace topicevo
