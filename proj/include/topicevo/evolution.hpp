#pragma once

// Topic matching across consecutive snapshots, topic time series and
// evolution event labels.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topicevo/types.hpp"

namespace topicevo {

/// Clusters of one snapshot, indexed by cluster id.
using Clustering = std::vector<WordSet>;

/// Nonzero entries only, keyed by (cluster at t, cluster at t+1).
using SimilarityMatrix = std::map<std::pair<std::size_t, std::size_t>, double>;

/// min(|A∩B|/|A|, |A∩B|/|B|). Both sets must be non-empty.
double cluster_similarity(const WordSet& a, const WordSet& b);

SimilarityMatrix similarity_matrix(const Clustering& from, const Clustering& to);

/// (n_next / n_prev) - 1.
double instability(std::size_t n_prev, std::size_t n_next);

enum class EventKind { Grow, Survive, Contract, Split, Merge, Die, Birth };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

/// One label for one (topic, transition t -> t+1). Outgoing labels (Die,
/// Split, Grow, Survive, Contract) are recorded on the topic at t; incoming
/// labels (Merge, Birth) on the topic at t+1.
struct EventLabel {
  EventKind kind = EventKind::Survive;
  ClusterKey topic;
  std::size_t transition = 0;  // t of the t -> t+1 transition
  std::optional<double> instability;
  /// Matched clusters on the other side: successors at t+1 for outgoing
  /// labels, predecessors at t for Merge.
  std::vector<std::size_t> partners;

  bool outgoing() const { return kind != EventKind::Merge && kind != EventKind::Birth; }
  bool operator==(const EventLabel&) const = default;
};

struct EventThresholds {
  double match = 0.0;        // a pair matches when similarity > match, in [0, 1]
  double instability = 0.1;  // Grow/Contract when |inst| > instability, positive

  void validate() const;
};

/// Labels for one transition. Every topic at t gets exactly one outgoing label:
/// no match above the threshold -> Die; several -> Split (instability toward
/// the best match); one -> Contract, Grow or Survive by instability. Every
/// topic at t+1 matched by several predecessors gets Merge, and by none gets
/// Birth. Labels are ordered: outgoing by cluster id, then incoming by id.
std::vector<EventLabel> label_transition(const SimilarityMatrix& matrix, const Clustering& from,
                                         const Clustering& to, std::size_t transition,
                                         const EventThresholds& thresholds);

/// label_transition over every consecutive pair; matrices[t] covers t -> t+1.
std::vector<EventLabel> label_events(const std::vector<SimilarityMatrix>& matrices,
                                     const std::vector<Clustering>& partitions,
                                     const EventThresholds& thresholds);

struct TopicTimeSeries {
  std::string id;
  std::vector<ClusterKey> steps;
  std::vector<double> step_similarities;  // size steps-1
  /// Cluster this series flowed into when another series continued through it.
  std::optional<ClusterKey> merged_into;
  /// Series that ended by flowing into one of this series' steps.
  std::vector<std::string> absorbed;
  /// Labels recorded on each step's topic, aligned with `steps`.
  std::vector<std::vector<EventLabel>> step_events;

  bool operator==(const TopicTimeSeries&) const = default;
};

/// Greedy chaining. Each cluster's successor is its highest-similarity
/// cluster in the next snapshot (ties -> lowest id). When several clusters
/// pick the same successor, the one with the highest similarity (ties ->
/// lowest id) continues the series; the others end there and record the
/// merge point. Every cluster lies in exactly one series. Series are
/// created in (snapshot, cluster id) order of their first step.
std::vector<TopicTimeSeries> build_time_series(const std::vector<Clustering>& partitions,
                                               const std::vector<SimilarityMatrix>& matrices);

/// Fills step_events from a label list.
void attach_events(std::vector<TopicTimeSeries>& series, const std::vector<EventLabel>& labels);

/// Maps every cluster to the index of its series.
std::map<ClusterKey, std::size_t> series_index(const std::vector<TopicTimeSeries>& series);

}  // namespace topicevo
