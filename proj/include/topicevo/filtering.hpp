#pragma once

// Topic importance: quadrant levels on the (centrality, cluster frequency)
// plane and the series-aware keep/skip decision.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topicevo/evolution.hpp"
#include "topicevo/network.hpp"
#include "topicevo/types.hpp"

namespace topicevo {

/// 1: c <= γ, cf <= θ   2: c <= γ, cf > θ   3: c > γ, cf <= θ   4: c > γ, cf > θ
using ImportanceLevel = int;

struct FilterThresholds {
  double centrality = 0.0;         // γ in [0, 0.9]
  double cluster_frequency = 0.0;  // θ_cf in [0, 0.9]
  std::optional<double> density;   // δ in [0, 0.9], conjoined when set
  std::size_t min_size = 0;        // α; a cluster needs more than α words

  void validate() const;
};

ImportanceLevel importance_level(const ClusterMetrics& metrics, double gamma, double theta_cf);

/// Rules 2-3 for one set of metrics: c > γ and cf > θ (and d > δ when δ is set).
bool passes_thresholds(const ClusterMetrics& metrics, const FilterThresholds& thresholds);

struct FilterDecision {
  ClusterKey cluster;
  bool kept = false;
  std::string reason;
  std::optional<ClusterKey> passed_at;  // step whose metrics satisfied the thresholds
};

/// `series` lists the cluster's time series in step order (it must contain
/// `cluster`); `metrics` must cover every step.
FilterDecision is_cluster_usable(const ClusterKey& cluster, const std::vector<ClusterKey>& series,
                                 const std::map<ClusterKey, ClusterMetrics>& metrics,
                                 const FilterThresholds& thresholds);

struct FilterResult {
  std::vector<ClusterKey> kept;
  std::vector<ClusterKey> skipped;
  std::map<ClusterKey, FilterDecision> decisions;
  std::map<ClusterKey, ImportanceLevel> levels;
};

FilterResult filter_clusters(const std::map<ClusterKey, ClusterMetrics>& metrics,
                             const std::vector<TopicTimeSeries>& series, const FilterThresholds& thresholds);

}  // namespace topicevo
