#include "topicevo/filtering.hpp"

#include <algorithm>

#include "topicevo/error.hpp"

namespace topicevo {

namespace {

void check_range(double value, const char* name) {
  if (!(value >= 0.0 && value <= 0.9)) throw Error(std::string(name) + " threshold must lie in [0, 0.9]");
}

const ClusterMetrics& metrics_of(const std::map<ClusterKey, ClusterMetrics>& metrics, const ClusterKey& key) {
  auto it = metrics.find(key);
  if (it == metrics.end()) throw Error("no metrics for cluster " + key.to_string());
  return it->second;
}

}  // namespace

void FilterThresholds::validate() const {
  check_range(centrality, "centrality");
  check_range(cluster_frequency, "cluster frequency");
  if (density) check_range(*density, "density");
}

ImportanceLevel importance_level(const ClusterMetrics& metrics, double gamma, double theta_cf) {
  check_range(gamma, "centrality");
  check_range(theta_cf, "cluster frequency");
  const bool central = metrics.centrality > gamma;
  const bool frequent = metrics.cluster_frequency > theta_cf;
  if (central) return frequent ? 4 : 3;
  return frequent ? 2 : 1;
}

bool passes_thresholds(const ClusterMetrics& metrics, const FilterThresholds& thresholds) {
  if (!(metrics.centrality > thresholds.centrality)) return false;
  if (!(metrics.cluster_frequency > thresholds.cluster_frequency)) return false;
  return !thresholds.density || metrics.density > *thresholds.density;
}

FilterDecision is_cluster_usable(const ClusterKey& cluster, const std::vector<ClusterKey>& series,
                                 const std::map<ClusterKey, ClusterMetrics>& metrics,
                                 const FilterThresholds& thresholds) {
  thresholds.validate();
  FilterDecision decision;
  decision.cluster = cluster;
  const auto& own = metrics_of(metrics, cluster);
  if (own.size <= thresholds.min_size) {
    decision.reason = "size " + std::to_string(own.size) + " <= alpha";
    return decision;
  }
  if (passes_thresholds(own, thresholds)) {
    decision.kept = true;
    decision.passed_at = cluster;
    decision.reason = "passes thresholds at t=" + std::to_string(cluster.snapshot);
    return decision;
  }
  for (const auto& step : series) {
    if (step == cluster) continue;
    if (passes_thresholds(metrics_of(metrics, step), thresholds)) {
      decision.kept = true;
      decision.passed_at = step;
      decision.reason = "series member " + step.to_string() + " passes thresholds";
      return decision;
    }
  }
  decision.reason = "no series member passes thresholds";
  return decision;
}

FilterResult filter_clusters(const std::map<ClusterKey, ClusterMetrics>& metrics,
                             const std::vector<TopicTimeSeries>& series, const FilterThresholds& thresholds) {
  thresholds.validate();
  const auto index = series_index(series);
  FilterResult result;
  for (const auto& [key, m] : metrics) {
    auto it = index.find(key);
    if (it == index.end()) throw Error("cluster " + key.to_string() + " is not part of any time series");
    auto decision = is_cluster_usable(key, series[it->second].steps, metrics, thresholds);
    (decision.kept ? result.kept : result.skipped).push_back(key);
    result.levels[key] = importance_level(m, thresholds.centrality, thresholds.cluster_frequency);
    result.decisions.emplace(key, std::move(decision));
  }
  return result;
}

}  // namespace topicevo
