#pragma once

// JSON encodings of every persisted artifact. Objects use std::map-backed
// nlohmann::json, so keys serialise in sorted order.

#include <filesystem>
#include <map>
#include <vector>

#include <json.hpp>

#include "topicevo/coherence.hpp"
#include "topicevo/community.hpp"
#include "topicevo/corpus.hpp"
#include "topicevo/evolution.hpp"
#include "topicevo/filtering.hpp"
#include "topicevo/network.hpp"
#include "topicevo/reduction.hpp"

namespace topicevo::io {

using nlohmann::json;

void write_json(const std::filesystem::path& path, const json& value);
json read_json(const std::filesystem::path& path);

json to_json(const TermStats& stats);
TermStats term_stats_from_json(const json& j);

json to_json(const TfidfTable& table);
TfidfTable tfidf_from_json(const json& j);

json to_json(const SemanticNetwork& network);
SemanticNetwork network_from_json(const json& j);

json to_json(const Partition& partition);
Partition partition_from_json(const json& j);

json to_json(const SimilarityMatrix& matrix);
SimilarityMatrix similarity_from_json(const json& j);

json key_to_json(const ClusterKey& key);
ClusterKey key_from_json(const json& j);

json to_json(const EventLabel& label);
EventLabel event_from_json(const json& j);

/// {"t": {"cluster_id": [labels recorded on that topic]}}
json events_to_json(const std::vector<EventLabel>& labels);
std::vector<EventLabel> events_from_json(const json& j);

json to_json(const std::vector<TopicTimeSeries>& series);
std::vector<TopicTimeSeries> time_series_from_json(const json& j);

json to_json(const ClusterMetrics& metrics);
ClusterMetrics metrics_from_json(const json& j);

json to_json(const FilterResult& result);
FilterResult filter_result_from_json(const json& j);

json to_json(const RankedWord& word);
json to_json(const ReducedTopic& topic);
ReducedTopic reduced_from_json(const json& j, ClusterKey cluster);

json to_json(const NgramCounts& counts);
NgramCounts counts_from_json(const json& j);

json to_json(const PmiResult& result);

}  // namespace topicevo::io
