#include "topicevo/json_io.hpp"

#include <fstream>
#include <sstream>

#include "topicevo/error.hpp"

namespace topicevo::io {

namespace {

std::string pair_key(const WordPair& p) { return p.first + " " + p.second; }

WordPair parse_pair_key(const std::string& s) {
  const auto space = s.find(' ');
  if (space == std::string::npos) throw Error("bad word-pair key '" + s + "'");
  return {s.substr(0, space), s.substr(space + 1)};
}

std::pair<std::size_t, std::size_t> parse_index_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error("bad index-pair key '" + s + "'");
  return {std::stoul(s.substr(0, comma)), std::stoul(s.substr(comma + 1))};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

void write_json(const std::filesystem::path& path, const json& value) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << value.dump(1) << '\n';
  if (!out) throw Error("error writing " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing artifact " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

json to_json(const TermStats& stats) {
  json counts = json::object();
  for (const auto& [w, c] : stats.counts) counts[w] = c;
  return {{"snapshot", stats.snapshot_index}, {"total_tokens", stats.total_tokens}, {"counts", counts}};
}

TermStats term_stats_from_json(const json& j) {
  TermStats s;
  s.snapshot_index = j.at("snapshot").get<std::size_t>();
  s.total_tokens = j.at("total_tokens").get<std::uint64_t>();
  for (const auto& [w, c] : j.at("counts").items()) s.counts.emplace(w, c.get<std::uint64_t>());
  return s;
}

json to_json(const TfidfTable& table) {
  json values = json::object();
  for (const auto& [w, v] : table.values) values[w] = v;
  return {{"snapshot", table.snapshot_index}, {"mean", table.mean}, {"values", values}};
}

TfidfTable tfidf_from_json(const json& j) {
  TfidfTable t;
  t.snapshot_index = j.at("snapshot").get<std::size_t>();
  t.mean = j.at("mean").get<double>();
  for (const auto& [w, v] : j.at("values").items()) t.values.emplace(w, v.get<double>());
  return t;
}

json to_json(const SemanticNetwork& network) {
  json edges = json::array();
  for (const auto& e : network.edges()) edges.push_back(json::array({e.a, e.b, e.weight}));
  return {{"snapshot", network.snapshot_index()}, {"nodes", network.words()}, {"edges", edges}};
}

SemanticNetwork network_from_json(const json& j) {
  std::vector<WeightedEdge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>(), e.at(2).get<double>()});
  }
  return SemanticNetwork::from_edges(j.at("nodes").get<std::vector<std::string>>(), edges,
                                     j.value("snapshot", std::size_t{0}));
}

json to_json(const Partition& partition) {
  json clusters = json::object();
  const auto groups = partition.clusters();
  for (std::size_t c = 0; c < groups.size(); ++c) clusters[std::to_string(c)] = groups[c];
  return {{"snapshot", partition.snapshot_index}, {"modularity", partition.modularity}, {"clusters", clusters}};
}

Partition partition_from_json(const json& j) {
  Partition p;
  p.snapshot_index = j.value("snapshot", std::size_t{0});
  p.modularity = j.at("modularity").get<double>();
  for (const auto& [id, words] : j.at("clusters").items()) {
    const std::size_t c = std::stoul(id);
    for (const auto& w : words) p.assignment.emplace(w.get<std::string>(), c);
  }
  return p;
}

json to_json(const SimilarityMatrix& matrix) {
  json out = json::object();
  for (const auto& [ij, s] : matrix) out[std::to_string(ij.first) + "," + std::to_string(ij.second)] = s;
  return out;
}

SimilarityMatrix similarity_from_json(const json& j) {
  SimilarityMatrix m;
  for (const auto& [k, v] : j.items()) m.emplace(parse_index_pair(k), v.get<double>());
  return m;
}

json key_to_json(const ClusterKey& key) { return json::array({key.snapshot, key.cluster}); }

ClusterKey key_from_json(const json& j) { return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

json to_json(const EventLabel& label) {
  return {{"kind", std::string(to_string(label.kind))},
          {"transition", json::array({label.transition, label.transition + 1})},
          {"instability", optional_number(label.instability)},
          {"partners", label.partners}};
}

EventLabel event_from_json(const json& j) {
  EventLabel e;
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.transition = j.at("transition").at(0).get<std::size_t>();
  e.instability = optional_from(j.at("instability"));
  e.partners = j.at("partners").get<std::vector<std::size_t>>();
  e.topic = {e.outgoing() ? e.transition : e.transition + 1, 0};  // cluster id lives in the enclosing key
  return e;
}

json events_to_json(const std::vector<EventLabel>& labels) {
  json out = json::object();
  for (const auto& label : labels) {
    auto& slot = out[std::to_string(label.topic.snapshot)][std::to_string(label.topic.cluster)];
    if (slot.is_null()) slot = json::array();
    slot.push_back(to_json(label));
  }
  return out;
}

std::vector<EventLabel> events_from_json(const json& j) {
  std::vector<EventLabel> labels;
  for (const auto& [t, topics] : j.items()) {
    for (const auto& [id, list] : topics.items()) {
      for (const auto& item : list) {
        auto e = event_from_json(item);
        e.topic = {std::stoul(t), std::stoul(id)};
        labels.push_back(std::move(e));
      }
    }
  }
  return labels;
}

json to_json(const std::vector<TopicTimeSeries>& series) {
  json out = json::array();
  for (const auto& ts : series) {
    json steps = json::array();
    for (std::size_t k = 0; k < ts.steps.size(); ++k) {
      json events = json::array();
      if (k < ts.step_events.size()) {
        for (const auto& e : ts.step_events[k]) events.push_back(to_json(e));
      }
      steps.push_back({{"snapshot", ts.steps[k].snapshot}, {"cluster", ts.steps[k].cluster}, {"events", events}});
    }
    out.push_back({{"id", ts.id},
                   {"steps", steps},
                   {"step_similarities", ts.step_similarities},
                   {"merged_into", ts.merged_into ? key_to_json(*ts.merged_into) : json(nullptr)},
                   {"absorbed", ts.absorbed}});
  }
  return out;
}

std::vector<TopicTimeSeries> time_series_from_json(const json& j) {
  std::vector<TopicTimeSeries> out;
  for (const auto& item : j) {
    TopicTimeSeries ts;
    ts.id = item.at("id").get<std::string>();
    for (const auto& step : item.at("steps")) {
      const ClusterKey key{step.at("snapshot").get<std::size_t>(), step.at("cluster").get<std::size_t>()};
      ts.steps.push_back(key);
      std::vector<EventLabel> events;
      for (const auto& e : step.at("events")) {
        auto label = event_from_json(e);
        label.topic = key;
        events.push_back(std::move(label));
      }
      ts.step_events.push_back(std::move(events));
    }
    ts.step_similarities = item.at("step_similarities").get<std::vector<double>>();
    if (!item.at("merged_into").is_null()) ts.merged_into = key_from_json(item.at("merged_into"));
    ts.absorbed = item.at("absorbed").get<std::vector<std::string>>();
    out.push_back(std::move(ts));
  }
  return out;
}

json to_json(const ClusterMetrics& m) {
  return {{"size", m.size},
          {"centrality", m.centrality},
          {"density", m.density},
          {"cluster_frequency", m.cluster_frequency}};
}

ClusterMetrics metrics_from_json(const json& j) {
  return {j.at("size").get<std::size_t>(), j.at("centrality").get<double>(), j.at("density").get<double>(),
          j.at("cluster_frequency").get<double>()};
}

json to_json(const FilterResult& result) {
  json kept = json::array(), skipped = json::array(), reasons = json::object(), levels = json::object(),
       passed_at = json::object();
  for (const auto& k : result.kept) kept.push_back(key_to_json(k));
  for (const auto& k : result.skipped) skipped.push_back(key_to_json(k));
  for (const auto& [k, d] : result.decisions) {
    reasons[k.to_string()] = d.reason;
    if (d.passed_at) passed_at[k.to_string()] = key_to_json(*d.passed_at);
  }
  for (const auto& [k, l] : result.levels) levels[k.to_string()] = l;
  return {{"kept", kept}, {"skipped", skipped}, {"reasons", reasons}, {"levels", levels}, {"passed_at", passed_at}};
}

FilterResult filter_result_from_json(const json& j) {
  FilterResult r;
  for (const auto& k : j.at("kept")) {
    r.kept.push_back(key_from_json(k));
    r.decisions[r.kept.back()].kept = true;
  }
  for (const auto& k : j.at("skipped")) r.skipped.push_back(key_from_json(k));
  for (const auto& [k, reason] : j.at("reasons").items()) {
    const auto [t, c] = parse_index_pair(k);
    auto& d = r.decisions[ClusterKey{t, c}];
    d.cluster = {t, c};
    d.reason = reason.get<std::string>();
  }
  for (const auto& [k, level] : j.at("levels").items()) {
    const auto [t, c] = parse_index_pair(k);
    r.levels[ClusterKey{t, c}] = level.get<int>();
  }
  if (j.contains("passed_at")) {
    for (const auto& [k, at] : j.at("passed_at").items()) {
      const auto [t, c] = parse_index_pair(k);
      r.decisions[ClusterKey{t, c}].passed_at = key_from_json(at);
    }
  }
  return r;
}

json to_json(const RankedWord& word) {
  return {{"word", word.word}, {"tfidf", word.tfidf}, {"core", word.core}};
}

json to_json(const ReducedTopic& topic) {
  json kept = json::array(), removed = json::array();
  for (const auto& w : topic.kept) kept.push_back(to_json(w));
  for (const auto& w : topic.removed) removed.push_back(to_json(w));
  return {{"snapshot", topic.cluster.snapshot},
          {"cluster", topic.cluster.cluster},
          {"kept", kept},
          {"removed", removed},
          {"k", topic.core_threshold},
          {"mean_tfidf", topic.mean_tfidf}};
}

ReducedTopic reduced_from_json(const json& j, ClusterKey cluster) {
  ReducedTopic t;
  t.cluster = cluster;
  auto words = [](const json& list) {
    std::vector<RankedWord> out;
    for (const auto& w : list) {
      out.push_back({w.at("word").get<std::string>(), w.at("tfidf").get<double>(), w.at("core").get<std::uint32_t>()});
    }
    return out;
  };
  t.kept = words(j.at("kept"));
  t.removed = words(j.at("removed"));
  t.core_threshold = j.at("k").get<std::uint32_t>();
  t.mean_tfidf = j.at("mean_tfidf").get<double>();
  return t;
}

json to_json(const NgramCounts& counts) {
  json pairs = json::object(), words = json::object();
  for (const auto& [p, c] : counts.pair_counts) pairs[pair_key(p)] = c;
  for (const auto& [w, c] : counts.word_counts) words[w] = c;
  return {{"pair_counts", pairs},
          {"word_counts", words},
          {"total_windows", counts.total_windows},
          {"malformed_lines", counts.malformed_lines}};
}

NgramCounts counts_from_json(const json& j) {
  NgramCounts c;
  for (const auto& [k, v] : j.at("pair_counts").items()) c.pair_counts.emplace(parse_pair_key(k), v.get<std::uint64_t>());
  for (const auto& [k, v] : j.at("word_counts").items()) c.word_counts.emplace(k, v.get<std::uint64_t>());
  c.total_windows = j.at("total_windows").get<std::uint64_t>();
  c.malformed_lines = j.value("malformed_lines", std::uint64_t{0});
  return c;
}

json to_json(const PmiResult& r) {
  return {{"cluster", key_to_json(r.cluster)},
          {"words", r.words},
          {"pmi_values", r.pmi_values},
          {"score", optional_number(r.score)},
          {"mean", optional_number(r.mean)},
          {"coverage", r.coverage}};
}

}  // namespace topicevo::io
