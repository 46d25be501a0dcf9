#include "topicevo/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "topicevo/error.hpp"
#include "topicevo/json_io.hpp"
#include "topicevo/parallel.hpp"

namespace topicevo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error("config key '" + key + "' expects a number, got '" + value + "'");
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int v{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size()) {
    throw Error("config key '" + key + "' expects an integer, got '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw Error("config key '" + key + "' expects a boolean, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json optional_json(const auto& v) { return v ? json(*v) : json(nullptr); }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

// ---------------------------------------------------------------- RunConfig

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "corpus", "corpus_format", "embeddings", "ngrams", "out", "stop_words", "snapshots", "seed",
      "phi", "tau", "theta_match", "phi_inst", "gamma", "theta_cf", "delta", "alpha", "core_k",
      "resolution", "random_starts", "unweighted", "parallel", "jobs", "skip_malformed", "reduce_all", "top_n",
      "pmi_clusters", "pmi_min_size", "min_year", "max_year"};
  return k;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string value = trim(raw_value);
  if (key == "corpus") corpus = value;
  else if (key == "corpus_format") corpus_format = value;
  else if (key == "embeddings") embeddings = value;
  else if (key == "ngrams") ngrams = value;
  else if (key == "out") out = value;
  else if (key == "stop_words") stop_words = value;
  else if (key == "snapshots") snapshots = value;
  else if (key == "seed") seed = to_int<std::uint64_t>(key, value);
  else if (key == "phi" || key == "sigma") phi = to_double(key, value);
  else if (key == "tau") tau = to_int<std::size_t>(key, value);
  else if (key == "theta_match") theta_match = to_double(key, value);
  else if (key == "phi_inst") phi_inst = to_double(key, value);
  else if (key == "gamma") gamma = to_double(key, value);
  else if (key == "theta_cf") theta_cf = to_double(key, value);
  else if (key == "delta") delta = value.empty() || value == "none" ? std::nullopt : std::optional(to_double(key, value));
  else if (key == "alpha") alpha = to_int<std::size_t>(key, value);
  else if (key == "core_k") core_k = to_int<std::uint32_t>(key, value);
  else if (key == "resolution") resolution = to_double(key, value);
  else if (key == "random_starts") random_starts = to_int<std::size_t>(key, value);
  else if (key == "unweighted") unweighted = to_bool(key, value);
  else if (key == "parallel") parallel = to_bool(key, value);
  else if (key == "jobs") jobs = to_int<std::size_t>(key, value);
  else if (key == "skip_malformed") skip_malformed = to_bool(key, value);
  else if (key == "reduce_all") reduce_all = to_bool(key, value);
  else if (key == "top_n") top_n = to_int<std::size_t>(key, value);
  else if (key == "pmi_clusters") pmi_clusters = to_int<std::size_t>(key, value);
  else if (key == "pmi_min_size") pmi_min_size = to_int<std::size_t>(key, value);
  else if (key == "min_year") min_year = value.empty() ? std::nullopt : std::optional(to_int<int>(key, value));
  else if (key == "max_year") max_year = value.empty() ? std::nullopt : std::optional(to_int<int>(key, value));
  else throw Error("unknown config key '" + raw_key + "'");
}

void RunConfig::validate() const {
  if (!(phi >= 0.0 && phi < 1.0)) throw Error("phi must lie in [0, 1)");
  if (tau == 0) throw Error("tau must be at least 1");
  EventThresholds{theta_match, phi_inst}.validate();
  FilterThresholds{gamma, theta_cf, delta, alpha}.validate();
  if (core_k == 0) throw Error("core_k must be at least 1");
  if (!(resolution > 0.0)) throw Error("resolution must be positive");
  if (random_starts == 0) throw Error("random_starts must be at least 1");
  if (top_n == 0) throw Error("top_n must be at least 1");
  SnapshotSpec::parse(snapshots);
  if (!corpus_format.empty()) parse_corpus_format(corpus_format);
}

std::size_t RunConfig::effective_jobs() const {
  if (!parallel && jobs <= 1) return 1;
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

json RunConfig::to_json() const {
  return {{"corpus", corpus.string()},
          {"corpus_format", corpus_format},
          {"embeddings", embeddings.string()},
          {"ngrams", ngrams.string()},
          {"out", out.string()},
          {"stop_words", stop_words.string()},
          {"snapshots", snapshots},
          {"seed", seed},
          {"phi", phi},
          {"tau", tau},
          {"theta_match", theta_match},
          {"phi_inst", phi_inst},
          {"gamma", gamma},
          {"theta_cf", theta_cf},
          {"delta", optional_json(delta)},
          {"alpha", alpha},
          {"core_k", core_k},
          {"resolution", resolution},
          {"random_starts", random_starts},
          {"unweighted", unweighted},
          {"parallel", parallel},
          {"jobs", effective_jobs()},
          {"skip_malformed", skip_malformed},
          {"reduce_all", reduce_all},
          {"top_n", top_n},
          {"pmi_clusters", pmi_clusters},
          {"pmi_min_size", pmi_min_size},
          {"min_year", optional_json(min_year)},
          {"max_year", optional_json(max_year)}};
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path.string(), line_no, "expected key = value");
    out[normalize_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }
  return out;
}

// ---------------------------------------------------------------- TimingLog

TimingLog::TimingLog(const TimingLog& other) {
  std::lock_guard lock(other.mutex_);
  records_ = other.records_;
  stage_wall_ = other.stage_wall_;
}

TimingLog& TimingLog::operator=(const TimingLog& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  records_ = other.records_;
  stage_wall_ = other.stage_wall_;
  return *this;
}

void TimingLog::record(const std::string& stage, std::optional<std::size_t> snapshot, double millis) {
  std::lock_guard lock(mutex_);
  records_.push_back({stage, snapshot, millis});
}

void TimingLog::record_stage_wall(const std::string& stage, double millis) {
  std::lock_guard lock(mutex_);
  stage_wall_[stage] += millis;
}

std::vector<StageTiming> TimingLog::records() const {
  std::lock_guard lock(mutex_);
  auto out = records_;
  auto rank = [](const std::string& s) {
    const auto& names = stage_names();
    return std::find(names.begin(), names.end(), s) - names.begin();
  };
  std::stable_sort(out.begin(), out.end(), [&](const StageTiming& a, const StageTiming& b) {
    if (a.stage != b.stage) return rank(a.stage) < rank(b.stage);
    return a.snapshot.value_or(SIZE_MAX) < b.snapshot.value_or(SIZE_MAX);
  });
  return out;
}

std::map<std::string, double> TimingLog::stage_wall() const {
  std::lock_guard lock(mutex_);
  return stage_wall_;
}

json TimingLog::to_json() const {
  json records = json::array();
  for (const auto& r : this->records()) {
    records.push_back({{"stage", r.stage},
                       {"snapshot", r.snapshot ? json(std::to_string(*r.snapshot)) : json("global")},
                       {"wall_millis", r.wall_millis}});
  }
  return {{"records", records}, {"stage_wall_millis", stage_wall()}};
}

TimingLog TimingLog::from_json(const json& j) {
  TimingLog log;
  for (const auto& r : j.at("records")) {
    const auto snap = r.at("snapshot").get<std::string>();
    log.records_.push_back({r.at("stage").get<std::string>(),
                            snap == "global" ? std::nullopt : std::optional<std::size_t>(std::stoul(snap)),
                            r.at("wall_millis").get<double>()});
  }
  for (const auto& [stage, ms] : j.at("stage_wall_millis").items()) log.stage_wall_[stage] = ms.get<double>();
  return log;
}

void TimingLog::merge(const TimingLog& other) {
  const auto incoming = other.records();
  const auto walls = other.stage_wall();
  std::lock_guard lock(mutex_);
  std::erase_if(records_, [&](const StageTiming& r) { return walls.contains(r.stage); });
  for (const auto& r : incoming) records_.push_back(r);
  for (const auto& [s, ms] : walls) stage_wall_[s] = ms;
}

// ---------------------------------------------------------------- Runner

Runner::Runner(RunConfig config) : config_(std::move(config)), paths_{config_.out} { config_.validate(); }

template <typename Fn>
void Runner::per_snapshot(const std::string& stage, std::size_t count, Fn&& fn) {
  parallel_for(count, config_.effective_jobs(), [&](std::size_t t) {
    const auto start = Clock::now();
    try {
      fn(t);
    } catch (const std::exception& e) {
      throw Error("stage " + stage + " failed for snapshot " + std::to_string(t) + ": " + e.what());
    }
    timings_.record(stage, t, millis_since(start));
  });
}

std::size_t Runner::snapshot_count() {
  if (!snapshot_count_) {
    const auto report = io::read_json(paths_.ingest());
    snapshot_count_ = report.at("snapshots").size();
    ingest_report_ = report;
  }
  return *snapshot_count_;
}

void Runner::ingest() {
  const auto stage_start = Clock::now();
  auto start = Clock::now();
  LoadOptions options;
  options.skip_malformed = config_.skip_malformed;
  if (!config_.stop_words.empty()) {
    std::ifstream in(config_.stop_words);
    if (!in) throw Error("cannot read stop-word list " + config_.stop_words.string());
    for (std::string w; in >> w;) options.tokenizer.stop_words.insert(lower(w));
  }
  const auto format = config_.corpus_format.empty() ? corpus_format_for(config_.corpus)
                                                    : parse_corpus_format(config_.corpus_format);
  LoadedCorpus loaded;
  PartitionResult parts;
  try {
    loaded = load_corpus(config_.corpus, format, options);
    parts = partition_snapshots(std::move(loaded.documents), SnapshotSpec::parse(config_.snapshots));
  } catch (const std::exception& e) {
    throw Error(std::string("stage ingest failed: ") + e.what());
  }
  timings_.record("ingest", std::nullopt, millis_since(start));

  const std::size_t count = parts.snapshots.size();
  termstats_.assign(count, {});
  per_snapshot("ingest", count, [&](std::size_t t) {
    termstats_[t] = term_frequencies(parts.snapshots[t]);
    io::write_json(paths_.termstats(t), io::to_json(termstats_[t]));
  });

  json snapshots = json::array();
  std::size_t in_range = 0;
  for (const auto& s : parts.snapshots) {
    snapshots.push_back({{"index", s.index},
                         {"start", s.start},
                         {"end", s.end},
                         {"documents", s.documents.size()},
                         {"total_tokens", s.total_tokens}});
    in_range += s.documents.size();
  }
  ingest_report_ = {{"records", loaded.report.records},
                    {"documents", in_range},
                    {"dropped_empty", loaded.report.dropped_empty},
                    {"skipped_malformed", loaded.report.skipped_malformed},
                    {"malformed", loaded.report.malformed},
                    {"out_of_range", parts.report.out_of_range},
                    {"empty_windows", parts.report.empty_windows},
                    {"snapshot_spec", config_.snapshots},
                    {"snapshots", snapshots}};
  io::write_json(paths_.ingest(), ingest_report_);
  snapshot_count_ = count;
  timings_.record_stage_wall("ingest", millis_since(stage_start));
  stages_run_.push_back("ingest");
}

void Runner::stats() {
  const auto stage_start = Clock::now();
  load_termstats();
  tfidf_ = compute_tfidf(termstats_);
  for (const auto& table : tfidf_) io::write_json(paths_.tfidf(table.snapshot_index), io::to_json(table));
  const double ms = millis_since(stage_start);
  timings_.record("ingest", std::nullopt, ms);
  timings_.record_stage_wall("ingest", ms);
  stages_run_.push_back("stats");
}

void Runner::network() {
  const auto stage_start = Clock::now();
  const std::size_t count = snapshot_count();
  std::vector<fs::path> files(count);
  for (std::size_t t = 0; t < count; ++t) {
    for (const char* ext : {".vec", ".txt"}) {
      const auto candidate = config_.embeddings / (std::to_string(t) + ext);
      if (fs::exists(candidate)) {
        files[t] = candidate;
        break;
      }
    }
    if (files[t].empty()) {
      throw Error("stage network failed for snapshot " + std::to_string(t) + ": no embedding file " +
                  (config_.embeddings / (std::to_string(t) + ".vec")).string());
    }
  }
  networks_.assign(count, {});
  embedding_dims_.assign(count, 0);
  per_snapshot("network", count, [&](std::size_t t) {
    const auto model = load_embeddings(files[t], t);
    embedding_dims_[t] = model.dimension();
    networks_[t] = build_network(model, config_.phi, config_.tau);
    io::write_json(paths_.network(t), io::to_json(networks_[t]));
  });
  timings_.record_stage_wall("network", millis_since(stage_start));
  stages_run_.push_back("network");
}

void Runner::cluster() {
  const auto stage_start = Clock::now();
  load_networks();
  const std::size_t count = networks_.size();
  partitions_.assign(count, {});
  LouvainOptions options;
  options.resolution = config_.resolution;
  options.weighted = !config_.unweighted;
  options.random_starts = config_.random_starts;
  per_snapshot("cluster", count, [&](std::size_t t) {
    if (networks_[t].empty()) {
      partitions_[t].snapshot_index = t;  // nothing above the similarity threshold
    } else {
      partitions_[t] = louvain(networks_[t], config_.seed + t, options);
    }
    io::write_json(paths_.clusters(t), io::to_json(partitions_[t]));
  });
  timings_.record_stage_wall("cluster", millis_since(stage_start));
  stages_run_.push_back("cluster");
}

void Runner::similarity() {
  const auto stage_start = Clock::now();
  load_partitions();
  const std::size_t count = partitions_.size();
  const std::size_t pairs = count > 0 ? count - 1 : 0;
  std::vector<Clustering> clusterings(count);
  for (std::size_t t = 0; t < count; ++t) clusterings[t] = partitions_[t].clusters();
  matrices_.assign(pairs, {});
  fs::remove_all(paths_.root / "sim");
  fs::create_directories(paths_.root / "sim");
  per_snapshot("similarity", pairs, [&](std::size_t t) {
    matrices_[t] = similarity_matrix(clusterings[t], clusterings[t + 1]);
    io::write_json(paths_.similarity(t), io::to_json(matrices_[t]));
  });
  timings_.record_stage_wall("similarity", millis_since(stage_start));
  stages_run_.push_back("similarity");
}

void Runner::timeseries() {
  const auto stage_start = Clock::now();
  load_partitions();
  load_matrices();
  std::vector<Clustering> clusterings;
  for (const auto& p : partitions_) clusterings.push_back(p.clusters());
  series_ = build_time_series(clusterings, matrices_);
  events_ = label_events(matrices_, clusterings, EventThresholds{config_.theta_match, config_.phi_inst});
  attach_events(series_, events_);
  io::write_json(paths_.timeseries(), io::to_json(series_));
  io::write_json(paths_.events(), io::events_to_json(events_));
  const double ms = millis_since(stage_start);
  timings_.record("similarity", std::nullopt, ms);
  timings_.record_stage_wall("similarity", ms);
  stages_run_.push_back("timeseries");
}

void Runner::filter() {
  const auto stage_start = Clock::now();
  load_networks();
  load_partitions();
  load_termstats();
  load_series();
  const std::size_t count = partitions_.size();
  std::vector<std::vector<ClusterMetrics>> per_snapshot_metrics(count);
  per_snapshot("reduction_filtering", count, [&](std::size_t t) {
    const auto clusters = partitions_[t].clusters();
    for (const auto& words : clusters) {
      ClusterMetrics m;
      m.size = words.size();
      m.centrality = cluster_centrality(networks_[t], words);
      m.density = density(networks_[t], words);
      per_snapshot_metrics[t].push_back(m);
    }
  });

  const auto start = Clock::now();
  std::vector<ClusterWords> all;
  for (std::size_t t = 0; t < count; ++t) {
    const auto clusters = partitions_[t].clusters();
    for (std::size_t c = 0; c < clusters.size(); ++c) all.push_back({{t, c}, clusters[c]});
  }
  const auto cf = cluster_frequency(all, termstats_);
  metrics_.clear();
  for (std::size_t t = 0; t < count; ++t) {
    json out = json::object();
    for (std::size_t c = 0; c < per_snapshot_metrics[t].size(); ++c) {
      auto m = per_snapshot_metrics[t][c];
      m.cluster_frequency = cf.at({t, c});
      metrics_[{t, c}] = m;
      out[std::to_string(c)] = io::to_json(m);
    }
    io::write_json(paths_.metrics(t), out);
  }
  filtered_ = filter_clusters(metrics_, series_,
                              FilterThresholds{config_.gamma, config_.theta_cf, config_.delta, config_.alpha});
  io::write_json(paths_.filtered(), io::to_json(*filtered_));
  timings_.record("reduction_filtering", std::nullopt, millis_since(start));
  timings_.record_stage_wall("reduction_filtering", millis_since(stage_start));
  stages_run_.push_back("filter");
}

void Runner::reduce() {
  const auto stage_start = Clock::now();
  load_networks();
  load_partitions();
  load_tfidf();
  if (!config_.reduce_all) load_filtered();
  const std::size_t count = partitions_.size();
  if (tfidf_.size() < count) throw Error("stage reduction_filtering: missing tfidf tables");
  std::set<ClusterKey> wanted;
  if (!config_.reduce_all) wanted.insert(filtered_->kept.begin(), filtered_->kept.end());
  fs::remove_all(paths_.root / "reduced");
  fs::create_directories(paths_.root / "reduced");  // present even when no cluster is kept
  std::vector<std::vector<ReducedTopic>> results(count);
  per_snapshot("reduction_filtering", count, [&](std::size_t t) {
    const auto clusters = partitions_[t].clusters();
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const ClusterKey key{t, c};
      if (!config_.reduce_all && !wanted.contains(key)) continue;
      auto topic = reduce_words(networks_[t].induced_subgraph(clusters[c]), config_.core_k, tfidf_[t], key);
      io::write_json(paths_.reduced(key), io::to_json(topic));
      results[t].push_back(std::move(topic));
    }
  });
  reduced_.clear();
  for (auto& list : results) {
    for (auto& topic : list) reduced_.emplace(topic.cluster, std::move(topic));
  }
  timings_.record_stage_wall("reduction_filtering", millis_since(stage_start));
  stages_run_.push_back("reduce");
}

void Runner::pmi() {
  const auto stage_start = Clock::now();
  if (config_.ngrams.empty()) throw Error("stage coherence: no n-gram source configured");
  load_reduced();

  std::vector<std::pair<ClusterKey, std::size_t>> candidates;
  for (const auto& [key, topic] : reduced_) candidates.emplace_back(key, topic.kept.size());
  std::size_t eligible = 0;
  for (const auto& c : candidates) eligible += c.second >= config_.pmi_min_size ? 1 : 0;
  const std::size_t n = config_.pmi_clusters == 0 ? eligible : std::min(config_.pmi_clusters, eligible);
  auto sample = select_random_clusters(candidates, n, config_.seed, config_.pmi_min_size);
  std::sort(sample.begin(), sample.end());

  std::vector<WordPairSet> pair_sets;
  std::vector<WordPair> pairs;
  std::vector<std::string> words;
  for (const auto& key : sample) {
    std::vector<std::string> top;
    for (const auto& w : top_n_words(reduced_.at(key).kept, config_.top_n)) top.push_back(w.word);
    auto set = make_word_pairs(key, std::move(top));
    pairs.insert(pairs.end(), set.pairs.begin(), set.pairs.end());
    words.insert(words.end(), set.words.begin(), set.words.end());
    pair_sets.push_back(std::move(set));
  }

  std::vector<fs::path> files;
  if (fs::is_directory(config_.ngrams)) {
    for (const auto& entry : fs::directory_iterator(config_.ngrams)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(config_.ngrams);
  }

  auto start = Clock::now();
  NgramScanOptions scan;
  scan.jobs = config_.effective_jobs();
  scan.min_year = config_.min_year;
  scan.max_year = config_.max_year;
  NgramCounts counts;
  try {
    counts = count_ngrams(files, pairs, words, scan);
  } catch (const std::exception& e) {
    throw Error(std::string("stage coherence failed: ") + e.what());
  }
  io::write_json(paths_.counts(), io::to_json(counts));
  timings_.record("coherence", std::nullopt, millis_since(start));

  json results = json::array();
  for (const auto& set : pair_sets) results.push_back(io::to_json(pmi_score(counts, set)));
  io::write_json(paths_.pmi(), results);
  timings_.record_stage_wall("coherence", millis_since(stage_start));
  stages_run_.push_back("pmi");
}

void Runner::run_all() {
  ingest();
  stats();
  network();
  cluster();
  similarity();
  timeseries();
  filter();
  reduce();
  if (!config_.ngrams.empty()) pmi();
  write_meta_and_timings();
}

void Runner::write_meta_and_timings() {
  json meta = fs::exists(paths_.meta()) ? io::read_json(paths_.meta()) : json::object();
  meta["version"] = kVersion;
  meta["config"] = config_.to_json();
  meta["seed"] = config_.seed;
  if (snapshot_count_) meta["snapshots"] = *snapshot_count_;
  if (!embedding_dims_.empty()) meta["embedding_dimensions"] = embedding_dims_;
  json stages = meta.contains("stages_run") ? meta["stages_run"] : json::array();
  for (const auto& s : stages_run_) {
    if (std::find(stages.begin(), stages.end(), s) == stages.end()) stages.push_back(s);
  }
  meta["stages_run"] = stages;
  io::write_json(paths_.meta(), meta);

  TimingLog log;
  if (fs::exists(paths_.timings())) log = TimingLog::from_json(io::read_json(paths_.timings()));
  log.merge(timings_);
  io::write_json(paths_.timings(), log.to_json());
}

void Runner::load_termstats() {
  if (!termstats_.empty()) return;
  const std::size_t count = snapshot_count();
  for (std::size_t t = 0; t < count; ++t) termstats_.push_back(io::term_stats_from_json(io::read_json(paths_.termstats(t))));
}

void Runner::load_tfidf() {
  if (!tfidf_.empty()) return;
  const std::size_t count = snapshot_count();
  for (std::size_t t = 0; t < count; ++t) tfidf_.push_back(io::tfidf_from_json(io::read_json(paths_.tfidf(t))));
}

void Runner::load_networks() {
  if (!networks_.empty()) return;
  const std::size_t count = snapshot_count();
  for (std::size_t t = 0; t < count; ++t) networks_.push_back(io::network_from_json(io::read_json(paths_.network(t))));
}

void Runner::load_partitions() {
  if (!partitions_.empty()) return;
  const std::size_t count = snapshot_count();
  for (std::size_t t = 0; t < count; ++t) {
    partitions_.push_back(io::partition_from_json(io::read_json(paths_.clusters(t))));
  }
}

void Runner::load_matrices() {
  if (!matrices_.empty()) return;
  const std::size_t count = snapshot_count();
  for (std::size_t t = 0; t + 1 < count; ++t) {
    matrices_.push_back(io::similarity_from_json(io::read_json(paths_.similarity(t))));
  }
}

void Runner::load_series() {
  if (!series_.empty()) return;
  series_ = io::time_series_from_json(io::read_json(paths_.timeseries()));
}

void Runner::load_filtered() {
  if (filtered_) return;
  filtered_ = io::filter_result_from_json(io::read_json(paths_.filtered()));
}

void Runner::load_reduced() {
  if (!reduced_.empty()) return;
  const fs::path dir = paths_.root / "reduced";
  if (!fs::exists(dir)) throw Error("missing artifact " + dir.string());
  for (const auto& snap : fs::directory_iterator(dir)) {
    if (!snap.is_directory()) continue;
    const std::size_t t = std::stoul(snap.path().filename().string());
    for (const auto& file : fs::directory_iterator(snap.path())) {
      if (file.path().extension() != ".json") continue;
      const ClusterKey key{t, std::stoul(file.path().stem().string())};
      reduced_.emplace(key, io::reduced_from_json(io::read_json(file.path()), key));
    }
  }
}

void run_pipeline(const RunConfig& config) {
  Runner runner(config);
  runner.run_all();
}

// ---------------------------------------------------------------- queries

KeywordTraceResult trace_keywords(const fs::path& run_dir, const std::vector<std::string>& keywords) {
  const RunPaths paths{run_dir};
  const auto report = io::read_json(paths.ingest());
  const std::size_t count = report.at("snapshots").size();
  KeywordTraceResult result;
  for (const auto& k : keywords) result[lower(k)];
  for (std::size_t t = 0; t < count; ++t) {
    const auto partition = io::partition_from_json(io::read_json(paths.clusters(t)));
    for (auto& [keyword, per_snapshot] : result) {
      auto it = partition.assignment.find(keyword);
      if (it != partition.assignment.end()) per_snapshot[t].push_back(it->second);
    }
  }
  return result;
}

TimingReport report_timings(const fs::path& run_dir) {
  const auto log = TimingLog::from_json(io::read_json(RunPaths{run_dir}.timings()));
  const auto walls = log.stage_wall();
  TimingReport report;
  for (const auto& r : log.records()) {
    if (report.stages.empty() || report.stages.back().stage != r.stage) {
      TimingReport::StageRow row;
      row.stage = r.stage;
      if (auto it = walls.find(r.stage); it != walls.end()) row.wall_millis = it->second;
      report.stages.push_back(row);
    }
    auto& row = report.stages.back();
    row.total_millis += r.wall_millis;
    row.per_unit[r.snapshot ? std::to_string(*r.snapshot) : "global"] += r.wall_millis;
  }
  return report;
}

std::string TimingReport::to_text() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %14s %14s\n", "stage", "sum_ms", "wall_ms");
  out << line;
  double sum = 0.0, wall = 0.0;
  for (const auto& row : stages) {
    char wall_text[32] = "-";
    if (row.wall_millis) std::snprintf(wall_text, sizeof wall_text, "%.3f", *row.wall_millis);
    std::snprintf(line, sizeof line, "%-22s %14.3f %14s\n", row.stage.c_str(), row.total_millis, wall_text);
    out << line;
    for (const auto& [unit, ms] : row.per_unit) {
      std::snprintf(line, sizeof line, "  %-20s %14.3f\n", unit.c_str(), ms);
      out << line;
    }
    sum += row.total_millis;
    wall += row.wall_millis.value_or(row.total_millis);
  }
  std::snprintf(line, sizeof line, "%-22s %14.3f %14.3f\n", "total", sum, wall);
  out << line;
  return out.str();
}

}  // namespace topicevo
