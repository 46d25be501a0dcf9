#pragma once

// Run configuration, stage orchestration, run artifacts, timings and the
// keyword trace query.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topicevo/coherence.hpp"
#include "topicevo/community.hpp"
#include "topicevo/corpus.hpp"
#include "topicevo/evolution.hpp"
#include "topicevo/filtering.hpp"
#include "topicevo/network.hpp"
#include "topicevo/reduction.hpp"

namespace topicevo {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  std::filesystem::path corpus;
  std::string corpus_format;  // "jsonl", "csv" or empty for the file extension
  std::filesystem::path embeddings;  // directory holding <t>.vec or <t>.txt
  std::filesystem::path ngrams;      // directory or single n-gram file; empty skips coherence
  std::filesystem::path out = "out";
  std::filesystem::path stop_words;  // optional, one word per line
  std::string snapshots = "years:5";

  std::uint64_t seed = 42;
  double phi = 0.5;
  std::size_t tau = 10;
  double theta_match = 0.1;
  double phi_inst = 0.2;
  double gamma = 0.1;
  double theta_cf = 0.1;
  std::optional<double> delta;
  std::size_t alpha = 3;
  std::uint32_t core_k = 2;
  double resolution = 1.0;
  std::size_t random_starts = 10;
  bool unweighted = false;
  bool parallel = false;
  std::size_t jobs = 0;  // 0 with parallel -> hardware concurrency
  bool skip_malformed = false;
  bool reduce_all = false;
  std::size_t top_n = 10;
  std::size_t pmi_clusters = 10;  // 0 scores every reduced cluster
  std::size_t pmi_min_size = 2;
  std::optional<int> min_year;
  std::optional<int> max_year;

  /// Sets one key ("phi", "theta-match", "theta_match", ...) from its text form.
  void set(const std::string& key, const std::string& value);
  void validate() const;
  std::size_t effective_jobs() const;
  /// Every effective parameter, defaults included.
  nlohmann::json to_json() const;

  static const std::vector<std::string>& keys();
};

/// Flat "key = value" file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

struct StageTiming {
  std::string stage;
  std::optional<std::size_t> snapshot;  // nullopt = "global"
  double wall_millis = 0.0;
};

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest",     "network",             "cluster",
                                                 "similarity", "reduction_filtering", "coherence"};
  return names;
}

/// Thread-safe collector of per-unit and per-stage timings.
class TimingLog {
 public:
  TimingLog() = default;
  TimingLog(const TimingLog& other);
  TimingLog& operator=(const TimingLog& other);

  void record(const std::string& stage, std::optional<std::size_t> snapshot, double millis);
  void record_stage_wall(const std::string& stage, double millis);
  std::vector<StageTiming> records() const;
  std::map<std::string, double> stage_wall() const;
  nlohmann::json to_json() const;
  static TimingLog from_json(const nlohmann::json& j);
  /// Replaces every record of the stages present in `other`.
  void merge(const TimingLog& other);

 private:
  mutable std::mutex mutex_;
  std::vector<StageTiming> records_;
  std::map<std::string, double> stage_wall_;
};

/// Layout of a run directory.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path meta() const { return root / "meta.json"; }
  std::filesystem::path timings() const { return root / "timings.json"; }
  std::filesystem::path ingest() const { return root / "ingest.json"; }
  std::filesystem::path snapshot_dir(std::size_t t) const { return root / std::to_string(t); }
  std::filesystem::path termstats(std::size_t t) const { return snapshot_dir(t) / "termstats.json"; }
  std::filesystem::path tfidf(std::size_t t) const { return snapshot_dir(t) / "tfidf.json"; }
  std::filesystem::path network(std::size_t t) const { return snapshot_dir(t) / "network.json"; }
  std::filesystem::path clusters(std::size_t t) const { return snapshot_dir(t) / "clusters.json"; }
  std::filesystem::path metrics(std::size_t t) const { return snapshot_dir(t) / "metrics.json"; }
  std::filesystem::path similarity(std::size_t t) const {
    return root / "sim" / (std::to_string(t) + "_" + std::to_string(t + 1) + ".json");
  }
  std::filesystem::path timeseries() const { return root / "timeseries.json"; }
  std::filesystem::path events() const { return root / "events.json"; }
  std::filesystem::path filtered() const { return root / "filtered.json"; }
  std::filesystem::path reduced(const ClusterKey& k) const {
    return root / "reduced" / std::to_string(k.snapshot) / (std::to_string(k.cluster) + ".json");
  }
  std::filesystem::path counts() const { return root / "counts.json"; }
  std::filesystem::path pmi() const { return root / "pmi.json"; }
};

/// Runs stages against one run directory. Each stage loads the artifacts it
/// needs from disk unless an earlier stage of the same Runner produced them,
/// and persists its own outputs, so stages can run standalone.
class Runner {
 public:
  explicit Runner(RunConfig config);

  const RunConfig& config() const { return config_; }
  const RunPaths& paths() const { return paths_; }
  TimingLog& timings() { return timings_; }

  void ingest();      // corpus -> snapshots, term stats (+ ingest report)
  void stats();       // term stats -> tfidf
  void network();     // embeddings -> networks
  void cluster();     // networks -> partitions
  void similarity();  // partitions -> similarity matrices
  void timeseries();  // matrices -> time series and event labels
  void filter();      // metrics + series -> filter decisions
  void reduce();      // kept clusters -> reduced, ranked word lists
  void pmi();         // reduced clusters + n-grams -> counts and PMI scores

  /// All stages in order; coherence runs only when an n-gram source is set.
  void run_all();

  /// Writes meta.json and merges this runner's timings into timings.json.
  void write_meta_and_timings();

  std::size_t snapshot_count();

 private:
  template <typename Fn>
  void per_snapshot(const std::string& stage, std::size_t count, Fn&& fn);

  void load_termstats();
  void load_tfidf();
  void load_networks();
  void load_partitions();
  void load_matrices();
  void load_series();
  void load_filtered();
  void load_reduced();

  RunConfig config_;
  RunPaths paths_;
  TimingLog timings_;
  std::vector<std::string> stages_run_;

  std::optional<std::size_t> snapshot_count_;
  nlohmann::json ingest_report_;
  std::vector<TermStats> termstats_;
  std::vector<TfidfTable> tfidf_;
  std::vector<SemanticNetwork> networks_;
  std::vector<std::size_t> embedding_dims_;
  std::vector<Partition> partitions_;
  std::vector<SimilarityMatrix> matrices_;
  std::vector<TopicTimeSeries> series_;
  std::vector<EventLabel> events_;
  std::optional<FilterResult> filtered_;
  std::map<ClusterKey, ClusterMetrics> metrics_;
  std::map<ClusterKey, ReducedTopic> reduced_;
};

/// Runs every stage and writes the full artifact tree.
void run_pipeline(const RunConfig& config);

/// keyword -> snapshot -> ids of clusters containing the keyword (case-insensitive).
using KeywordTraceResult = std::map<std::string, std::map<std::size_t, std::vector<std::size_t>>>;

KeywordTraceResult trace_keywords(const std::filesystem::path& run_dir, const std::vector<std::string>& keywords);

struct TimingReport {
  struct StageRow {
    std::string stage;
    double total_millis = 0.0;  // sum of unit records (sequential-equivalent)
    std::optional<double> wall_millis;
    std::map<std::string, double> per_unit;  // "global" or snapshot index
  };
  std::vector<StageRow> stages;

  std::string to_text() const;
};

TimingReport report_timings(const std::filesystem::path& run_dir);

}  // namespace topicevo
