#pragma once

// Corpus ingestion: timestamped documents, snapshot partitioning, per-snapshot
// term statistics and per-snapshot TF-IDF.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace topicevo {

using Timestamp = std::int64_t;  // seconds since the Unix epoch (UTC)

struct Document {
  std::string id;
  Timestamp timestamp = 0;
  std::vector<std::string> tokens;
};

struct Snapshot {
  std::size_t index = 0;
  Timestamp start = 0;  // inclusive
  Timestamp end = 0;    // exclusive
  std::vector<Document> documents;
  std::size_t total_tokens = 0;
};

struct TermStats {
  std::size_t snapshot_index = 0;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;
};

struct TfidfTable {
  std::size_t snapshot_index = 0;
  std::map<std::string, double> values;
  double mean = 0.0;

  /// Value for `word`, or nullopt when the word does not occur in this snapshot.
  std::optional<double> find(const std::string& word) const;
};

enum class CorpusFormat { JsonLines, Csv };

CorpusFormat parse_corpus_format(std::string_view tag);

/// Guesses the format from the file extension (.csv → Csv, otherwise JsonLines).
CorpusFormat corpus_format_for(const std::filesystem::path& path);

struct TokenizerOptions {
  std::set<std::string> stop_words;
};

/// Lowercases, splits on non-alphanumeric characters, drops pure-number tokens,
/// tokens shorter than two characters and stop words.
std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options = {});

/// Accepts integer epoch seconds or an ISO-8601 date ("YYYY-MM-DD", optionally
/// followed by "THH:MM:SS" and a trailing "Z").
Timestamp parse_timestamp(std::string_view text);

/// Epoch seconds of January 1st, 00:00:00 UTC of `year`.
Timestamp year_start(int year);

struct LoadOptions {
  bool skip_malformed = false;
  TokenizerOptions tokenizer;
};

struct LoadReport {
  std::size_t records = 0;
  std::size_t dropped_empty = 0;
  std::size_t skipped_malformed = 0;
  std::vector<std::string> malformed;  // "line N: reason"
};

struct LoadedCorpus {
  std::vector<Document> documents;
  LoadReport report;
};

LoadedCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                         const LoadOptions& options = {});
LoadedCorpus read_corpus(std::istream& in, CorpusFormat format, const LoadOptions& options = {},
                         const std::string& source_name = "<stream>");

/// Either fixed-width windows in calendar years or an explicit boundary list.
/// With fixed widths, the first window starts on January 1st of `start_year`
/// (or of the earliest document's year) and windows are added until the latest
/// document is covered.
struct SnapshotSpec {
  int width_years = 0;
  std::optional<int> start_year;
  std::vector<Timestamp> boundaries;  // k+1 strictly increasing values → k windows

  static SnapshotSpec fixed_years(int width, std::optional<int> start = std::nullopt);
  static SnapshotSpec explicit_boundaries(std::vector<Timestamp> bounds);

  /// Parses "years:5", "years:5@1920" or "bounds:1920-01-01,1925-01-01,...".
  static SnapshotSpec parse(std::string_view text);
  std::string to_string() const;
};

struct PartitionReport {
  std::size_t out_of_range = 0;
  std::size_t empty_windows = 0;
};

struct PartitionResult {
  std::vector<Snapshot> snapshots;
  PartitionReport report;
};

/// Assigns each document to the half-open window containing its timestamp.
/// Windows that receive no document are dropped and the remaining snapshots
/// are indexed contiguously in time order.
PartitionResult partition_snapshots(std::vector<Document> documents, const SnapshotSpec& spec);

TermStats term_frequencies(const Snapshot& snapshot);

/// tf(w,t) = count(w,t) / total(t); idf(w) = ln(T / df(w)) where df counts the
/// snapshots containing w.
std::vector<TfidfTable> compute_tfidf(const std::vector<TermStats>& all_stats);

}  // namespace topicevo
