#pragma once

// PMI topic coherence against external 5-gram counts.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topicevo/types.hpp"

namespace topicevo {

/// Unordered word pair stored with first < second.
using WordPair = std::pair<std::string, std::string>;

WordPair make_pair_key(const std::string& a, const std::string& b);

struct WordPairSet {
  ClusterKey cluster;
  std::vector<std::string> words;  // ranked top words
  std::vector<WordPair> pairs;     // all unordered distinct pairs
};

/// All C(n,2) unordered pairs of distinct words (duplicates in `words` are ignored).
WordPairSet make_word_pairs(ClusterKey cluster, std::vector<std::string> words);

struct NgramCounts {
  std::map<WordPair, std::uint64_t> pair_counts;  // every target pair present, zero if unseen
  std::map<std::string, std::uint64_t> word_counts;  // every target word present, zero if unseen
  std::uint64_t total_windows = 0;
  std::uint64_t malformed_lines = 0;

  /// Zero counts over the given targets.
  static NgramCounts for_targets(const std::vector<WordPair>& pairs, const std::vector<std::string>& words);

  bool same_targets(const NgramCounts& other) const;
  /// Field-wise addition; throws when the target sets differ.
  NgramCounts& operator+=(const NgramCounts& other);

  bool operator==(const NgramCounts&) const = default;
};

struct NgramScanOptions {
  std::optional<int> min_year;  // inclusive
  std::optional<int> max_year;  // inclusive
  std::size_t jobs = 1;
  /// Uncompressed files larger than this are split into byte ranges counted in parallel.
  std::uintmax_t chunk_bytes = 64u << 20;
};

/// Counts one stream of "<w1 .. w5>\t<year>\t<match_count>\t<volume_count>" lines.
/// Matching is case-insensitive and ignores token order and position.
NgramCounts count_ngram_stream(std::istream& in, const NgramCounts& targets, const NgramScanOptions& options = {});

/// Counts gzip-compressed or plain files, shard-parallel over files and byte ranges.
NgramCounts count_ngrams(const std::vector<std::filesystem::path>& paths, const std::vector<WordPair>& pairs,
                         const std::vector<std::string>& words, const NgramScanOptions& options = {});

NgramCounts aggregate_counts(const std::vector<NgramCounts>& shards);

/// Natural-log PMI with the scanned 5-gram total as the shared normaliser;
/// nullopt when the pair or either word never occurs.
std::optional<double> pmi(const NgramCounts& counts, const std::string& a, const std::string& b);

struct PmiResult {
  ClusterKey cluster;
  std::vector<std::string> words;
  std::vector<double> pmi_values;  // defined values, in pair order
  std::optional<double> score;     // median of pmi_values; nullopt when none are defined
  std::optional<double> mean;
  double coverage = 0.0;           // fraction of pairs that co-occur at least once
};

PmiResult pmi_score(const NgramCounts& counts, const WordPairSet& pairs);

/// Exact median (mean of the two middle values for even sizes); nullopt when empty.
std::optional<double> median(std::vector<double> values);

/// Uniform sample of n clusters with at least `min_size` words, without
/// replacement, deterministic in the seed. Returned in sample order.
std::vector<ClusterKey> select_random_clusters(const std::vector<std::pair<ClusterKey, std::size_t>>& clusters,
                                               std::size_t n, std::uint64_t seed, std::size_t min_size);

}  // namespace topicevo
