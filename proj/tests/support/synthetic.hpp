#pragma once

// Seeded generators for graphs, word sets, embeddings with planted clusters,
// corpora and 5-gram count files.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "topicevo/corpus.hpp"
#include "topicevo/embedding.hpp"
#include "topicevo/network.hpp"

namespace synth {

using Rng = std::mt19937_64;

/// Letters-only word for an index, so the tokenizer keeps it ("wab", "wac", ...).
std::string word_name(std::size_t index, const std::string& prefix = "w");

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
double uniform_real(Rng& rng, double lo, double hi);

/// Non-empty random subset of {word_name(0..vocab-1)} with at most max_size words.
std::vector<std::string> random_word_set(Rng& rng, std::size_t vocab, std::size_t max_size);

/// Erdős–Rényi adjacency lists.
std::vector<std::vector<std::uint32_t>> random_graph(Rng& rng, std::size_t n, double p);
/// Network over nodes word_name(i); isolated nodes are kept.
topicevo::SemanticNetwork to_network(const std::vector<std::vector<std::uint32_t>>& adjacency,
                                     const std::vector<double>& weights = {});

struct Vocabulary {
  std::vector<std::vector<std::string>> groups;  // planted topics
  std::vector<std::string> background;           // words outside every topic
  std::vector<std::string> all() const;
};
Vocabulary make_vocabulary(std::size_t groups, std::size_t group_size, std::size_t background,
                           const std::string& prefix = "w");

struct PlantedOptions {
  std::size_t dimension = 50;
  double min_spread = 0.3;  // per-group noise scale around the group centre
  double max_spread = 0.9;
  double drift = 0.0;       // fraction of group words reassigned to another group
};

/// One model with group members clustered around random centres and
/// background words scattered.
topicevo::EmbeddingModel planted_embeddings(Rng& rng, const Vocabulary& vocab, const PlantedOptions& options,
                                            std::size_t snapshot = 0);

/// One model per snapshot; group centres persist, members drift between snapshots.
std::vector<topicevo::EmbeddingModel> drifting_embeddings(Rng& rng, const Vocabulary& vocab,
                                                          const PlantedOptions& options, std::size_t snapshots);

void write_word2vec(const std::filesystem::path& path, const topicevo::EmbeddingModel& model);

struct CorpusOptions {
  std::size_t documents = 60;
  std::size_t snapshots = 3;
  int first_year = 2000;
  int years_per_snapshot = 5;
  std::size_t words_per_document = 30;
  double topic_share = 0.8;  // fraction of a document's words drawn from its topic
};

/// Documents spread evenly across the snapshots' year windows.
std::vector<topicevo::Document> synthetic_documents(Rng& rng, const Vocabulary& vocab, const CorpusOptions& options);
void write_jsonl(const std::filesystem::path& path, const std::vector<topicevo::Document>& docs);

struct NgramOptions {
  std::size_t lines = 20000;
  double boost = 10.0;  // in-group pair co-occurrence relative to chance
  int first_year = 1990;
  int last_year = 2010;
};

/// Tab-separated 5-gram lines; planted groups co-occur about `boost` times chance.
std::vector<std::string> synthetic_ngrams(Rng& rng, const Vocabulary& vocab, const NgramOptions& options);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

/// Writes the three-snapshot, 60-document fixture (corpus.jsonl, emb/<t>.vec,
/// ngrams/part-*.txt) used by the end-to-end tests and the README walk-through.
void write_fixture(const std::filesystem::path& dir, std::uint64_t seed = 7);

}  // namespace synth
