#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace topicevo {

struct SimilarityHit {
  std::string word;
  double score = 0.0;

  bool operator==(const SimilarityHit&) const = default;
};

/// Word vectors of one snapshot. Immutable after construction, so concurrent
/// queries are safe.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  /// Throws on empty vocabulary, ragged rows, zero-norm vectors or duplicate words.
  EmbeddingModel(std::vector<std::string> words, std::size_t dimension, std::vector<double> data,
                 std::size_t snapshot_index = 0);

  std::size_t snapshot_index() const noexcept { return snapshot_index_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return words_.size(); }

  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const double> vector(std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }
  double norm(std::size_t i) const { return norms_[i]; }

  bool contains(const std::string& word) const { return index_.contains(word); }
  /// Row index of `word`; throws for out-of-vocabulary words.
  std::size_t index_of(const std::string& word) const;

  /// Cosine between rows i and j, numerically identical to cosine_similarity().
  double cosine(std::size_t i, std::size_t j) const;

 private:
  std::size_t snapshot_index_ = 0;
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads the plain-text word-vector format: a "<count> <dimension>" header
/// followed by "<word> <f1> ... <fs>" rows.
EmbeddingModel load_embeddings(const std::filesystem::path& path, std::size_t snapshot_index = 0);
EmbeddingModel read_embeddings(std::istream& in, std::size_t snapshot_index = 0,
                               const std::string& source_name = "<stream>");

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// The τ most similar words to `word` (query excluded), by score descending,
/// ties broken lexicographically. Exact full scan.
std::vector<SimilarityHit> top_similar(const EmbeddingModel& model, const std::string& word,
                                       std::size_t tau);
std::vector<SimilarityHit> top_similar(const EmbeddingModel& model, std::size_t row,
                                       std::size_t tau);

}  // namespace topicevo
