#include "topicevo/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "topicevo/error.hpp"

namespace topicevo {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double l2(const double* a, std::size_t n) { return std::sqrt(dot(a, a, n)); }

double clamp_cosine(double c) { return std::clamp(c, -1.0, 1.0); }

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

EmbeddingModel::EmbeddingModel(std::vector<std::string> words, std::size_t dimension,
                               std::vector<double> data, std::size_t snapshot_index)
    : snapshot_index_(snapshot_index),
      dimension_(dimension),
      words_(std::move(words)),
      data_(std::move(data)) {
  if (words_.empty()) throw Error("embedding vocabulary is empty");
  if (dimension_ == 0) throw Error("embedding dimension must be at least 1");
  if (data_.size() != words_.size() * dimension_) throw Error("embedding data size mismatch");
  norms_.resize(words_.size());
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    norms_[i] = l2(data_.data() + i * dimension_, dimension_);
    if (!(norms_[i] > 0.0) || !std::isfinite(norms_[i])) {
      throw Error("zero-norm or non-finite vector for word '" + words_[i] + "'");
    }
    if (!index_.emplace(words_[i], i).second) throw Error("duplicate word '" + words_[i] + "'");
  }
}

std::size_t EmbeddingModel::index_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) throw Error("word '" + word + "' is not in the embedding vocabulary");
  return it->second;
}

double EmbeddingModel::cosine(std::size_t i, std::size_t j) const {
  const double* a = data_.data() + i * dimension_;
  const double* b = data_.data() + j * dimension_;
  return clamp_cosine(dot(a, b, dimension_) / (norms_[i] * norms_[j]));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("cosine_similarity: dimension mismatch");
  const double na = l2(a.data(), a.size());
  const double nb = l2(b.data(), b.size());
  if (!(na > 0.0) || !(nb > 0.0)) throw Error("cosine_similarity: zero-norm vector");
  return clamp_cosine(dot(a.data(), b.data(), a.size()) / (na * nb));
}

EmbeddingModel read_embeddings(std::istream& in, std::size_t snapshot_index,
                               const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source_name, 1, "missing header");
  ++line_no;
  auto header = split_spaces(line);
  std::size_t count = 0, dim = 0;
  auto parse_size = [](std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_size(header[0], count) || !parse_size(header[1], dim) || dim == 0) {
    throw ParseError(source_name, 1, "header must be '<vocab_count> <dimension>'");
  }
  std::vector<std::string> words;
  std::vector<double> data;
  words.reserve(count);
  data.reserve(count * dim);
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw ParseError(source_name, line_no,
                       "dimension mismatch: expected " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1));
    }
    words.emplace_back(fields[0]);
    for (std::size_t k = 1; k <= dim; ++k) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), v);
      if (ec != std::errc{} || p != fields[k].data() + fields[k].size()) {
        throw ParseError(source_name, line_no, "bad number '" + std::string(fields[k]) + "'");
      }
      data.push_back(v);
    }
  }
  if (words.size() != count) {
    throw ParseError(source_name, line_no,
                     "header declares " + std::to_string(count) + " words, file has " +
                         std::to_string(words.size()));
  }
  try {
    return EmbeddingModel(std::move(words), dim, std::move(data), snapshot_index);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw Error(source_name + ": " + e.what());
  }
}

EmbeddingModel load_embeddings(const std::filesystem::path& path, std::size_t snapshot_index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read embedding file " + path.string());
  return read_embeddings(in, snapshot_index, path.string());
}

std::vector<SimilarityHit> top_similar(const EmbeddingModel& model, std::size_t row, std::size_t tau) {
  if (tau == 0) throw Error("top_similar: tau must be at least 1");
  const std::size_t n = model.size();
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != row) scored.emplace_back(model.cosine(row, j), j);
  }
  auto better = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return model.word(a.second) < model.word(b.second);
  };
  const std::size_t keep = std::min(tau, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    better);
  std::vector<SimilarityHit> hits;
  hits.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    hits.push_back({model.word(scored[k].second), scored[k].first});
  }
  return hits;
}

std::vector<SimilarityHit> top_similar(const EmbeddingModel& model, const std::string& word,
                                       std::size_t tau) {
  return top_similar(model, model.index_of(word), tau);
}

}  // namespace topicevo
