#include "topicevo/coherence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <unordered_map>

#include <zlib.h>

#include "topicevo/error.hpp"
#include "topicevo/parallel.hpp"

namespace topicevo {

WordPair make_pair_key(const std::string& a, const std::string& b) {
  return a < b ? WordPair{a, b} : WordPair{b, a};
}

WordPairSet make_word_pairs(ClusterKey cluster, std::vector<std::string> words) {
  WordPairSet set;
  set.cluster = cluster;
  for (auto& w : words) {
    if (std::find(set.words.begin(), set.words.end(), w) == set.words.end()) set.words.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < set.words.size(); ++i) {
    for (std::size_t j = i + 1; j < set.words.size(); ++j) {
      set.pairs.push_back(make_pair_key(set.words[i], set.words[j]));
    }
  }
  return set;
}

NgramCounts NgramCounts::for_targets(const std::vector<WordPair>& pairs, const std::vector<std::string>& words) {
  NgramCounts counts;
  for (const auto& w : words) counts.word_counts.emplace(w, 0);
  for (const auto& p : pairs) {
    if (p.first == p.second) throw Error("self-pair '" + p.first + "' is not a valid target");
    auto key = make_pair_key(p.first, p.second);
    counts.word_counts.emplace(key.first, 0);
    counts.word_counts.emplace(key.second, 0);
    counts.pair_counts.emplace(std::move(key), 0);
  }
  return counts;
}

bool NgramCounts::same_targets(const NgramCounts& other) const {
  auto same_keys = [](const auto& x, const auto& y) {
    return x.size() == y.size() &&
           std::equal(x.begin(), x.end(), y.begin(), [](const auto& a, const auto& b) { return a.first == b.first; });
  };
  return same_keys(pair_counts, other.pair_counts) && same_keys(word_counts, other.word_counts);
}

NgramCounts& NgramCounts::operator+=(const NgramCounts& other) {
  if (!same_targets(other)) throw Error("cannot merge n-gram counts over different target sets");
  auto a = pair_counts.begin();
  for (auto b = other.pair_counts.begin(); b != other.pair_counts.end(); ++a, ++b) a->second += b->second;
  auto c = word_counts.begin();
  for (auto d = other.word_counts.begin(); d != other.word_counts.end(); ++c, ++d) c->second += d->second;
  total_windows += other.total_windows;
  malformed_lines += other.malformed_lines;
  return *this;
}

namespace {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

// Accumulates counts for one shard; flat arrays indexed like the target maps.
class ShardCounter {
 public:
  ShardCounter(const NgramCounts& targets, const NgramScanOptions& options) : options_(options) {
    std::size_t w = 0;
    for (const auto& [word, _] : targets.word_counts) word_index_.emplace(word, w++);
    word_counts_.assign(w, 0);
    std::size_t p = 0;
    for (const auto& [pair, _] : targets.pair_counts) {
      pair_index_.emplace(key(word_index_.at(pair.first), word_index_.at(pair.second)), p++);
    }
    pair_counts_.assign(p, 0);
  }

  void feed(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return;
    std::string_view fields[4];
    std::size_t n = 0;
    for (;;) {
      const auto tab = line.find('\t');
      if (n == 4) {
        ++malformed_;
        return;
      }
      fields[n++] = line.substr(0, tab);
      if (tab == std::string_view::npos) break;
      line.remove_prefix(tab + 1);
    }
    int year = 0;
    std::uint64_t match = 0, volumes = 0;
    if (n != 4 || !parse_int(fields[1], year) || !parse_int(fields[2], match) || !parse_int(fields[3], volumes)) {
      ++malformed_;
      return;
    }
    std::size_t present[5];
    std::size_t present_count = 0;
    std::size_t tokens = 0;
    std::string_view gram = fields[0];
    while (!gram.empty()) {
      auto space = gram.find(' ');
      std::string_view tok = gram.substr(0, space);
      gram.remove_prefix(space == std::string_view::npos ? gram.size() : space + 1);
      if (tok.empty()) continue;
      if (++tokens > 5) break;
      lowered_.assign(tok);
      for (auto& ch : lowered_) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      auto it = word_index_.find(lowered_);
      if (it != word_index_.end() &&
          std::find(present, present + present_count, it->second) == present + present_count) {
        present[present_count++] = it->second;
      }
    }
    if (tokens != 5) {
      ++malformed_;
      return;
    }
    if (options_.min_year && year < *options_.min_year) return;
    if (options_.max_year && year > *options_.max_year) return;
    total_ += match;
    for (std::size_t a = 0; a < present_count; ++a) {
      word_counts_[present[a]] += match;
      for (std::size_t b = a + 1; b < present_count; ++b) {
        auto it = pair_index_.find(key(present[a], present[b]));
        if (it != pair_index_.end()) pair_counts_[it->second] += match;
      }
    }
  }

  NgramCounts finish(const NgramCounts& targets) const {
    NgramCounts out = targets;
    std::size_t w = 0;
    for (auto& [word, count] : out.word_counts) count = word_counts_[w++];
    std::size_t p = 0;
    for (auto& [pair, count] : out.pair_counts) count = pair_counts_[p++];
    out.total_windows = total_;
    out.malformed_lines = malformed_;
    return out;
  }

 private:
  static std::uint64_t key(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }

  const NgramScanOptions& options_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::unordered_map<std::uint64_t, std::size_t> pair_index_;
  std::vector<std::uint64_t> word_counts_;
  std::vector<std::uint64_t> pair_counts_;
  std::uint64_t total_ = 0;
  std::uint64_t malformed_ = 0;
  std::string lowered_;
};

bool is_gzip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  return in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

struct Shard {
  std::filesystem::path path;
  bool gzip = false;
  std::uintmax_t begin = 0;
  std::uintmax_t end = 0;  // exclusive; lines starting before `end` belong to this shard
};

void count_gzip(const Shard& shard, ShardCounter& counter) {
  gzFile file = gzopen(shard.path.string().c_str(), "rb");
  if (!file) throw Error("cannot open n-gram file " + shard.path.string());
  std::string line;
  char buffer[1 << 16];
  for (;;) {
    char* got = gzgets(file, buffer, sizeof buffer);
    if (!got) break;
    std::string_view piece(buffer);
    line.append(piece);
    if (!piece.empty() && piece.back() == '\n') {
      line.pop_back();
      counter.feed(line);
      line.clear();
    }
  }
  int err = 0;
  const char* msg = gzerror(file, &err);
  const bool failed = err != Z_OK && err != Z_STREAM_END;
  const std::string why = failed ? msg : "";
  gzclose(file);
  if (failed) throw Error("error reading " + shard.path.string() + ": " + why);
  if (!line.empty()) counter.feed(line);
}

void count_plain(const Shard& shard, ShardCounter& counter) {
  std::ifstream in(shard.path, std::ios::binary);
  if (!in) throw Error("cannot open n-gram file " + shard.path.string());
  std::uintmax_t pos = shard.begin;
  std::string line;
  if (shard.begin > 0) {
    // the line containing byte begin-1 belongs to the previous shard
    in.seekg(static_cast<std::streamoff>(shard.begin - 1));
    std::getline(in, line);
    pos = shard.begin - 1 + line.size() + 1;
  }
  while (pos < shard.end && std::getline(in, line)) {
    pos += line.size() + 1;
    counter.feed(line);
  }
}

}  // namespace

NgramCounts count_ngram_stream(std::istream& in, const NgramCounts& targets, const NgramScanOptions& options) {
  ShardCounter counter(targets, options);
  std::string line;
  while (std::getline(in, line)) counter.feed(line);
  return counter.finish(targets);
}

NgramCounts count_ngrams(const std::vector<std::filesystem::path>& paths, const std::vector<WordPair>& pairs,
                         const std::vector<std::string>& words, const NgramScanOptions& options) {
  const NgramCounts targets = NgramCounts::for_targets(pairs, words);
  std::vector<Shard> shards;
  for (const auto& path : paths) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw Error("cannot read n-gram file " + path.string());
    const bool gz = is_gzip(path);
    if (gz || options.chunk_bytes == 0 || size <= options.chunk_bytes) {
      shards.push_back({path, gz, 0, size});
      continue;
    }
    for (std::uintmax_t begin = 0; begin < size; begin += options.chunk_bytes) {
      shards.push_back({path, false, begin, std::min(size, begin + options.chunk_bytes)});
    }
  }
  std::vector<NgramCounts> results(shards.size());
  parallel_for(shards.size(), options.jobs, [&](std::size_t s) {
    ShardCounter counter(targets, options);
    if (shards[s].gzip) {
      count_gzip(shards[s], counter);
    } else {
      count_plain(shards[s], counter);
    }
    results[s] = counter.finish(targets);
  });
  if (results.empty()) return targets;
  return aggregate_counts(results);
}

NgramCounts aggregate_counts(const std::vector<NgramCounts>& shards) {
  if (shards.empty()) throw Error("aggregate_counts: no shards");
  NgramCounts total = shards.front();
  for (std::size_t s = 1; s < shards.size(); ++s) total += shards[s];
  return total;
}

std::optional<double> pmi(const NgramCounts& counts, const std::string& a, const std::string& b) {
  if (counts.total_windows == 0) throw Error("pmi: no n-grams were scanned");
  auto pair = counts.pair_counts.find(make_pair_key(a, b));
  auto wa = counts.word_counts.find(a);
  auto wb = counts.word_counts.find(b);
  if (pair == counts.pair_counts.end() || wa == counts.word_counts.end() || wb == counts.word_counts.end()) {
    return std::nullopt;
  }
  if (pair->second == 0 || wa->second == 0 || wb->second == 0) return std::nullopt;
  const double total = static_cast<double>(counts.total_windows);
  const double p_ab = static_cast<double>(pair->second) / total;
  const double p_a = static_cast<double>(wa->second) / total;
  const double p_b = static_cast<double>(wb->second) / total;
  return std::log(p_ab / (p_a * p_b));
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

PmiResult pmi_score(const NgramCounts& counts, const WordPairSet& pairs) {
  PmiResult result;
  result.cluster = pairs.cluster;
  result.words = pairs.words;
  std::size_t cooccurring = 0;
  for (const auto& [a, b] : pairs.pairs) {
    auto it = counts.pair_counts.find(make_pair_key(a, b));
    if (it != counts.pair_counts.end() && it->second > 0) ++cooccurring;
    if (counts.total_windows == 0) continue;
    if (auto v = pmi(counts, a, b)) result.pmi_values.push_back(*v);
  }
  result.coverage = pairs.pairs.empty() ? 0.0
                                        : static_cast<double>(cooccurring) / static_cast<double>(pairs.pairs.size());
  result.score = median(result.pmi_values);
  if (!result.pmi_values.empty()) {
    double sum = 0.0;
    for (double v : result.pmi_values) sum += v;
    result.mean = sum / static_cast<double>(result.pmi_values.size());
  }
  return result;
}

std::vector<ClusterKey> select_random_clusters(const std::vector<std::pair<ClusterKey, std::size_t>>& clusters,
                                               std::size_t n, std::uint64_t seed, std::size_t min_size) {
  std::vector<ClusterKey> eligible;
  for (const auto& [key, size] : clusters) {
    if (size >= min_size) eligible.push_back(key);
  }
  std::sort(eligible.begin(), eligible.end());
  if (eligible.size() < n) {
    throw Error("only " + std::to_string(eligible.size()) + " clusters have at least " + std::to_string(min_size) +
                " words; " + std::to_string(n) + " requested");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(n);
  return eligible;
}

}  // namespace topicevo
