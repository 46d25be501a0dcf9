#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "topicevo/corpus.hpp"
#include "topicevo/error.hpp"

using namespace topicevo;

namespace {

Document doc(const std::string& id, int year, std::vector<std::string> tokens) {
  return {id, year_start(year), std::move(tokens)};
}

LoadedCorpus from_text(const std::string& text, CorpusFormat format, LoadOptions options = {}) {
  std::istringstream in(text);
  return read_corpus(in, format, options, "fixture");
}

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
  CHECK(tokenize("The Court ruled.") == std::vector<std::string>{"the", "court", "ruled"});
  CHECK(tokenize("a 1990 x2 --- e-mail") == std::vector<std::string>{"x2", "mail"});
  TokenizerOptions stop;
  stop.stop_words = {"the"};
  CHECK(tokenize("The court", stop) == std::vector<std::string>{"court"});
}

TEST_CASE("timestamps accept epoch seconds and ISO dates") {
  CHECK(parse_timestamp("0") == 0);
  CHECK(parse_timestamp("1990-01-01") == year_start(1990));
  CHECK(parse_timestamp("1970-01-02T00:00:10Z") == 86410);
  CHECK_THROWS_AS(parse_timestamp("yesterday"), Error);
  CHECK_THROWS_AS(parse_timestamp("1990-13-01"), Error);
}

TEST_CASE("load_corpus normalises a JSON lines record") {
  auto loaded = from_text(R"({"id":"a","timestamp":"1990-01-01","text":"The Court ruled."})" "\n", CorpusFormat::JsonLines);
  REQUIRE(loaded.documents.size() == 1);
  CHECK(loaded.documents[0].id == "a");
  CHECK(loaded.documents[0].tokens == std::vector<std::string>{"the", "court", "ruled"});
}

TEST_CASE("empty text is dropped and counted") {
  auto loaded = from_text(R"({"id":"a","timestamp":0,"text":""})" "\n" R"({"id":"b","timestamp":0,"text":"ok go"})" "\n",
                          CorpusFormat::JsonLines);
  CHECK(loaded.documents.size() == 1);
  CHECK(loaded.report.dropped_empty == 1);
}

TEST_CASE("malformed record aborts with its line number unless skipped") {
  const std::string text = R"({"id":"a","timestamp":0,"text":"one two"})" "\n"
                           R"({"id":"b","timestamp":0,"text":"three four"})" "\n"
                           "{not json\n"
                           R"({"id":"d","timestamp":0,"text":"five six"})" "\n";
  try {
    from_text(text, CorpusFormat::JsonLines);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  LoadOptions skip;
  skip.skip_malformed = true;
  auto loaded = from_text(text, CorpusFormat::JsonLines, skip);
  CHECK(loaded.documents.size() == 3);
  CHECK(loaded.report.skipped_malformed == 1);
  CHECK(loaded.report.malformed.size() == 1);
}

TEST_CASE("CSV with quoted fields") {
  auto loaded = from_text("id,timestamp,text\n1,1990-05-01,\"Hello, world\"\n2,0,\"multi\nline \"\"quote\"\"\"\n",
                          CorpusFormat::Csv);
  REQUIRE(loaded.documents.size() == 2);
  CHECK(loaded.documents[0].tokens == std::vector<std::string>{"hello", "world"});
  CHECK(loaded.documents[1].tokens == std::vector<std::string>{"multi", "line", "quote"});
  CHECK_THROWS_AS(from_text("id,text\n1,x\n", CorpusFormat::Csv), Error);
}

TEST_CASE("format from tag and extension") {
  CHECK(parse_corpus_format("csv") == CorpusFormat::Csv);
  CHECK(parse_corpus_format("jsonl") == CorpusFormat::JsonLines);
  CHECK(corpus_format_for("x/data.csv") == CorpusFormat::Csv);
  CHECK(corpus_format_for("x/data.jsonl") == CorpusFormat::JsonLines);
  CHECK_THROWS_AS(parse_corpus_format("xml"), Error);
}

TEST_CASE("snapshot spec parsing") {
  auto s = SnapshotSpec::parse("years:5@1920");
  CHECK(s.width_years == 5);
  CHECK(s.start_year == 1920);
  CHECK(SnapshotSpec::parse(s.to_string()).to_string() == s.to_string());
  CHECK(SnapshotSpec::parse("bounds:0,10,20").boundaries == std::vector<Timestamp>{0, 10, 20});
  CHECK_THROWS_AS(SnapshotSpec::parse("bounds:10,5"), Error);
  CHECK_THROWS_AS(SnapshotSpec::parse("weeks:2"), Error);
}

TEST_CASE("half-open five-year windows") {
  std::vector<Document> docs = {doc("a", 1920, {"x"}), doc("b", 1924, {"x"}), doc("c", 1925, {"x"})};
  auto parts = partition_snapshots(docs, SnapshotSpec::fixed_years(5, 1920));
  REQUIRE(parts.snapshots.size() == 2);
  CHECK(parts.snapshots[0].documents.size() == 2);
  CHECK(parts.snapshots[1].documents.size() == 1);
  CHECK(parts.snapshots[1].documents[0].id == "c");
}

TEST_CASE("single document in a single interval") {
  auto parts = partition_snapshots({doc("a", 1990, {"x", "y"})}, SnapshotSpec::explicit_boundaries({year_start(1990), year_start(1991)}));
  REQUIRE(parts.snapshots.size() == 1);
  CHECK(parts.snapshots[0].total_tokens == 2);
}

TEST_CASE("uniform documents partition totally") {
  std::mt19937_64 rng(3);
  std::vector<Document> docs;
  for (int i = 0; i < 100; ++i) docs.push_back(doc(std::to_string(i), 1920 + static_cast<int>(rng() % 20), {"w"}));
  auto parts = partition_snapshots(docs, SnapshotSpec::fixed_years(5, 1920));
  CHECK(parts.snapshots.size() == 4);
  std::size_t total = 0;
  for (std::size_t t = 0; t < parts.snapshots.size(); ++t) {
    const auto& s = parts.snapshots[t];
    CHECK(s.index == t);
    for (const auto& d : s.documents) CHECK((d.timestamp >= s.start && d.timestamp < s.end));
    total += s.documents.size();
  }
  CHECK(total == 100);
}

TEST_CASE("out of range documents are dropped and counted") {
  std::vector<Document> docs = {doc("a", 1900, {"x"}), doc("b", 1990, {"x"})};
  auto parts = partition_snapshots(docs, SnapshotSpec::explicit_boundaries({year_start(1980), year_start(2000)}));
  CHECK(parts.report.out_of_range == 1);
  CHECK_THROWS_AS(partition_snapshots({doc("a", 1900, {"x"})},
                                      SnapshotSpec::explicit_boundaries({year_start(1980), year_start(2000)})),
                  Error);
  CHECK_THROWS_AS(partition_snapshots(docs, SnapshotSpec{}), Error);
}

TEST_CASE("term frequencies") {
  Snapshot s;
  s.documents = {doc("a", 2000, {"a", "b", "a"})};
  auto stats = term_frequencies(s);
  CHECK(stats.counts == std::map<std::string, std::uint64_t>{{"a", 2}, {"b", 1}});
  CHECK(stats.total_tokens == 3);

  s.documents = {doc("a", 2000, {"a"}), doc("b", 2000, {"a"})};
  CHECK(term_frequencies(s).counts == std::map<std::string, std::uint64_t>{{"a", 2}});
}

TEST_CASE("term frequencies match a hash-count pass") {
  std::mt19937_64 rng(11);
  Snapshot s;
  std::unordered_map<std::string, std::uint64_t> oracle;
  for (int d = 0; d < 10; ++d) {
    Document doc_;
    for (int i = 0; i < 100; ++i) {
      std::string w = "w" + std::to_string(rng() % 40);
      ++oracle[w];
      doc_.tokens.push_back(w);
    }
    s.documents.push_back(doc_);
  }
  auto stats = term_frequencies(s);
  CHECK(stats.total_tokens == 1000);
  CHECK(stats.counts.size() == oracle.size());
  for (const auto& [w, c] : oracle) CHECK(stats.counts.at(w) == c);
}

TEST_CASE("tfidf formula, means and degenerate cases") {
  std::vector<TermStats> stats(4);
  for (std::size_t t = 0; t < 4; ++t) {
    stats[t].snapshot_index = t;
    stats[t].counts["common"] = 10;
    stats[t].total_tokens = 100;
  }
  stats[0].counts["rare"] = 5;
  stats[0].counts["common"] = 5;
  stats[0].counts["other"] = 90;
  stats[1].counts["other"] = 90;
  auto tables = compute_tfidf(stats);
  CHECK(tables[2].values.at("common") == 0.0);
  CHECK(tables[0].values.at("rare") == doctest::Approx(0.05 * std::log(4.0)));
  const double mean0 = (0.0 + 0.05 * std::log(4.0) + 0.9 * std::log(2.0)) / 3.0;
  CHECK(tables[0].mean == doctest::Approx(mean0));
  CHECK_FALSE(tables[1].find("rare").has_value());

  auto single = compute_tfidf({stats[0]});
  for (const auto& [w, v] : single[0].values) CHECK(v == 0.0);

  TermStats empty;
  CHECK_THROWS_AS(compute_tfidf({empty}), Error);
}

TEST_CASE("tf sums to one and idf decreases with document frequency") {
  std::mt19937_64 rng(5);
  std::vector<TermStats> stats(5);
  for (std::size_t t = 0; t < 5; ++t) {
    stats[t].snapshot_index = t;
    for (int i = 0; i < 200; ++i) {
      std::string w = "w" + std::to_string(rng() % (10 + 5 * t));
      ++stats[t].counts[w];
      ++stats[t].total_tokens;
    }
    double sum = 0.0;
    for (const auto& [w, c] : stats[t].counts) sum += static_cast<double>(c) / stats[t].total_tokens;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  auto tables = compute_tfidf(stats);
  std::map<std::string, int> df;
  for (const auto& s : stats) {
    for (const auto& [w, c] : s.counts) ++df[w];
  }
  // idf = value / tf, compare two words from the last snapshot
  const auto& last = stats.back();
  for (const auto& [a, ca] : last.counts) {
    for (const auto& [b, cb] : last.counts) {
      if (df[a] < df[b]) {
        const double idf_a = tables.back().values.at(a) / (static_cast<double>(ca) / last.total_tokens);
        const double idf_b = tables.back().values.at(b) / (static_cast<double>(cb) / last.total_tokens);
        CHECK(idf_a > idf_b);
      }
    }
  }
}
