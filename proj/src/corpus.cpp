#include "topicevo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topicevo/error.hpp"

namespace topicevo {

namespace {

bool is_word_byte(unsigned char c) {
  // bytes >= 0x80 belong to UTF-8 sequences and are kept inside words
  return std::isalnum(c) || c >= 0x80;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Splits one CSV record starting at `pos`. Quoted fields may contain commas,
// doubled quotes and newlines. Returns false at end of input.
bool next_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no,
                     std::size_t& record_line, bool& malformed) {
  fields.clear();
  malformed = false;
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  record_line = line_no;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i == line.size()) {
      if (quoted) {
        std::string more;
        if (!std::getline(in, more)) {
          malformed = true;
          break;
        }
        ++line_no;
        field.push_back('\n');
        line = std::move(more);
        i = 0;
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
    ++i;
  }
  fields.push_back(std::move(field));
  return true;
}

struct RecordSink {
  const LoadOptions& options;
  const std::string& source;
  LoadedCorpus result;

  void malformed(std::size_t line, const std::string& why) {
    if (!options.skip_malformed) throw ParseError(source, line, why);
    ++result.report.skipped_malformed;
    result.report.malformed.push_back("line " + std::to_string(line) + ": " + why);
  }

  void accept(std::size_t line, std::string id, std::string_view timestamp, std::string_view text) {
    Timestamp ts = 0;
    try {
      ts = parse_timestamp(timestamp);
    } catch (const Error& e) {
      malformed(line, e.what());
      return;
    }
    ++result.report.records;
    auto tokens = tokenize(text, options.tokenizer);
    if (tokens.empty()) {
      ++result.report.dropped_empty;
      return;
    }
    result.documents.push_back(Document{std::move(id), ts, std::move(tokens)});
  }
};

void read_json_lines(std::istream& in, RecordSink& sink) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      sink.malformed(line_no, "invalid JSON");
      continue;
    }
    if (!record.is_object() || !record.contains("id") || !record.contains("timestamp") ||
        !record.contains("text")) {
      sink.malformed(line_no, "record needs id, timestamp and text");
      continue;
    }
    const auto& id = record["id"];
    const auto& ts = record["timestamp"];
    const auto& text = record["text"];
    if (!(id.is_string() || id.is_number_integer()) || !text.is_string() ||
        !(ts.is_string() || ts.is_number_integer())) {
      sink.malformed(line_no, "field has wrong type");
      continue;
    }
    std::string id_str = id.is_string() ? id.get<std::string>() : id.dump();
    std::string ts_str = ts.is_string() ? ts.get<std::string>() : ts.dump();
    sink.accept(line_no, std::move(id_str), ts_str, text.get_ref<const std::string&>());
  }
}

void read_csv(std::istream& in, RecordSink& sink) {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  std::size_t record_line = 0;
  bool malformed = false;
  if (!next_csv_record(in, fields, line_no, record_line, malformed)) {
    throw ParseError(sink.source, 1, "missing CSV header");
  }
  int id_col = -1, ts_col = -1, text_col = -1;
  for (std::size_t c = 0; c < fields.size(); ++c) {
    std::string name(trim(fields[c]));
    if (c == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    if (name == "id") id_col = static_cast<int>(c);
    if (name == "timestamp") ts_col = static_cast<int>(c);
    if (name == "text") text_col = static_cast<int>(c);
  }
  if (id_col < 0 || ts_col < 0 || text_col < 0) {
    throw ParseError(sink.source, 1, "CSV header must contain id,timestamp,text");
  }
  const std::size_t needed = static_cast<std::size_t>(std::max({id_col, ts_col, text_col})) + 1;
  while (next_csv_record(in, fields, line_no, record_line, malformed)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (malformed) {
      sink.malformed(record_line, "unterminated quoted field");
      continue;
    }
    if (fields.size() < needed) {
      sink.malformed(record_line, "expected at least " + std::to_string(needed) + " columns");
      continue;
    }
    sink.accept(record_line, std::move(fields[id_col]), trim(fields[ts_col]), fields[text_col]);
  }
}

}  // namespace

std::optional<double> TfidfTable::find(const std::string& word) const {
  auto it = values.find(word);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

CorpusFormat parse_corpus_format(std::string_view tag) {
  if (tag == "jsonl" || tag == "ndjson" || tag == "json") return CorpusFormat::JsonLines;
  if (tag == "csv") return CorpusFormat::Csv;
  throw Error("unknown corpus format '" + std::string(tag) + "' (expected jsonl or csv)");
}

CorpusFormat corpus_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CorpusFormat::Csv : CorpusFormat::JsonLines;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !all_digits(current) && !options.stop_words.contains(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Timestamp year_start(int year) {
  using namespace std::chrono;
  const sys_days day{std::chrono::year{year} / January / 1};
  return duration_cast<seconds>(day.time_since_epoch()).count();
}

Timestamp parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error("empty timestamp");
  if (text.front() == '-' ? all_digits(text.substr(1)) : all_digits(text)) {
    if (auto v = parse_int<Timestamp>(text)) return *v;
    throw Error("timestamp out of range: " + std::string(text));
  }
  // YYYY-MM-DD[THH:MM[:SS]][Z]
  auto fail = [&]() -> Timestamp { throw Error("unparseable timestamp: " + std::string(text)); };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return fail();
  auto y = parse_int<int>(text.substr(0, 4));
  auto mo = parse_int<unsigned>(text.substr(5, 2));
  auto d = parse_int<unsigned>(text.substr(8, 2));
  if (!y || !mo || !d) return fail();
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{*y}, month{*mo}, day{*d}};
  if (!ymd.ok()) return fail();
  Timestamp seconds_of_day = 0;
  std::string_view rest = text.substr(10);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  if (!rest.empty()) {
    if (rest.front() != 'T' && rest.front() != ' ') return fail();
    rest.remove_prefix(1);
    if (rest.size() != 5 && rest.size() != 8) return fail();
    auto hh = parse_int<int>(rest.substr(0, 2));
    auto mm = parse_int<int>(rest.substr(3, 2));
    std::optional<int> ss = 0;
    if (rest[2] != ':') return fail();
    if (rest.size() == 8) {
      if (rest[5] != ':') return fail();
      ss = parse_int<int>(rest.substr(6, 2));
    }
    if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 60) return fail();
    seconds_of_day = *hh * 3600 + *mm * 60 + *ss;
  }
  return duration_cast<seconds>(sys_days{ymd}.time_since_epoch()).count() + seconds_of_day;
}

LoadedCorpus read_corpus(std::istream& in, CorpusFormat format, const LoadOptions& options,
                         const std::string& source_name) {
  RecordSink sink{options, source_name, {}};
  if (format == CorpusFormat::JsonLines) {
    read_json_lines(in, sink);
  } else {
    read_csv(in, sink);
  }
  return std::move(sink.result);
}

LoadedCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                         const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read corpus file " + path.string());
  return read_corpus(in, format, options, path.string());
}

SnapshotSpec SnapshotSpec::fixed_years(int width, std::optional<int> start) {
  if (width <= 0) throw Error("snapshot width must be a positive number of years");
  SnapshotSpec spec;
  spec.width_years = width;
  spec.start_year = start;
  return spec;
}

SnapshotSpec SnapshotSpec::explicit_boundaries(std::vector<Timestamp> bounds) {
  if (bounds.size() < 2) throw Error("snapshot boundary list needs at least two values");
  for (std::size_t i = 1; i < bounds.size(); ++i) {
    if (bounds[i] <= bounds[i - 1]) throw Error("snapshot boundaries must be strictly increasing");
  }
  SnapshotSpec spec;
  spec.boundaries = std::move(bounds);
  return spec;
}

SnapshotSpec SnapshotSpec::parse(std::string_view text) {
  text = trim(text);
  if (text.rfind("years:", 0) == 0) {
    std::string_view body = text.substr(6);
    std::optional<int> start;
    if (auto at = body.find('@'); at != std::string_view::npos) {
      start = parse_int<int>(body.substr(at + 1));
      if (!start) throw Error("bad start year in snapshot spec: " + std::string(text));
      body = body.substr(0, at);
    }
    auto width = parse_int<int>(body);
    if (!width) throw Error("bad width in snapshot spec: " + std::string(text));
    return fixed_years(*width, start);
  }
  if (text.rfind("bounds:", 0) == 0) {
    std::vector<Timestamp> bounds;
    std::string_view body = text.substr(7);
    while (!body.empty()) {
      auto comma = body.find(',');
      bounds.push_back(parse_timestamp(body.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      body = body.substr(comma + 1);
    }
    return explicit_boundaries(std::move(bounds));
  }
  throw Error("snapshot spec must look like years:5, years:5@1920 or bounds:<t0>,<t1>,...");
}

std::string SnapshotSpec::to_string() const {
  if (width_years > 0) {
    std::string s = "years:" + std::to_string(width_years);
    if (start_year) s += "@" + std::to_string(*start_year);
    return s;
  }
  std::string s = "bounds:";
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(boundaries[i]);
  }
  return s;
}

PartitionResult partition_snapshots(std::vector<Document> documents, const SnapshotSpec& spec) {
  std::vector<Timestamp> bounds = spec.boundaries;
  if (spec.width_years > 0) {
    if (documents.empty()) throw Error("no documents to partition");
    auto [lo, hi] = std::minmax_element(documents.begin(), documents.end(),
                                        [](const Document& a, const Document& b) {
                                          return a.timestamp < b.timestamp;
                                        });
    using namespace std::chrono;
    auto year_of = [](Timestamp ts) {
      const sys_days day = floor<days>(sys_seconds{seconds{ts}});
      return static_cast<int>(year_month_day{day}.year());
    };
    int year = spec.start_year.value_or(year_of(lo->timestamp));
    bounds.push_back(year_start(year));
    while (bounds.back() <= hi->timestamp) {
      year += spec.width_years;
      bounds.push_back(year_start(year));
    }
    if (bounds.size() < 2) bounds.push_back(year_start(year + spec.width_years));
  } else if (bounds.size() < 2) {
    throw Error("empty snapshot specification");
  }

  const std::size_t windows = bounds.size() - 1;
  std::vector<std::vector<Document>> buckets(windows);
  PartitionResult result;
  for (auto& doc : documents) {
    auto it = std::upper_bound(bounds.begin(), bounds.end(), doc.timestamp);
    if (it == bounds.begin() || it == bounds.end()) {
      ++result.report.out_of_range;
      continue;
    }
    buckets[static_cast<std::size_t>(it - bounds.begin()) - 1].push_back(std::move(doc));
  }
  for (std::size_t w = 0; w < windows; ++w) {
    if (buckets[w].empty()) {
      ++result.report.empty_windows;
      continue;
    }
    Snapshot snap;
    snap.index = result.snapshots.size();
    snap.start = bounds[w];
    snap.end = bounds[w + 1];
    for (const auto& d : buckets[w]) snap.total_tokens += d.tokens.size();
    snap.documents = std::move(buckets[w]);
    result.snapshots.push_back(std::move(snap));
  }
  if (result.snapshots.empty()) throw Error("all documents fall outside the snapshot range");
  return result;
}

TermStats term_frequencies(const Snapshot& snapshot) {
  if (snapshot.documents.empty()) throw Error("snapshot " + std::to_string(snapshot.index) + " is empty");
  TermStats stats;
  stats.snapshot_index = snapshot.index;
  for (const auto& doc : snapshot.documents) {
    for (const auto& tok : doc.tokens) ++stats.counts[tok];
    stats.total_tokens += doc.tokens.size();
  }
  return stats;
}

std::vector<TfidfTable> compute_tfidf(const std::vector<TermStats>& all_stats) {
  if (all_stats.empty()) throw Error("compute_tfidf needs at least one snapshot");
  std::map<std::string, std::size_t> df;
  for (const auto& stats : all_stats) {
    if (stats.total_tokens == 0) {
      throw Error("snapshot " + std::to_string(stats.snapshot_index) + " has no tokens");
    }
    for (const auto& [word, count] : stats.counts) {
      if (count > 0) ++df[word];
    }
  }
  const double snapshots = static_cast<double>(all_stats.size());
  std::vector<TfidfTable> tables;
  tables.reserve(all_stats.size());
  for (const auto& stats : all_stats) {
    TfidfTable table;
    table.snapshot_index = stats.snapshot_index;
    const double total = static_cast<double>(stats.total_tokens);
    double sum = 0.0;
    for (const auto& [word, count] : stats.counts) {
      if (count == 0) continue;
      const double tf = static_cast<double>(count) / total;
      const double idf = std::log(snapshots / static_cast<double>(df.at(word)));
      const double value = tf * idf;
      table.values.emplace(word, value);
      sum += value;
    }
    table.mean = table.values.empty() ? 0.0 : sum / static_cast<double>(table.values.size());
    tables.push_back(std::move(table));
  }
  return tables;
}

}  // namespace topicevo
