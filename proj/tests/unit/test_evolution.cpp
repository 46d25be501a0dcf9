#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "topicevo/error.hpp"
#include "topicevo/evolution.hpp"

using namespace topicevo;

namespace {

// Disjoint clusters over a random subset of a small vocabulary.
Clustering random_clustering(synth::Rng& rng, std::size_t vocab, std::size_t max_clusters) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < vocab; ++i) {
    if (synth::uniform(rng, 0, 3) != 0) words.push_back(synth::word_name(i));
  }
  if (words.empty()) words.push_back(synth::word_name(0));
  std::shuffle(words.begin(), words.end(), rng);
  const std::size_t k = synth::uniform(rng, 1, std::min(max_clusters, words.size()));
  Clustering out(k);
  for (std::size_t i = 0; i < words.size(); ++i) out[i < k ? i : synth::uniform(rng, 0, k - 1)].push_back(words[i]);
  for (auto& c : out) c = make_word_set(c);
  return out;
}

}  // namespace

TEST_CASE("overlap similarity examples") {
  WordSet a = make_word_set({"a", "b", "c", "d"});
  WordSet b = make_word_set({"c", "d", "e", "f", "g", "h"});
  CHECK(cluster_similarity(a, b) == doctest::Approx(1.0 / 3.0));
  CHECK(cluster_similarity(a, a) == 1.0);
  CHECK(cluster_similarity(a, make_word_set({"x"})) == 0.0);
  CHECK(cluster_similarity(make_word_set({"a"}), a) == doctest::Approx(0.25));
  CHECK_THROWS_AS(cluster_similarity({}, a), Error);
}

TEST_CASE("similarity agrees with the set oracle and is symmetric") {
  synth::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    auto a = make_word_set(synth::random_word_set(rng, 40, 30));
    auto b = make_word_set(synth::random_word_set(rng, 40, 30));
    CHECK(cluster_similarity(a, b) == oracle::topic_similarity(a, b));
    CHECK(cluster_similarity(a, b) == cluster_similarity(b, a));
  }
}

TEST_CASE("similarity matrix keeps nonzero entries only") {
  Clustering from = {make_word_set({"a", "b"}), make_word_set({"c"})};
  Clustering to = {make_word_set({"a", "x"}), make_word_set({"y"})};
  auto m = similarity_matrix(from, to);
  CHECK(m.size() == 1);
  CHECK(m.at({0, 0}) == 0.5);
}

TEST_CASE("instability") {
  CHECK(instability(4, 6) == doctest::Approx(0.5));
  CHECK(instability(4, 2) == doctest::Approx(-0.5));
  CHECK(instability(3, 3) == 0.0);
  CHECK_THROWS_AS(instability(0, 3), Error);
}

TEST_CASE("event kinds round-trip through text") {
  for (auto k : {EventKind::Grow, EventKind::Survive, EventKind::Contract, EventKind::Split, EventKind::Merge,
                 EventKind::Die, EventKind::Birth}) {
    CHECK(parse_event_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_event_kind("Explode"), Error);
}

TEST_CASE("threshold validation") {
  CHECK_THROWS_AS((EventThresholds{-0.1, 0.1}.validate()), Error);
  CHECK_THROWS_AS((EventThresholds{1.1, 0.1}.validate()), Error);
  CHECK_THROWS_AS((EventThresholds{0.1, 0.0}.validate()), Error);
  CHECK_NOTHROW((EventThresholds{0.1, 0.2}.validate()));
}

TEST_CASE("hand-built transition covers every label") {
  Clustering from = {
      make_word_set({"a", "b", "c", "d"}),       // grows into 0
      make_word_set({"e", "f", "g", "h"}),       // splits into 1 and 2
      make_word_set({"i", "j"}),                 // dies
      make_word_set({"k", "l", "m", "n"}),       // contracts into 3
      make_word_set({"o", "p", "q"}),            // merges with 5 into 4
      make_word_set({"r", "s", "t"}),
  };
  Clustering to = {
      make_word_set({"a", "b", "c", "d", "u", "v"}),
      make_word_set({"e", "f"}),
      make_word_set({"g", "h", "w"}),
      make_word_set({"k", "l"}),
      make_word_set({"o", "p", "q", "r", "s", "t"}),
      make_word_set({"z"}),  // born
  };
  auto labels = label_transition(similarity_matrix(from, to), from, to, 0, {0.1, 0.2});
  auto events = oracle::flatten(labels);
  std::map<std::pair<std::size_t, std::size_t>, std::string> kinds;
  for (const auto& e : events) kinds[{e.snapshot, e.cluster}] += e.kind;
  CHECK(kinds[{0, 0}] == "Grow");
  CHECK(kinds[{0, 1}] == "Split");
  CHECK(kinds[{0, 2}] == "Die");
  CHECK(kinds[{0, 3}] == "Contract");
  CHECK(kinds[{0, 4}] == "Grow");
  CHECK(kinds[{0, 5}] == "Grow");
  CHECK(kinds[{1, 4}] == "Merge");
  CHECK(kinds[{1, 5}] == "Birth");
  CHECK(kinds.count({1, 0}) == 0);
  for (const auto& l : labels) {
    if (l.kind == EventKind::Split) {
      CHECK(l.partners == std::vector<std::size_t>{1, 2});
      REQUIRE(l.instability);
      CHECK(*l.instability == doctest::Approx(-0.5));  // both score 0.5; the tie goes to id 1
    }
    if (l.kind == EventKind::Merge) CHECK(l.partners == std::vector<std::size_t>{4, 5});
  }
  CHECK(events == oracle::evaluate_events(from, to, 0, 0.1, 0.2));
}

TEST_CASE("labels match the brute-force rules on random transitions") {
  synth::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto from = random_clustering(rng, 40, 10);
    auto to = random_clustering(rng, 40, 10);
    auto matrix = similarity_matrix(from, to);
    std::vector<double> thetas = {0.0, 0.1, 0.3};
    if (!matrix.empty()) {
      auto it = matrix.begin();
      std::advance(it, synth::uniform(rng, 0, matrix.size() - 1));
      thetas.push_back(it->second);  // a realised similarity as the threshold
    }
    for (double theta : thetas) {
      const double phi = synth::uniform_real(rng, 0.05, 0.6);
      auto got = oracle::flatten(label_transition(matrix, from, to, 3, {theta, phi}));
      CHECK(got == oracle::evaluate_events(from, to, 3, theta, phi));
    }
  }
}

TEST_CASE("every topic gets exactly one outgoing label") {
  synth::Rng rng(5);
  std::vector<Clustering> parts;
  for (int t = 0; t < 4; ++t) parts.push_back(random_clustering(rng, 30, 6));
  std::vector<SimilarityMatrix> ms;
  for (int t = 0; t + 1 < 4; ++t) ms.push_back(similarity_matrix(parts[t], parts[t + 1]));
  auto labels = label_events(ms, parts, {0.1, 0.2});
  std::map<ClusterKey, int> outgoing;
  for (const auto& l : labels) {
    if (l.outgoing()) {
      ++outgoing[l.topic];
      CHECK(l.topic.snapshot == l.transition);
    } else {
      CHECK(l.topic.snapshot == l.transition + 1);
    }
  }
  for (std::size_t t = 0; t + 1 < parts.size(); ++t) {
    for (std::size_t c = 0; c < parts[t].size(); ++c) CHECK(outgoing[{t, c}] == 1);
  }
  CHECK_THROWS_AS(label_events({ms[0]}, parts, {0.1, 0.2}), Error);
}

TEST_CASE("time series cover every cluster exactly once") {
  synth::Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t snapshots = synth::uniform(rng, 1, 5);
    std::vector<Clustering> parts;
    for (std::size_t t = 0; t < snapshots; ++t) parts.push_back(random_clustering(rng, 25, 6));
    std::vector<SimilarityMatrix> ms;
    for (std::size_t t = 0; t + 1 < snapshots; ++t) ms.push_back(similarity_matrix(parts[t], parts[t + 1]));
    auto series = build_time_series(parts, ms);
    std::set<ClusterKey> seen;
    std::set<std::string> ids;
    for (const auto& s : series) {
      CHECK(ids.insert(s.id).second);
      REQUIRE(!s.steps.empty());
      CHECK(s.step_similarities.size() == s.steps.size() - 1);
      for (std::size_t i = 0; i < s.steps.size(); ++i) {
        CHECK(seen.insert(s.steps[i]).second);
        if (i > 0) {
          CHECK(s.steps[i].snapshot == s.steps[i - 1].snapshot + 1);
          const auto& prev = parts[s.steps[i - 1].snapshot][s.steps[i - 1].cluster];
          const auto& next = parts[s.steps[i].snapshot][s.steps[i].cluster];
          CHECK(s.step_similarities[i - 1] == cluster_similarity(prev, next));
          CHECK(s.step_similarities[i - 1] > 0.0);
        }
      }
      if (s.merged_into) {
        // the absorbing series continues through the merge point
        bool found = false;
        for (const auto& other : series) {
          if (std::find(other.steps.begin(), other.steps.end(), *s.merged_into) != other.steps.end()) {
            found = std::find(other.absorbed.begin(), other.absorbed.end(), s.id) != other.absorbed.end();
          }
        }
        CHECK(found);
      }
    }
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    CHECK(seen.size() == total);
    auto index = series_index(series);
    CHECK(index.size() == total);
  }
}

TEST_CASE("greedy chaining follows the best successor") {
  std::vector<Clustering> parts = {
      {make_word_set({"a", "b", "c"}), make_word_set({"a2", "b2"})},
      {make_word_set({"a", "b", "c", "a2"})},
  };
  std::vector<SimilarityMatrix> ms = {similarity_matrix(parts[0], parts[1])};
  auto series = build_time_series(parts, ms);
  REQUIRE(series.size() == 2);
  CHECK(series[0].steps == std::vector<ClusterKey>{{0, 0}, {1, 0}});
  CHECK(series[0].absorbed == std::vector<std::string>{series[1].id});
  CHECK(series[1].steps == std::vector<ClusterKey>{{0, 1}});
  REQUIRE(series[1].merged_into);
  CHECK(*series[1].merged_into == ClusterKey{1, 0});
}

TEST_CASE("attach events aligns labels with steps") {
  std::vector<Clustering> parts = {{make_word_set({"a", "b"})}, {make_word_set({"a", "b", "c"})}};
  std::vector<SimilarityMatrix> ms = {similarity_matrix(parts[0], parts[1])};
  auto series = build_time_series(parts, ms);
  auto labels = label_events(ms, parts, {0.1, 0.2});
  attach_events(series, labels);
  REQUIRE(series.size() == 1);
  REQUIRE(series[0].step_events.size() == 2);
  REQUIRE(series[0].step_events[0].size() == 1);
  CHECK(series[0].step_events[0][0].kind == EventKind::Grow);
  CHECK(series[0].step_events[1].empty());
}
