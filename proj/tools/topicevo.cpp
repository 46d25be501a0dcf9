#include <CLI11.hpp>

#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "topicevo/error.hpp"
#include "topicevo/pipeline.hpp"

namespace {

const std::vector<std::string> kFlagKeys = {"unweighted", "parallel", "skip_malformed", "reduce_all"};

std::string dashed(std::string key) {
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

const std::map<std::string, std::string> kHelp = {
    {"corpus", "Corpus file (JSON lines or CSV with id, timestamp, text)"},
    {"corpus_format", "jsonl or csv; default from the file extension"},
    {"embeddings", "Directory holding <t>.vec or <t>.txt per snapshot"},
    {"ngrams", "5-gram count file or directory (.gz accepted); enables coherence"},
    {"out", "Run directory (default out)"},
    {"stop_words", "Optional stop-word list, one word per line"},
    {"snapshots", "years:N, years:N@YEAR or bounds:T0,T1,... (default years:5)"},
    {"seed", "Random seed for clustering and sampling (default 42)"},
    {"phi", "Edge threshold on cosine similarity, [0, 1) (default 0.5)"},
    {"tau", "Nearest neighbours considered per word (default 10)"},
    {"theta_match", "Topic match threshold, [0, 1] (default 0.1)"},
    {"phi_inst", "Instability threshold for Grow/Contract (default 0.2)"},
    {"gamma", "Centrality threshold, [0, 0.9] (default 0.1)"},
    {"theta_cf", "Cluster frequency threshold, [0, 0.9] (default 0.1)"},
    {"delta", "Optional density threshold, [0, 0.9]; none disables"},
    {"alpha", "Minimum cluster size; clusters need more words (default 3)"},
    {"core_k", "k-core threshold for word reduction (default 2)"},
    {"resolution", "Modularity resolution (default 1)"},
    {"random_starts", "Louvain passes per snapshot; best modularity wins (default 10)"},
    {"unweighted", "Cluster with unit edge weights"},
    {"parallel", "Run snapshots and shards in parallel"},
    {"jobs", "Worker threads; 0 with --parallel uses every core"},
    {"skip_malformed", "Skip malformed corpus records instead of failing"},
    {"reduce_all", "Reduce every cluster, not only kept ones"},
    {"top_n", "Top-ranked words per topic used for PMI (default 10)"},
    {"pmi_clusters", "Topics sampled for PMI; 0 scores all (default 10)"},
    {"pmi_min_size", "Minimum reduced size for PMI sampling (default 2)"},
    {"min_year", "Ignore n-grams before this year"},
    {"max_year", "Ignore n-grams after this year"},
};

bool is_flag(const std::string& key) {
  for (const auto& f : kFlagKeys) {
    if (f == key) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  using topicevo::Runner;
  using topicevo::RunConfig;

  CLI::App app{"Track topic evolution across corpus snapshots"};
  app.require_subcommand(1);
  app.set_version_flag("--version", topicevo::kVersion);

  std::string config_file;
  app.add_option("--config", config_file, "Flat key = value config file; flags override it")
      ->check(CLI::ExistingFile);

  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : RunConfig::keys()) {
    const std::string name = "--" + dashed(key);
    if (is_flag(key)) {
      options[key] = app.add_flag(name)->description(kHelp.at(key));
    } else {
      options[key] = app.add_option(name, values[key], kHelp.at(key));
    }
  }

  struct Command {
    const char* name;
    const char* help;
    std::function<void(Runner&)> run;
  };
  const std::vector<Command> stages = {
      {"ingest", "Load the corpus, cut snapshots and count terms", [](Runner& r) { r.ingest(); }},
      {"stats", "Compute per-snapshot TF-IDF tables", [](Runner& r) { r.stats(); }},
      {"network", "Build semantic networks from embeddings", [](Runner& r) { r.network(); }},
      {"cluster", "Detect topics with Louvain", [](Runner& r) { r.cluster(); }},
      {"similarity", "Compare topics of consecutive snapshots", [](Runner& r) { r.similarity(); }},
      {"timeseries", "Chain topics into time series and label events", [](Runner& r) { r.timeseries(); }},
      {"events", "Same as timeseries: label evolution events", [](Runner& r) { r.timeseries(); }},
      {"filter", "Compute cluster metrics and filter topics", [](Runner& r) { r.filter(); }},
      {"reduce", "Reduce and rank topic words", [](Runner& r) { r.reduce(); }},
      {"pmi", "Score topic coherence against n-gram counts", [](Runner& r) { r.pmi(); }},
      {"pipeline", "Run every stage in order", [](Runner& r) { r.run_all(); }},
  };

  std::function<void()> action;
  auto build_config = [&] {
    RunConfig config;
    if (!config_file.empty()) {
      for (const auto& [key, value] : topicevo::read_config_file(config_file)) config.set(key, value);
    }
    for (const auto& [key, option] : options) {
      if (option->count() == 0) continue;
      config.set(key, is_flag(key) ? "true" : values[key]);
    }
    return config;
  };

  for (const auto& stage : stages) {
    auto* sub = app.add_subcommand(stage.name, stage.help);
    sub->callback([&, run = stage.run, pipeline = std::string(stage.name) == "pipeline"] {
      action = [&, run, pipeline] {
        Runner runner(build_config());
        run(runner);
        if (!pipeline) runner.write_meta_and_timings();
        std::cout << "wrote " << runner.paths().root.string() << "\n";
      };
    });
  }

  std::string run_dir;
  std::vector<std::string> keywords;
  auto* trace = app.add_subcommand("trace", "List the clusters containing each keyword per snapshot");
  trace->add_option("--run", run_dir, "Run directory (defaults to --out)");
  trace->add_option("keywords", keywords, "Keywords to look up")->required();
  trace->callback([&] {
    action = [&] {
      const auto dir = run_dir.empty() ? build_config().out : std::filesystem::path(run_dir);
      for (const auto& [keyword, per_snapshot] : topicevo::trace_keywords(dir, keywords)) {
        std::cout << keyword << ":";
        if (per_snapshot.empty()) std::cout << " (not found)";
        std::cout << "\n";
        for (const auto& [t, ids] : per_snapshot) {
          std::cout << "  snapshot " << t << ":";
          for (auto id : ids) std::cout << " " << id;
          std::cout << "\n";
        }
      }
    };
  });

  auto* timings = app.add_subcommand("timings", "Print per-stage timing totals");
  timings->add_option("--run", run_dir, "Run directory (defaults to --out)");
  timings->callback([&] {
    action = [&] {
      const auto dir = run_dir.empty() ? build_config().out : std::filesystem::path(run_dir);
      std::cout << topicevo::report_timings(dir).to_text();
    };
  });

  app.fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
