// Command-line front end: each subcommand runs one pipeline stage from the
// previous stage's files; `run` executes the whole pipeline.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "textcoord/analysis.hpp"
#include "textcoord/embedding.hpp"
#include "textcoord/inducer.hpp"
#include "textcoord/knn.hpp"
#include "textcoord/pipeline.hpp"
#include "textcoord/synth.hpp"
#include "textcoord/user_classes.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace textcoord;

namespace {

std::string out_file(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

UserClassTable table_from(const std::string& path) {
  return path.empty() ? UserClassTable::defaults()
                      : UserClassTable::from_file(path);
}

std::string joined(const std::set<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ';';
    out += s;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinated-messaging detection from post text similarity"};
  app.require_subcommand(1);

  std::string input, format = "jsonl", config_path, out_dir = ".";
  std::string class_table_path, stopwords_path;
  if (const char* env = std::getenv("TEXTCOORD_CONFIG")) config_path = env;

  // ---- run ----
  auto* run = app.add_subcommand("run", "full pipeline: ingest through analyze");
  PipelineConfig cfg;
  std::string run_config = config_path;
  run->add_option("--config", run_config, "pipeline config JSON");
  run->add_option("--input", cfg.input_path);
  run->add_option("--format", cfg.input_format)
      ->check(CLI::IsMember({"jsonl", "csv"}));
  run->add_option("--out", cfg.output_dir);
  run->add_option("--class-table", cfg.class_table_path);
  run->add_option("--vectorizer", cfg.vectorizer)
      ->check(CLI::IsMember({"builtin", "import"}));
  run->add_option("--import-path", cfg.import_path);
  run->add_option("--dim", cfg.dim);
  run->add_option("--seed", cfg.seed);
  run->add_option("--k", cfg.k);
  run->add_option("--std-mult", cfg.std_multiplier);
  run->add_option("--threads", cfg.threads);
  run->add_option("--export", cfg.exports, "csv graphml json dot");
  run->add_option("--stopwords", cfg.stopwords_path);
  run->callback([&] {
    PipelineConfig effective =
        run_config.empty() ? cfg : PipelineConfig::from_file(run_config);
    if (!run_config.empty()) {
      // explicit flags override file values
      if (run->count("--input")) effective.input_path = cfg.input_path;
      if (run->count("--format")) effective.input_format = cfg.input_format;
      if (run->count("--out")) effective.output_dir = cfg.output_dir;
      if (run->count("--k")) effective.k = cfg.k;
      if (run->count("--std-mult")) effective.std_multiplier = cfg.std_multiplier;
      if (run->count("--dim")) effective.dim = cfg.dim;
      if (run->count("--seed")) effective.seed = cfg.seed;
      if (run->count("--threads")) effective.threads = cfg.threads;
      if (run->count("--vectorizer")) effective.vectorizer = cfg.vectorizer;
      if (run->count("--import-path")) effective.import_path = cfg.import_path;
      if (run->count("--class-table"))
        effective.class_table_path = cfg.class_table_path;
      if (run->count("--stopwords")) effective.stopwords_path = cfg.stopwords_path;
      if (run->count("--export")) effective.exports = cfg.exports;
    }
    auto result = run_pipeline(effective);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "posts=" << result.n_posts
              << " users=" << result.n_users << " k=" << result.k_used
              << " edges_before=" << result.n_edges_before
              << " edges_after=" << result.n_edges_after
              << " clusters=" << result.n_clusters << '\n';
    std::cout << "artifacts in " << effective.output_dir << ":";
    for (const auto& a : result.artifacts) std::cout << ' ' << a;
    std::cout << '\n';
  });

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "load and normalize a corpus");
  ingest->add_option("--input", input)->required();
  ingest->add_option("--format", format)->check(CLI::IsMember({"jsonl", "csv"}));
  ingest->add_option("--out", out_dir);
  ingest->callback([&] {
    std::vector<std::string> warnings;
    Corpus corpus = load_corpus(input, parse_corpus_format(format), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    save_corpus(corpus, out_file(out_dir, "corpus.jsonl"), CorpusFormat::kJsonl);
    std::cout << "posts=" << corpus.n_posts() << " users=" << corpus.n_users()
              << '\n';
  });

  // ---- classify ----
  auto* classify = app.add_subcommand("classify", "assign user classes");
  classify->add_option("--input", input)->required();
  classify->add_option("--class-table", class_table_path);
  classify->add_option("--out", out_dir);
  classify->callback([&] {
    Corpus corpus = load_corpus(input, CorpusFormat::kJsonl);
    auto table = table_from(class_table_path);
    auto assignments = classify_corpus(corpus, table);
    std::ofstream out(out_file(out_dir, "classes.csv"));
    out << "username,classes\n";
    for (const auto& a : assignments)
      out << a.username << ',' << joined(a.classes) << '\n';

    auto census = class_census(corpus, table);
    json doc = json::object();
    for (const auto& [label, row] : census)
      doc[label] = {{"account_count", row.account_count},
                    {"account_share", row.account_share},
                    {"post_count", row.post_count},
                    {"post_share", row.post_share}};
    std::ofstream census_out(out_file(out_dir, "census.json"));
    census_out << doc.dump(2) << '\n';
    std::cout << doc.dump(2) << '\n';
  });

  // ---- embed ----
  auto* embed = app.add_subcommand("embed", "vectorize original posts");
  std::string vectorizer = "builtin", import_path;
  std::size_t dim = 256;
  std::uint64_t seed = 0;
  bool binary = false;
  embed->add_option("--input", input)->required();
  embed->add_option("--vectorizer", vectorizer)
      ->check(CLI::IsMember({"builtin", "import"}));
  embed->add_option("--import-path", import_path);
  embed->add_option("--dim", dim);
  embed->add_option("--seed", seed);
  embed->add_flag("--binary", binary, "write the EMB1 binary format");
  embed->add_option("--out", out_dir);
  embed->callback([&] {
    Corpus originals =
        filter_originals(load_corpus(input, CorpusFormat::kJsonl));
    EmbeddingMatrix m = vectorizer == "import"
                            ? import_embeddings(import_path, originals)
                            : embed_corpus(originals, dim, seed);
    if (!m.zero_rows.empty())
      std::cerr << "warning: " << m.zero_rows.size() << " zero row(s)\n";
    write_embeddings(m, out_file(out_dir, "embeddings.emb"), binary);
    std::cout << "rows=" << m.rows() << " dim=" << m.dim << '\n';
  });

  // ---- knn ----
  auto* knn = app.add_subcommand("knn", "build the symmetric kNN post graph");
  std::string embeddings_path;
  std::size_t k = 0;
  unsigned threads = 0;
  knn->add_option("--embeddings", embeddings_path)->required();
  knn->add_option("--k", k, "0 = floor(log2 N)");
  knn->add_option("--threads", threads);
  knn->add_option("--out", out_dir);
  knn->callback([&] {
    EmbeddingMatrix m = read_embeddings(embeddings_path);
    auto adjacency = build_knn(m, k, threads);
    auto similarity = symmetrize(adjacency);
    write_similarity_csv(similarity, m.post_ids,
                         out_file(out_dir, "similarity_edges.csv"));
    std::cout << "k=" << similarity.k_used
              << " edges=" << similarity.edges.size() << '\n';
  });

  // ---- induce ----
  auto* induce_cmd =
      app.add_subcommand("induce", "project S onto the user-to-user graph U");
  std::string similarity_path;
  induce_cmd->add_option("--input", input)->required();
  induce_cmd->add_option("--similarity", similarity_path)->required();
  induce_cmd->add_option("--out", out_dir);
  induce_cmd->callback([&] {
    Corpus originals =
        filter_originals(load_corpus(input, CorpusFormat::kJsonl));
    auto incidence = build_incidence(originals);
    auto similarity = read_similarity_csv(similarity_path, incidence.post_ids);
    auto coordination = induce(incidence, similarity);
    write_coordination_csv(coordination,
                           out_file(out_dir, "coordination_edges.csv"));
    std::cout << "users=" << coordination.user_ids.size()
              << " edges=" << coordination.edges.size() << '\n';
  });

  // ---- prune ----
  auto* prune_cmd = app.add_subcommand("prune", "keep edges above mu + c*sigma");
  std::string edges_path;
  double std_mult = 1.0;
  prune_cmd->add_option("--edges", edges_path)->required();
  prune_cmd->add_option("--std-mult", std_mult);
  prune_cmd->add_option("--out", out_dir);
  prune_cmd->callback([&] {
    auto coordination = read_coordination_csv(edges_path);
    PruneReport report;
    auto core = prune(coordination, std_mult, true, &report);
    if (report.degenerate)
      std::cerr << "warning: degenerate edge-weight distribution, pruned "
                   "graph is empty\n";
    write_coordination_csv(core, out_file(out_dir, "core_edges.csv"));
    json doc = {{"mu", report.mean},
                {"sigma", report.stddev},
                {"threshold", report.threshold},
                {"n_edges_before", report.n_edges_before},
                {"n_edges_after", report.n_edges_after}};
    std::ofstream out(out_file(out_dir, "prune_report.json"));
    out << doc.dump(2) << '\n';
    std::cout << doc.dump(2) << '\n';
  });

  // ---- analyze ----
  auto* analyze =
      app.add_subcommand("analyze", "clusters, degrees, engagement reports");
  std::string core_path, analyze_similarity;
  analyze->add_option("--input", input)->required();
  analyze->add_option("--edges", core_path)->required();
  analyze->add_option("--similarity", analyze_similarity);
  analyze->add_option("--class-table", class_table_path);
  analyze->add_option("--stopwords", stopwords_path);
  analyze->add_option("--out", out_dir);
  analyze->callback([&] {
    Corpus corpus = load_corpus(input, CorpusFormat::kJsonl);
    Corpus originals = filter_originals(corpus);
    auto table = table_from(class_table_path);
    auto assignments = classify_corpus(corpus, table);
    auto incidence = build_incidence(originals);
    auto core = read_coordination_csv(core_path);
    core.pruned = true;
    SimilarityGraph similarity;
    similarity.n = incidence.post_ids.size();
    similarity.neighbors.resize(similarity.n);
    if (!analyze_similarity.empty())
      similarity = read_similarity_csv(analyze_similarity, incidence.post_ids);
    auto stopwords = stopwords_path.empty() ? default_stopwords()
                                            : load_stopwords(stopwords_path);
    auto clusters = cluster_reports(core, originals, similarity, incidence,
                                    assignments, stopwords);
    auto engagement = engagement_stats(corpus, assignments, table);

    json doc = json::object();
    json cluster_array = json::array();
    for (const auto& c : clusters) {
      json terms = json::array();
      for (const auto& [term, count] : c.top_terms)
        terms.push_back({{"term", term}, {"count", count}});
      cluster_array.push_back({{"cluster_id", c.cluster_id},
                               {"members", c.member_user_ids},
                               {"class_composition", c.class_composition},
                               {"top_terms", terms},
                               {"representative_posts", c.representative_posts}});
    }
    doc["clusters"] = cluster_array;
    std::ofstream out(out_file(out_dir, "analysis.json"));
    out << doc.dump(2) << '\n';

    std::vector<std::string> order = table.labels();
    std::cout << render_engagement_table(engagement, order);
    write_cluster_dot(core, assignments, out_file(out_dir, "core.dot"));
  });

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a planted-group corpus");
  std::string scenario_path;
  synth->add_option("--scenario", scenario_path)->required();
  synth->add_option("--out", out_dir);
  synth->callback([&] {
    auto cfg_synth = ScenarioConfig::from_file(scenario_path);
    auto [corpus, truth] = generate_scenario(cfg_synth);
    save_corpus(corpus, out_file(out_dir, "synth_corpus.jsonl"),
                CorpusFormat::kJsonl);
    write_ground_truth_csv(truth, out_file(out_dir, "ground_truth.csv"));
    std::cout << "posts=" << corpus.n_posts() << " users=" << corpus.n_users()
              << " groups=" << cfg_synth.n_groups << '\n';
  });

  // ---- score ----
  auto* score = app.add_subcommand("score", "score U' against ground truth");
  std::string truth_path;
  score->add_option("--edges", edges_path)->required();
  score->add_option("--truth", truth_path)->required();
  score->add_option("--out", out_dir);
  score->callback([&] {
    auto core = read_coordination_csv(edges_path);
    core.pruned = true;
    auto truth = read_ground_truth_csv(truth_path);
    auto scores = score_detection(core, truth);
    json doc = {{"edge_precision", scores.edge_precision
                                       ? json(*scores.edge_precision)
                                       : json(nullptr)},
                {"edge_recall", scores.edge_recall},
                {"group_recovery_rate", scores.group_recovery_rate}};
    std::ofstream out(out_file(out_dir, "scores.json"));
    out << doc.dump(2) << '\n';
    std::cout << doc.dump(2) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
