#include "textcoord/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "textcoord/analysis.hpp"
#include "textcoord/embedding.hpp"
#include "textcoord/inducer.hpp"
#include "textcoord/knn.hpp"
#include "textcoord/user_classes.hpp"

namespace textcoord {

namespace {

using nlohmann::json;

[[noreturn]] void stage_fail(const char* stage, const std::string& what) {
  throw std::runtime_error(std::string(stage) + ": " + what);
}

std::string joined_classes(const ClassAssignment& a) {
  std::string out;
  for (const auto& label : a.classes) {
    if (!out.empty()) out += ';';
    out += label;
  }
  return out;
}

json mean_std_json(const std::optional<MeanStd>& ms) {
  if (!ms) return nullptr;
  return json{{"mean", ms->mean}, {"std", ms->stddev}};
}

json engagement_json(const std::map<std::string, ClassEngagement>& stats) {
  json out = json::object();
  for (const auto& [label, e] : stats) {
    out[label] = {
        {"n_users", e.n_users},
        {"n_posts", e.n_posts},
        {"avg_echoes_by_users", mean_std_json(e.echoes_made_per_user)},
        {"avg_users_echoed", mean_std_json(e.times_echoed_per_user)},
        {"avg_posts_with_mention", mean_std_json(e.posts_with_mention_per_user)},
        {"avg_posts_with_hashtag", mean_std_json(e.posts_with_hashtag_per_user)},
        {"avg_posts_with_url", mean_std_json(e.posts_with_url_per_user)},
        {"avg_posts_with_media", mean_std_json(e.posts_with_media_per_user)},
        {"avg_comments_per_post", mean_std_json(e.comments_per_post)},
        {"avg_upvotes_per_post", mean_std_json(e.upvotes_per_post)},
        {"avg_impressions_per_post", mean_std_json(e.impressions_per_post)},
        {"mode_impressions_per_post",
         e.mode_impressions_per_post ? json(*e.mode_impressions_per_post)
                                     : json(nullptr)},
    };
  }
  return out;
}

// Weights cross stage boundaries as 6-decimal CSV text; pushing the
// in-memory values through the same formatting keeps the one-shot run
// byte-identical with a stage-by-stage run.
double csv_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", w);
  return std::stod(buf);
}

}  // namespace

void PipelineConfig::validate() const {
  if (input_path.empty()) throw std::runtime_error("config: input path is empty");
  if (output_dir.empty()) throw std::runtime_error("config: output dir is empty");
  if (input_format != "jsonl" && input_format != "csv")
    throw std::runtime_error("config: format must be jsonl or csv");
  if (vectorizer != "builtin" && vectorizer != "import")
    throw std::runtime_error("config: vectorizer must be builtin or import");
  if (vectorizer == "import" && import_path.empty())
    throw std::runtime_error("config: vectorizer=import needs an import path");
  if (vectorizer == "builtin" && dim < 2)
    throw std::runtime_error("config: dim must be >= 2");
  if (std_multiplier <= 0.0)
    throw std::runtime_error("config: std-multiplier must be > 0");
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json doc;
  in >> doc;
  PipelineConfig cfg;
  auto opt = [&](const char* key, auto& slot) {
    using T = std::decay_t<decltype(slot)>;
    if (doc.contains(key)) slot = doc.at(key).template get<T>();
  };
  opt("input", cfg.input_path);
  opt("format", cfg.input_format);
  opt("class_table", cfg.class_table_path);
  opt("vectorizer", cfg.vectorizer);
  opt("import_path", cfg.import_path);
  opt("dim", cfg.dim);
  opt("seed", cfg.seed);
  opt("k", cfg.k);
  opt("std_multiplier", cfg.std_multiplier);
  opt("threads", cfg.threads);
  opt("out", cfg.output_dir);
  opt("exports", cfg.exports);
  opt("stopwords", cfg.stopwords_path);
  return cfg;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  auto out_path = [&](const std::string& name) {
    return (fs::path(config.output_dir) / name).string();
  };

  PipelineResult result;
  auto keep = [&](const std::string& name) { result.artifacts.push_back(name); };

  // ingest
  Corpus corpus;
  try {
    corpus = load_corpus(config.input_path,
                         parse_corpus_format(config.input_format),
                         &result.warnings);
  } catch (const std::exception& e) {
    stage_fail("ingest", e.what());
  }
  result.n_posts = corpus.n_posts();
  save_corpus(corpus, out_path("corpus.jsonl"), CorpusFormat::kJsonl);
  keep("corpus.jsonl");

  // classify (over the full corpus, echoes included)
  UserClassTable table = config.class_table_path.empty()
                             ? UserClassTable::defaults()
                             : UserClassTable::from_file(config.class_table_path);
  auto assignments = classify_corpus(corpus, table);
  {
    std::ofstream out(out_path("classes.csv"));
    out << "username,classes\n";
    for (const auto& a : assignments)
      out << a.username << ',' << joined_classes(a) << '\n';
  }
  keep("classes.csv");

  // filter originals for the coordination path
  Corpus originals = filter_originals(corpus);
  result.n_original_posts = originals.n_posts();
  result.n_users = originals.n_users();
  if (originals.n_posts() < 2)
    stage_fail("filter", "fewer than 2 original posts, nothing to analyze");

  // embed
  EmbeddingMatrix embeddings;
  try {
    embeddings = config.vectorizer == "import"
                     ? import_embeddings(config.import_path, originals)
                     : embed_corpus(originals, config.dim, config.seed);
  } catch (const std::exception& e) {
    stage_fail("embed", e.what());
  }
  if (!embeddings.zero_rows.empty())
    result.warnings.push_back(
        "embed: " + std::to_string(embeddings.zero_rows.size()) +
        " post(s) produced empty feature sets (zero vectors)");
  write_embeddings(embeddings, out_path("embeddings.emb"));
  keep("embeddings.emb");

  // knn + symmetrize
  SimilarityGraph similarity;
  try {
    auto adjacency = build_knn(embeddings, config.k, config.threads);
    similarity = symmetrize(adjacency);
  } catch (const std::exception& e) {
    stage_fail("knn", e.what());
  }
  result.k_used = similarity.k_used;
  result.n_similarity_edges = similarity.edges.size();
  write_similarity_csv(similarity, embeddings.post_ids,
                       out_path("similarity_edges.csv"));
  keep("similarity_edges.csv");
  for (auto& e : similarity.edges) e.weight = csv_weight(e.weight);
  for (auto& list : similarity.neighbors)
    for (auto& [j, w] : list) w = csv_weight(w);

  // induce
  IncidenceMatrix incidence;
  CoordinationGraph coordination;
  try {
    incidence = build_incidence(originals);
    coordination = induce(incidence, similarity);
  } catch (const std::exception& e) {
    stage_fail("induce", e.what());
  }
  write_coordination_csv(coordination, out_path("coordination_edges.csv"));
  keep("coordination_edges.csv");
  for (auto& e : coordination.edges) e.weight = csv_weight(e.weight);
  result.n_edges_before = coordination.edges.size();

  // prune
  CoordinationGraph core;
  PruneReport prune_report;
  if (coordination.edges.empty()) {
    core.user_ids = coordination.user_ids;
    core.pruned = true;
    result.warnings.push_back("prune: coordination graph has no edges");
  } else {
    core = prune(coordination, config.std_multiplier, true, &prune_report);
    result.mu = prune_report.mean;
    result.sigma = prune_report.stddev;
    result.threshold = prune_report.threshold;
    if (prune_report.degenerate)
      result.warnings.push_back(
          "prune: degenerate edge-weight distribution, no edges above "
          "threshold");
  }
  result.n_edges_after = core.edges.size();
  write_coordination_csv(core, out_path("core_edges.csv"));
  keep("core_edges.csv");

  std::vector<std::string> class_lists(core.user_ids.size());
  {
    std::map<std::string, std::string> by_user;
    for (const auto& a : assignments) by_user[a.username] = joined_classes(a);
    for (std::size_t i = 0; i < core.user_ids.size(); ++i) {
      auto it = by_user.find(core.user_ids[i]);
      if (it != by_user.end()) class_lists[i] = it->second;
    }
  }
  write_coordination_graphml(core, class_lists, out_path("core.graphml"));
  keep("core.graphml");
  for (const auto& format : config.exports) {
    if (format == "dot") {
      write_cluster_dot(core, assignments, out_path("core.dot"));
      keep("core.dot");
    }
  }

  // analyze
  auto stopwords = config.stopwords_path.empty()
                       ? default_stopwords()
                       : load_stopwords(config.stopwords_path);
  auto clusters = cluster_reports(core, originals, similarity, incidence,
                                  assignments, stopwords);
  result.n_clusters = clusters.size();
  auto census = class_census(corpus, table);
  auto engagement = engagement_stats(corpus, assignments, table);

  json analysis = json::object();
  {
    json census_json = json::object();
    for (const auto& [label, row] : census)
      census_json[label] = {{"account_count", row.account_count},
                            {"account_share", row.account_share},
                            {"post_count", row.post_count},
                            {"post_share", row.post_share}};
    analysis["class_census"] = census_json;
    analysis["engagement"] = engagement_json(engagement);

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
    analysis["clusters"] = cluster_array;

    std::vector<const Post*> all_posts;
    for (const Post& p : corpus.posts()) all_posts.push_back(&p);
    json overall_terms = json::array();
    for (const auto& [term, count] : top_terms(all_posts, 20, stopwords))
      overall_terms.push_back({{"term", term}, {"count", count}});
    analysis["top_terms"] = overall_terms;

    std::ofstream out(out_path("analysis.json"));
    out << analysis.dump(2) << '\n';
  }
  keep("analysis.json");

  {
    json report = {{"n_posts", result.n_posts},
                   {"n_original_posts", result.n_original_posts},
                   {"n_users", result.n_users},
                   {"k_used", result.k_used},
                   {"n_similarity_edges", result.n_similarity_edges},
                   {"n_edges_before", result.n_edges_before},
                   {"mu", result.mu},
                   {"sigma", result.sigma},
                   {"threshold", result.threshold},
                   {"n_edges_after", result.n_edges_after},
                   {"n_clusters", result.n_clusters},
                   {"warnings", result.warnings}};
    std::ofstream out(out_path("run_report.json"));
    out << report.dump(2) << '\n';
  }
  keep("run_report.json");

  return result;
}

}  // namespace textcoord
