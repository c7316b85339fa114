#ifndef TEXTCOORD_PIPELINE_HPP
#define TEXTCOORD_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "textcoord/corpus.hpp"

namespace textcoord {

/// End-to-end run parameters. Every free knob of the method lives here:
/// k for the kNN graph (0 = the log2 default), the prune multiplier
/// (1.0 = mean plus one standard deviation), and the vectorizer choice.
struct PipelineConfig {
  std::string input_path;
  std::string input_format = "jsonl";  // jsonl | csv
  std::string class_table_path;        // empty = built-in defaults
  std::string vectorizer = "builtin";  // builtin | import
  std::string import_path;             // embedding file when vectorizer=import
  std::size_t dim = 256;
  std::uint64_t seed = 0;
  std::size_t k = 0;          // 0 = default_k(N)
  double std_multiplier = 1.0;
  unsigned threads = 0;       // 0 = auto (capped at 8)
  std::string output_dir;
  std::vector<std::string> exports = {"csv", "graphml", "json"};  // +dot
  std::string stopwords_path;  // empty = built-in list

  void validate() const;
  static PipelineConfig from_file(const std::string& path);
};

struct PipelineResult {
  std::size_t n_posts = 0;
  std::size_t n_original_posts = 0;
  std::size_t n_users = 0;
  std::size_t k_used = 0;
  std::size_t n_similarity_edges = 0;
  std::size_t n_edges_before = 0;
  std::size_t n_edges_after = 0;
  double mu = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;
  std::size_t n_clusters = 0;
  std::vector<std::string> artifacts;  // paths written, relative to out dir
  std::vector<std::string> warnings;
};

// ingest -> filter originals -> classify -> embed -> kNN -> symmetrize ->
// induce -> prune -> analyze, writing every intermediate artifact into
// config.output_dir. Throws with a stage-named message on failure.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace textcoord

#endif  // TEXTCOORD_PIPELINE_HPP
