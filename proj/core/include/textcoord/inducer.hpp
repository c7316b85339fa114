#ifndef TEXTCOORD_INDUCER_HPP
#define TEXTCOORD_INDUCER_HPP

#include <optional>
#include <string>
#include <vector>

#include "textcoord/corpus.hpp"
#include "textcoord/knn.hpp"

namespace textcoord {

/// Binary user-to-post authorship incidence. Every post column has exactly
/// one owner.
struct IncidenceMatrix {
  std::vector<std::string> user_ids;
  std::vector<std::string> post_ids;
  std::vector<std::size_t> post_owner;  // post index -> user index
  std::vector<std::vector<std::size_t>> user_posts;
};

/// Weighted user-to-user coordination graph; undirected edges stored once
/// with a < b.
struct CoordinationGraph {
  struct Edge {
    std::size_t a, b;
    double weight;
  };
  std::vector<std::string> user_ids;
  std::vector<Edge> edges;  // sorted by (a, b)
  bool pruned = false;
  std::optional<double> threshold;
  std::optional<double> mean;
  std::optional<double> stddev;
};

// Requires a corpus already passed through filter_originals; echoes are a
// contract violation.
IncidenceMatrix build_incidence(const Corpus& corpus);

// U = B S Bt with the diagonal zeroed. S post order must match B post
// order.
CoordinationGraph induce(const IncidenceMatrix& incidence,
                         const SimilarityGraph& similarity);

struct PruneReport {
  double mean = 0.0;
  double stddev = 0.0;  // population by default
  double threshold = 0.0;
  std::size_t n_edges_before = 0;
  std::size_t n_edges_after = 0;
  bool degenerate = false;  // sigma == 0, nothing survives strict >
};

// Keeps edges with weight > mean + std_multiplier * sigma over the nonzero
// edge weights. Throws on an edgeless graph; the all-equal-weights case
// returns an empty pruned graph with report.degenerate set.
CoordinationGraph prune(const CoordinationGraph& graph,
                        double std_multiplier = 1.0,
                        bool population_stddev = true,
                        PruneReport* report = nullptr);

void write_coordination_csv(const CoordinationGraph& graph,
                            const std::string& path);
CoordinationGraph read_coordination_csv(const std::string& path);

// GraphML with node attributes user_class_list and weighted_degree and an
// edge weight attribute. class_of maps user id -> semicolon-joined labels
// (may be empty).
void write_coordination_graphml(
    const CoordinationGraph& graph,
    const std::vector<std::string>& node_class_lists, const std::string& path);

}  // namespace textcoord

#endif  // TEXTCOORD_INDUCER_HPP
