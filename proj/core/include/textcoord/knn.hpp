#ifndef TEXTCOORD_KNN_HPP
#define TEXTCOORD_KNN_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "textcoord/embedding.hpp"

namespace textcoord {

/// Directed kNN adjacency: out_edges[i] holds i's neighbors sorted by
/// target index, weights are clamped cosines in (0,1].
struct KnnAdjacency {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::vector<std::pair<std::size_t, double>>> out_edges;
};

/// Symmetric post-to-post similarity graph. Each undirected edge is
/// stored once with a < b; neighbor lists carry both directions.
struct SimilarityGraph {
  struct Edge {
    std::size_t a, b;
    double weight;
  };
  std::size_t n = 0;
  std::size_t k_used = 0;
  std::vector<Edge> edges;  // sorted by (a, b)
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbors;
};

// k = max(1, floor(log2 n)). Throws on n = 0.
std::size_t default_k(std::size_t n);

// Exact top-k cosine search. Ties broken toward the smaller post index;
// non-positive cosines are dropped. `threads` caps the worker count
// (0 = hardware concurrency, capped at 8).
KnnAdjacency build_knn(const EmbeddingMatrix& embeddings, std::size_t k = 0,
                       unsigned threads = 0);

// S = (A + At) / 2, computed once per unordered pair.
SimilarityGraph symmetrize(const KnnAdjacency& adjacency);

// "src_post_id,dst_post_id,weight" with 6-decimal weights, one row per
// unordered pair in (a, b) index order.
void write_similarity_csv(const SimilarityGraph& graph,
                          const std::vector<std::string>& post_ids,
                          const std::string& path);
SimilarityGraph read_similarity_csv(const std::string& path,
                                    const std::vector<std::string>& post_ids);

}  // namespace textcoord

#endif  // TEXTCOORD_KNN_HPP
