#include "textcoord/knn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace textcoord {

std::size_t default_k(std::size_t n) {
  if (n == 0) throw std::runtime_error("default_k: post count is zero");
  std::size_t k = 0;
  while ((n >> (k + 1)) != 0) ++k;  // floor(log2 n)
  return std::max<std::size_t>(1, k);
}

namespace {

double dot_product(const float* a, const float* b, std::size_t dim) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= dim; j += 4) {
    s0 += double(a[j]) * b[j];
    s1 += double(a[j + 1]) * b[j + 1];
    s2 += double(a[j + 2]) * b[j + 2];
    s3 += double(a[j + 3]) * b[j + 3];
  }
  for (; j < dim; ++j) s0 += double(a[j]) * b[j];
  return ((s0 + s1) + (s2 + s3));
}

}  // namespace

KnnAdjacency build_knn(const EmbeddingMatrix& embeddings, std::size_t k,
                       unsigned threads) {
  const std::size_t n = embeddings.rows();
  const std::size_t dim = embeddings.dim;
  if (n < 2) throw std::runtime_error("build_knn: need at least 2 posts");
  if (k == 0) k = default_k(n);
  if (k >= n) throw std::runtime_error("knn: k must be < N");

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* r = embeddings.row(i);
    norms[i] = std::sqrt(dot_product(r, r, dim));
  }

  KnnAdjacency adj;
  adj.n = n;
  adj.k = k;
  adj.out_edges.resize(n);

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned n_workers = threads == 0 ? std::min(hw, 8u) : threads;
  n_workers = std::max(1u, std::min<unsigned>(n_workers, n));

  auto process_rows = [&](std::size_t begin, std::size_t end) {
    std::vector<double> sims(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = begin; i < end; ++i) {
      const float* ri = embeddings.row(i);
      if (norms[i] == 0.0) continue;  // zero vector, no out-edges
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || norms[j] == 0.0) {
          sims[j] = 0.0;
          continue;
        }
        sims[j] = dot_product(ri, embeddings.row(j), dim) /
                  (norms[i] * norms[j]);
      }
      sims[i] = -2.0;  // exclude self

      for (std::size_t j = 0; j < n; ++j) order[j] = j;
      auto better = [&](std::size_t a, std::size_t b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return a < b;
      };
      std::nth_element(order.begin(), order.begin() + k, order.end(), better);
      std::sort(order.begin(), order.begin() + k, better);

      auto& out = adj.out_edges[i];
      for (std::size_t r = 0; r < k; ++r) {
        double w = sims[order[r]];
        if (w <= 0.0) break;  // clamped-to-zero edges are dropped
        out.emplace_back(order[r], std::min(w, 1.0));
      }
      std::sort(out.begin(), out.end());
    }
  };

  if (n_workers == 1) {
    process_rows(0, n);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n + n_workers - 1) / n_workers;
    for (unsigned w = 0; w < n_workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(process_rows, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return adj;
}

SimilarityGraph symmetrize(const KnnAdjacency& adjacency) {
  const std::size_t n = adjacency.n;
  // A[i][j] looked up in sorted out-edge lists
  auto weight_of = [&](std::size_t i, std::size_t j) {
    const auto& out = adjacency.out_edges[i];
    auto it = std::lower_bound(
        out.begin(), out.end(), std::make_pair(j, 0.0),
        [](const auto& e, const auto& key) { return e.first < key.first; });
    return (it != out.end() && it->first == j) ? it->second : 0.0;
  };

  SimilarityGraph s;
  s.n = n;
  s.k_used = adjacency.k;
  s.neighbors.resize(n);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, w] : adjacency.out_edges[i])
      pairs.emplace_back(std::min(i, j), std::max(i, j));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  for (const auto& [a, b] : pairs) {
    double w = (weight_of(a, b) + weight_of(b, a)) / 2.0;
    if (w <= 0.0) continue;
    s.edges.push_back({a, b, w});
    s.neighbors[a].emplace_back(b, w);
    s.neighbors[b].emplace_back(a, w);
  }
  return s;
}

void write_similarity_csv(const SimilarityGraph& graph,
                          const std::vector<std::string>& post_ids,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "src_post_id,dst_post_id,weight\n";
  char buf[32];
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "%.6f", e.weight);
    out << post_ids[e.a] << ',' << post_ids[e.b] << ',' << buf << '\n';
  }
}

SimilarityGraph read_similarity_csv(const std::string& path,
                                    const std::vector<std::string>& post_ids) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < post_ids.size(); ++i) index[post_ids[i]] = i;

  SimilarityGraph s;
  s.n = post_ids.size();
  s.neighbors.resize(s.n);
  std::string line;
  std::getline(in, line);  // header
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string src, dst, weight;
    if (!std::getline(row, src, ',') || !std::getline(row, dst, ',') ||
        !std::getline(row, weight))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed edge row");
    auto si = index.find(src), di = index.find(dst);
    if (si == index.end() || di == index.end())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown post id");
    std::size_t a = std::min(si->second, di->second);
    std::size_t b = std::max(si->second, di->second);
    double w = std::stod(weight);
    s.edges.push_back({a, b, w});
    s.neighbors[a].emplace_back(b, w);
    s.neighbors[b].emplace_back(a, w);
  }
  std::sort(s.edges.begin(), s.edges.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return s;
}

}  // namespace textcoord
