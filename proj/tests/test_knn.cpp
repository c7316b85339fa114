#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "textcoord/knn.hpp"

using namespace textcoord;

namespace {

EmbeddingMatrix random_embeddings(std::size_t n, std::size_t dim,
                                  unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<float> dist(0.0f, 1.0f);
  EmbeddingMatrix m;
  m.dim = dim;
  m.post_ids.resize(n);
  m.data.resize(n * dim);
  for (auto& x : m.data) x = dist(gen);
  for (std::size_t i = 0; i < n; ++i) m.post_ids[i] = "p" + std::to_string(i);
  return m;
}

// Full O(N^2) similarity matrix, per-row descending sort with
// smaller-index tie break, top k, non-positive weights dropped.
std::vector<std::vector<std::pair<std::size_t, double>>> oracle_knn(
    const EmbeddingMatrix& m, std::size_t k) {
  std::size_t n = m.rows();
  std::vector<std::vector<std::pair<std::size_t, double>>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> sims;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sims.emplace_back(cosine(m.row(i), m.row(j), m.dim), j);
    }
    std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t r = 0; r < std::min(k, sims.size()); ++r) {
      if (sims[r].first <= 0.0) break;
      out[i].emplace_back(sims[r].second, std::min(sims[r].first, 1.0));
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace

TEST_CASE("default_k follows the floor-log2 rule") {
  CHECK(default_k(1024) == 10);
  CHECK(default_k(2) == 1);
  CHECK(default_k(1000) == 9);
  CHECK(default_k(1) == 1);
  CHECK_THROWS_AS(default_k(0), std::runtime_error);
}

TEST_CASE("two identical posts produce mutual unit edges") {
  EmbeddingMatrix m;
  m.dim = 4;
  m.post_ids = {"a", "b"};
  m.data = {0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f, 0.5f};
  auto adj = build_knn(m, 1);
  REQUIRE(adj.out_edges[0].size() == 1);
  REQUIRE(adj.out_edges[1].size() == 1);
  CHECK(adj.out_edges[0][0].first == 1);
  CHECK(adj.out_edges[0][0].second == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(adj.out_edges[1][0].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal one-hot vectors give an empty graph") {
  EmbeddingMatrix m;
  m.dim = 4;
  m.post_ids = {"a", "b", "c", "d"};
  m.data.assign(16, 0.0f);
  for (std::size_t i = 0; i < 4; ++i) m.data[i * 4 + i] = 1.0f;
  auto adj = build_knn(m, 1);
  for (const auto& out : adj.out_edges) CHECK(out.empty());
  auto s = symmetrize(adj);
  CHECK(s.edges.empty());
}

TEST_CASE("k >= N is rejected") {
  auto m = random_embeddings(4, 8, 1);
  CHECK_THROWS_WITH_AS(build_knn(m, 4), doctest::Contains("k must be < N"),
                       std::runtime_error);
}

TEST_CASE("8 seeded vectors match the brute-force oracle at k=3") {
  auto m = random_embeddings(8, 16, 42);
  auto adj = build_knn(m, 3);
  auto expect = oracle_knn(m, 3);
  for (std::size_t i = 0; i < 8; ++i) {
    REQUIRE(adj.out_edges[i].size() == expect[i].size());
    for (std::size_t e = 0; e < expect[i].size(); ++e) {
      CHECK(adj.out_edges[i][e].first == expect[i][e].first);
      CHECK(adj.out_edges[i][e].second ==
            doctest::Approx(expect[i][e].second).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact search equals the oracle over random sizes and seeds") {
  for (unsigned seed : {1u, 7u, 13u}) {
    std::mt19937 gen(seed * 1000);
    std::size_t n = 20 + gen() % 180;  // up to 200 here; acceptance goes to 500
    auto m = random_embeddings(n, 12, seed);
    std::size_t k = default_k(n);
    auto adj = build_knn(m, k);
    auto expect = oracle_knn(m, k);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(adj.out_edges[i].size() == expect[i].size());
      for (std::size_t e = 0; e < expect[i].size(); ++e) {
        CHECK(adj.out_edges[i][e].first == expect[i][e].first);
        CHECK(adj.out_edges[i][e].second ==
              doctest::Approx(expect[i][e].second).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("thread count does not change the result") {
  auto m = random_embeddings(64, 8, 3);
  auto a1 = build_knn(m, 5, 1);
  auto a8 = build_knn(m, 5, 8);
  REQUIRE(a1.out_edges.size() == a8.out_edges.size());
  for (std::size_t i = 0; i < a1.out_edges.size(); ++i)
    CHECK(a1.out_edges[i] == a8.out_edges[i]);
}

TEST_CASE("increasing k never removes an edge") {
  auto m = random_embeddings(40, 8, 11);
  auto small = build_knn(m, 3);
  auto large = build_knn(m, 6);
  for (std::size_t i = 0; i < 40; ++i) {
    for (const auto& e : small.out_edges[i]) {
      bool found = false;
      for (const auto& e2 : large.out_edges[i])
        if (e2.first == e.first) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("symmetrize halves one-directional edges and keeps mutual ones") {
  KnnAdjacency adj;
  adj.n = 3;
  adj.k = 1;
  adj.out_edges.resize(3);
  adj.out_edges[0] = {{1, 0.8}};  // one-directional
  adj.out_edges[1] = {{2, 0.6}};
  adj.out_edges[2] = {{1, 0.6}};  // mutual with 1->2

  auto s = symmetrize(adj);
  REQUIRE(s.edges.size() == 2);
  CHECK(s.edges[0].a == 0);
  CHECK(s.edges[0].b == 1);
  CHECK(s.edges[0].weight == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(s.edges[1].a == 1);
  CHECK(s.edges[1].b == 2);
  CHECK(s.edges[1].weight == doctest::Approx(0.6).epsilon(1e-15));

  // exact symmetry in the neighbor lists
  for (const auto& e : s.edges) {
    double w_ab = 0, w_ba = 0;
    for (const auto& [j, w] : s.neighbors[e.a])
      if (j == e.b) w_ab = w;
    for (const auto& [j, w] : s.neighbors[e.b])
      if (j == e.a) w_ba = w;
    CHECK(w_ab == w_ba);
  }
}

TEST_CASE("symmetrized graph invariants hold on random instances") {
  auto m = random_embeddings(100, 10, 21);
  auto adj = build_knn(m, 6);
  auto s = symmetrize(adj);
  std::vector<std::size_t> degree(100, 0);
  for (const auto& e : s.edges) {
    CHECK(e.a < e.b);  // zero diagonal, stored once
    CHECK(e.weight > 0.0);
    CHECK(e.weight <= 1.0);
    degree[e.a] += 1;
    degree[e.b] += 1;
  }
  for (std::size_t d : degree) CHECK(d <= 2 * 6);
}

TEST_CASE("empty adjacency symmetrizes to an empty graph") {
  KnnAdjacency adj;
  adj.n = 5;
  adj.k = 2;
  adj.out_edges.resize(5);
  auto s = symmetrize(adj);
  CHECK(s.edges.empty());
}
