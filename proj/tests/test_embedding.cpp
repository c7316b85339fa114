#include <doctest.h>

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "textcoord/embedding.hpp"

using namespace textcoord;
using testutil::TempDir;

namespace {

// Independent re-computation of the hashed TF-IDF representation:
// explicit feature maps, direct bucket projection, direct cosine. Shares
// only the tokenizer contract and hash function with the implementation.
std::vector<double> oracle_vector(const std::string& text,
                                  const std::vector<std::string>& collection,
                                  std::size_t dim, std::uint64_t seed) {
  auto features_of = [](const std::string& t) {
    std::map<std::string, int> f;
    std::vector<std::string> toks;
    std::string cur;
    for (unsigned char c : t) {
      if (std::isalnum(c)) {
        cur += char(std::tolower(c));
      } else if (!cur.empty()) {
        toks.push_back(cur);
        cur.clear();
      }
    }
    if (!cur.empty()) toks.push_back(cur);
    for (const auto& tok : toks) f["u:" + tok] += 1;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
      f["b:" + toks[i] + " " + toks[i + 1]] += 1;
    return f;
  };

  std::map<std::string, int> df;
  for (const auto& doc : collection)
    for (const auto& [feat, _] : features_of(doc)) df[feat] += 1;

  std::vector<double> v(dim, 0.0);
  for (const auto& [feat, tf] : features_of(text)) {
    double idf =
        std::log((1.0 + collection.size()) / (1.0 + df[feat])) + 1.0;
    std::uint64_t h = hashed_feature(feat, seed);
    double sign = (h >> 63) ? -1.0 : 1.0;
    v[h % dim] += sign * tf * idf;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

double oracle_cosine(const std::vector<double>& a,
                     const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

}  // namespace

TEST_CASE("identical texts embed identically with cosine 1") {
  auto m = embed_builtin({"stop the steal", "stop the steal"}, 64, 7);
  REQUIRE(m.rows() == 2);
  for (std::size_t j = 0; j < m.dim; ++j)
    CHECK(m.row(0)[j] == m.row(1)[j]);
  CHECK(cosine(m.row(0), m.row(1), m.dim) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty text produces a flagged zero row with cosine 0") {
  auto m = embed_builtin({"", "some words"}, 64, 7);
  REQUIRE(m.zero_rows == std::vector<std::size_t>{0});
  for (std::size_t j = 0; j < m.dim; ++j) CHECK(m.row(0)[j] == 0.0f);
  CHECK(cosine(m.row(0), m.row(1), m.dim) == 0.0);
}

TEST_CASE("cosine matches the brute-force TF-IDF oracle") {
  std::vector<std::string> texts = {"stop the steal", "stop the count"};
  auto m = embed_builtin(texts, 64, 7);
  auto v0 = oracle_vector(texts[0], texts, 64, 7);
  auto v1 = oracle_vector(texts[1], texts, 64, 7);
  double expected = oracle_cosine(v0, v1);
  CHECK(cosine(m.row(0), m.row(1), m.dim) ==
        doctest::Approx(expected).epsilon(1e-6));

  // per-component agreement too
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(double(m.row(0)[j]) == doctest::Approx(v0[j]).epsilon(1e-6));
    CHECK(double(m.row(1)[j]) == doctest::Approx(v1[j]).epsilon(1e-6));
  }
}

TEST_CASE("embedding is bit-identical across runs") {
  std::vector<std::string> texts = {"a b c", "d e f g", "a c e"};
  auto m1 = embed_builtin(texts, 32, 99);
  auto m2 = embed_builtin(texts, 32, 99);
  CHECK(m1.data == m2.data);
}

TEST_CASE("permuting texts permutes rows identically") {
  std::vector<std::string> texts = {"alpha beta", "gamma delta", "beta gamma"};
  auto m = embed_builtin(texts, 32, 5);
  std::vector<std::string> permuted = {texts[2], texts[0], texts[1]};
  auto mp = embed_builtin(permuted, 32, 5);
  std::size_t perm[3] = {2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 32; ++j)
      CHECK(mp.row(i)[j] == m.row(perm[i])[j]);
}

TEST_CASE("nonzero rows are unit length") {
  auto m = embed_builtin({"one two three", "four five"}, 48, 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double norm = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j)
      norm += double(m.row(i)[j]) * m.row(i)[j];
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("dim below 2 is rejected") {
  CHECK_THROWS_AS(embed_builtin({"x"}, 1, 0), std::runtime_error);
}

TEST_CASE("text and binary embedding files round-trip") {
  auto m = embed_builtin({"stop the steal", "stop the count", "third text"},
                         16, 3);
  m.post_ids = {"p1", "p2", "p3"};
  TempDir dir;

  for (bool binary : {false, true}) {
    auto path = dir.file(binary ? "e.bin" : "e.txt");
    write_embeddings(m, path, binary);
    auto r = read_embeddings(path);
    CHECK(r.post_ids == m.post_ids);
    REQUIRE(r.dim == m.dim);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.dim; ++j)
        CHECK(r.row(i)[j] == m.row(i)[j]);
  }
}

TEST_CASE("import aligns rows to corpus order and validates coverage") {
  std::vector<Post> posts;
  for (const char* id : {"p1", "p2", "p3", "p4", "p5"}) {
    Post p;
    p.post_id = id;
    p.author_username = "u";
    posts.push_back(p);
  }
  Corpus corpus = Corpus::from_posts(std::move(posts));
  TempDir dir;

  SUBCASE("full coverage gives an aligned matrix") {
    EmbeddingMatrix m;
    m.dim = 4;
    // reversed on purpose: import must realign to corpus order
    m.post_ids = {"p5", "p4", "p3", "p2", "p1"};
    m.data.resize(20);
    for (std::size_t i = 0; i < 5; ++i) m.data[i * 4] = float(i + 1);
    auto path = dir.file("full.emb");
    write_embeddings(m, path);
    auto imported = import_embeddings(path, corpus, /*normalize=*/false);
    REQUIRE(imported.rows() == 5);
    CHECK(imported.post_ids.front() == "p1");
    CHECK(imported.row(0)[0] == 5.0f);  // p1 was the last file row
    CHECK(imported.row(4)[0] == 1.0f);
  }

  SUBCASE("missing post id is reported by name") {
    EmbeddingMatrix m;
    m.dim = 4;
    m.post_ids = {"p1", "p2", "p4", "p5"};
    m.data.resize(16, 1.0f);
    auto path = dir.file("missing.emb");
    write_embeddings(m, path);
    CHECK_THROWS_WITH_AS(import_embeddings(path, corpus),
                         doctest::Contains("p3"), std::runtime_error);
  }

  SUBCASE("non-finite value is reported with its row") {
    EmbeddingMatrix m;
    m.dim = 4;
    m.post_ids = {"p1", "p2", "p3", "p4", "p5"};
    m.data.resize(20, 1.0f);
    m.data[2 * 4 + 1] = INFINITY;
    auto path = dir.file("inf.bin");
    write_embeddings(m, path, /*binary=*/true);
    CHECK_THROWS_WITH_AS(import_embeddings(path, corpus),
                         doctest::Contains("row 2"), std::runtime_error);
  }
}
