#ifndef TEXTCOORD_EMBEDDING_HPP
#define TEXTCOORD_EMBEDDING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "textcoord/corpus.hpp"

namespace textcoord {

/// N x d dense embedding, one row per post, row order matching post_ids.
struct EmbeddingMatrix {
  std::vector<std::string> post_ids;
  std::size_t dim = 0;
  std::vector<float> data;  // row-major, post_ids.size() * dim
  bool normalized = false;
  std::vector<std::size_t> zero_rows;  // posts that produced no features

  std::size_t rows() const { return post_ids.size(); }
  const float* row(std::size_t i) const { return data.data() + i * dim; }
  float* row(std::size_t i) { return data.data() + i * dim; }
};

// Tokenizes on non-alphanumerics, lowercased.
std::vector<std::string> text_tokens(const std::string& text);

// Seeded 64-bit FNV-1a; shared by the hashing vectorizer and its tests.
std::uint64_t hashed_feature(const std::string& feature, std::uint64_t seed);

// Deterministic hashed TF-IDF vectorizer: word unigrams + bigrams, signed
// feature hashing into `dim` buckets, L2-normalized rows. Texts with no
// tokens map to zero rows (recorded in zero_rows).
EmbeddingMatrix embed_builtin(const std::vector<std::string>& texts,
                              std::size_t dim = 256, std::uint64_t seed = 0);

EmbeddingMatrix embed_corpus(const Corpus& corpus, std::size_t dim = 256,
                             std::uint64_t seed = 0);

// Text format: header "N d", then one "post_id v1 ... vd" line per post.
// Binary format: magic "EMB1", little-endian u64 N and d, the id table
// (u32 length + bytes each), then f32 rows. Chosen by `binary`.
void write_embeddings(const EmbeddingMatrix& m, const std::string& path,
                      bool binary = false);
EmbeddingMatrix read_embeddings(const std::string& path);

// Reads an embedding file and aligns its rows to corpus post order.
// Throws on missing post ids, dimension mismatch, or non-finite values.
EmbeddingMatrix import_embeddings(const std::string& path, const Corpus& corpus,
                                  bool normalize = true);

void l2_normalize_rows(EmbeddingMatrix& m);

// Cosine with the zero-vector convention: either side zero => 0.
double cosine(const float* a, const float* b, std::size_t dim);

}  // namespace textcoord

#endif  // TEXTCOORD_EMBEDDING_HPP
