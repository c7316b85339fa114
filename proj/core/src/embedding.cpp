#include "textcoord/embedding.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace textcoord {

std::vector<std::string> text_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::uint64_t hashed_feature(const std::string& feature, std::uint64_t seed) {
  // FNV-1a over the seed bytes then the feature bytes
  std::uint64_t h = 14695981039346656037ull;
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  for (unsigned char c : feature) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

// unigram and bigram feature counts for one document, in sorted order so
// downstream accumulation is order-stable
std::map<std::string, int> document_features(const std::string& text) {
  std::map<std::string, int> feats;
  auto toks = text_tokens(text);
  for (const auto& t : toks) feats["u:" + t] += 1;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i)
    feats["b:" + toks[i] + ' ' + toks[i + 1]] += 1;
  return feats;
}

}  // namespace

EmbeddingMatrix embed_builtin(const std::vector<std::string>& texts,
                              std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw std::runtime_error("embed_builtin: dim must be >= 2");
  const std::size_t n = texts.size();

  std::vector<std::map<std::string, int>> features(n);
  for (std::size_t i = 0; i < n; ++i) features[i] = document_features(texts[i]);

  // document frequency over the input collection
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& feats : features)
    for (const auto& [f, _] : feats) df[f] += 1;

  EmbeddingMatrix m;
  m.post_ids.resize(n);
  m.dim = dim;
  m.data.assign(n * dim, 0.0f);

  std::vector<double> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (const auto& [f, tf] : features[i]) {
      double idf = std::log((1.0 + n) / (1.0 + df[f])) + 1.0;
      std::uint64_t h = hashed_feature(f, seed);
      std::size_t bucket = h % dim;
      double sign = (h >> 63) ? -1.0 : 1.0;
      row[bucket] += sign * tf * idf;
    }
    double norm_sq = 0.0;
    for (double v : row) norm_sq += v * v;
    if (norm_sq == 0.0) {
      m.zero_rows.push_back(i);
    } else {
      double inv = 1.0 / std::sqrt(norm_sq);
      for (std::size_t j = 0; j < dim; ++j)
        m.data[i * dim + j] = static_cast<float>(row[j] * inv);
    }
  }
  m.normalized = true;
  return m;
}

EmbeddingMatrix embed_corpus(const Corpus& corpus, std::size_t dim,
                             std::uint64_t seed) {
  std::vector<std::string> texts;
  texts.reserve(corpus.n_posts());
  for (const Post& p : corpus.posts()) texts.push_back(p.body);
  EmbeddingMatrix m = embed_builtin(texts, dim, seed);
  for (std::size_t i = 0; i < corpus.n_posts(); ++i)
    m.post_ids[i] = corpus.posts()[i].post_id;
  return m;
}

void l2_normalize_rows(EmbeddingMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    float* r = m.row(i);
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) norm_sq += double(r[j]) * r[j];
    if (norm_sq == 0.0) continue;
    double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t j = 0; j < m.dim; ++j)
      r[j] = static_cast<float>(r[j] * inv);
  }
  m.normalized = true;
}

double cosine(const float* a, const float* b, std::size_t dim) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    dot += double(a[j]) * b[j];
    na += double(a[j]) * a[j];
    nb += double(b[j]) * b[j];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

void write_embeddings(const EmbeddingMatrix& m, const std::string& path,
                      bool binary) {
  if (binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write("EMB1", 4);
    std::uint64_t n = m.rows(), d = m.dim;
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    for (const auto& id : m.post_ids) {
      std::uint32_t len = static_cast<std::uint32_t>(id.size());
      out.write(reinterpret_cast<const char*>(&len), 4);
      out.write(id.data(), len);
    }
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(float)));
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << m.rows() << ' ' << m.dim << '\n';
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << m.post_ids[i];
    const float* r = m.row(i);
    for (std::size_t j = 0; j < m.dim; ++j) {
      std::snprintf(buf, sizeof buf, " %.9g", double(r[j]));
      out << buf;
    }
    out << '\n';
  }
}

EmbeddingMatrix read_embeddings(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open " + path);
  char magic[4] = {};
  probe.read(magic, 4);
  if (probe.gcount() == 4 && std::memcmp(magic, "EMB1", 4) == 0) {
    std::uint64_t n = 0, d = 0;
    probe.read(reinterpret_cast<char*>(&n), 8);
    probe.read(reinterpret_cast<char*>(&d), 8);
    if (!probe) throw std::runtime_error(path + ": truncated header");
    EmbeddingMatrix m;
    m.dim = d;
    m.post_ids.resize(n);
    for (auto& id : m.post_ids) {
      std::uint32_t len = 0;
      probe.read(reinterpret_cast<char*>(&len), 4);
      id.resize(len);
      probe.read(id.data(), len);
      if (!probe) throw std::runtime_error(path + ": truncated id table");
    }
    m.data.resize(n * d);
    probe.read(reinterpret_cast<char*>(m.data.data()),
               static_cast<std::streamsize>(m.data.size() * sizeof(float)));
    if (!probe) throw std::runtime_error(path + ": truncated vector data");
    return m;
  }

  std::ifstream in(path);
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d)) throw std::runtime_error(path + ": bad header");
  EmbeddingMatrix m;
  m.dim = d;
  m.post_ids.resize(n);
  m.data.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> m.post_ids[i]))
      throw std::runtime_error(path + ": truncated at row " + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j) {
      if (!(in >> m.data[i * d + j]))
        throw std::runtime_error(path + ": truncated at row " +
                                 std::to_string(i));
    }
  }
  return m;
}

EmbeddingMatrix import_embeddings(const std::string& path, const Corpus& corpus,
                                  bool normalize) {
  EmbeddingMatrix raw = read_embeddings(path);
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < raw.rows(); ++i) by_id[raw.post_ids[i]] = i;

  EmbeddingMatrix m;
  m.dim = raw.dim;
  m.post_ids.reserve(corpus.n_posts());
  m.data.resize(corpus.n_posts() * raw.dim);
  for (std::size_t i = 0; i < corpus.n_posts(); ++i) {
    const std::string& id = corpus.posts()[i].post_id;
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw std::runtime_error(path + ": no embedding for post '" + id + "'");
    m.post_ids.push_back(id);
    const float* src = raw.row(it->second);
    for (std::size_t j = 0; j < raw.dim; ++j) {
      if (!std::isfinite(src[j]))
        throw std::runtime_error(path + ": non-finite value at row " +
                                 std::to_string(it->second) + " (post '" + id +
                                 "')");
      m.data[i * raw.dim + j] = src[j];
    }
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const float* r = m.row(i);
    bool all_zero = true;
    for (std::size_t j = 0; j < m.dim; ++j)
      if (r[j] != 0.0f) { all_zero = false; break; }
    if (all_zero) m.zero_rows.push_back(i);
  }
  if (normalize) l2_normalize_rows(m);
  return m;
}

}  // namespace textcoord
