#include "textcoord/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "textcoord/embedding.hpp"

namespace textcoord {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(var / double(xs.size()));
  return m;
}

}  // namespace

std::vector<std::vector<std::size_t>> connected_components(
    const CoordinationGraph& graph) {
  UnionFind uf(graph.user_ids.size());
  for (const auto& e : graph.edges) uf.unite(e.a, e.b);

  std::vector<bool> touched(graph.user_ids.size(), false);
  for (const auto& e : graph.edges) touched[e.a] = touched[e.b] = true;

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < graph.user_ids.size(); ++i)
    if (touched[i]) groups[uf.find(i)].push_back(i);

  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() > b.size();
                     return a.front() < b.front();
                   });
  return out;
}

std::vector<DegreeInfo> weighted_degree(const CoordinationGraph& graph) {
  std::vector<DegreeInfo> out(graph.user_ids.size());
  for (const auto& e : graph.edges) {
    out[e.a].weighted += e.weight;
    out[e.b].weighted += e.weight;
    out[e.a].unweighted += 1;
    out[e.b].unweighted += 1;
  }
  return out;
}

std::vector<std::pair<std::string, long long>> top_terms(
    const std::vector<const Post*>& posts, std::size_t n,
    const std::set<std::string>& stopwords) {
  std::unordered_map<std::string, long long> counts;
  for (const Post* p : posts)
    for (const auto& tok : text_tokens(p->body))
      if (!stopwords.count(tok)) counts[tok] += 1;

  std::vector<std::pair<std::string, long long>> out(counts.begin(),
                                                     counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

const std::set<std::string>& default_stopwords() {
  // standard 127-word English list; also shipped as data/stopwords.txt
  static const std::set<std::string> words = {
      "i",       "me",      "my",       "myself", "we",      "our",
      "ours",    "ourselves", "you",    "your",   "yours",   "yourself",
      "yourselves", "he",   "him",      "his",    "himself", "she",
      "her",     "hers",    "herself",  "it",     "its",     "itself",
      "they",    "them",    "their",    "theirs", "themselves", "what",
      "which",   "who",     "whom",     "this",   "that",    "these",
      "those",   "am",      "is",       "are",    "was",     "were",
      "be",      "been",    "being",    "have",   "has",     "had",
      "having",  "do",      "does",     "did",    "doing",   "a",
      "an",      "the",     "and",      "but",    "if",      "or",
      "because", "as",      "until",    "while",  "of",      "at",
      "by",      "for",     "with",     "about",  "against", "between",
      "into",    "through", "during",   "before", "after",   "above",
      "below",   "to",      "from",     "up",     "down",    "in",
      "out",     "on",      "off",      "over",   "under",   "again",
      "further", "then",    "once",     "here",   "there",   "when",
      "where",   "why",     "how",      "all",    "any",     "both",
      "each",    "few",     "more",     "most",   "other",   "some",
      "such",    "no",      "nor",      "not",    "only",    "own",
      "same",    "so",      "than",     "too",    "very",    "s",
      "t",       "can",     "will",     "just",   "don",     "should",
      "now"};
  return words;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword list " + path);
  std::set<std::string> out;
  std::string word;
  while (in >> word) out.insert(word);
  return out;
}

std::vector<ClusterReport> cluster_reports(
    const CoordinationGraph& pruned, const Corpus& corpus,
    const SimilarityGraph& similarity, const IncidenceMatrix& incidence,
    const std::vector<ClassAssignment>& assignments,
    const std::set<std::string>& stopwords, std::size_t terms_per_cluster) {
  std::unordered_map<std::string, const ClassAssignment*> by_user;
  for (const auto& a : assignments) by_user[a.username] = &a;

  std::unordered_map<std::string, std::size_t> incidence_user;
  for (std::size_t i = 0; i < incidence.user_ids.size(); ++i)
    incidence_user[incidence.user_ids[i]] = i;

  auto components = connected_components(pruned);
  std::vector<ClusterReport> reports;
  reports.reserve(components.size());

  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    ClusterReport rep;
    rep.cluster_id = ci;
    for (std::size_t ui : components[ci])
      rep.member_user_ids.push_back(pruned.user_ids[ui]);
    std::sort(rep.member_user_ids.begin(), rep.member_user_ids.end());

    // class composition
    for (const auto& username : rep.member_user_ids) {
      auto it = by_user.find(username);
      if (it == by_user.end()) continue;
      for (const auto& label : it->second->classes)
        rep.class_composition[label] += 1;
    }

    // cluster post set via incidence
    std::vector<std::size_t> cluster_posts;
    std::unordered_set<std::size_t> in_cluster;
    for (const auto& username : rep.member_user_ids) {
      auto it = incidence_user.find(username);
      if (it == incidence_user.end()) continue;
      for (std::size_t pi : incidence.user_posts[it->second]) {
        cluster_posts.push_back(pi);
        in_cluster.insert(pi);
      }
    }
    std::sort(cluster_posts.begin(), cluster_posts.end());

    std::vector<const Post*> post_ptrs;
    for (std::size_t pi : cluster_posts) {
      const Post* p = corpus.find_post(incidence.post_ids[pi]);
      if (p) post_ptrs.push_back(p);
    }
    rep.top_terms = top_terms(post_ptrs, terms_per_cluster, stopwords);

    // representative posts: highest within-cluster similarity mass
    std::vector<std::pair<double, std::size_t>> mass;
    for (std::size_t pi : cluster_posts) {
      double m = 0.0;
      for (const auto& [q, w] : similarity.neighbors[pi])
        if (in_cluster.count(q)) m += w;
      mass.emplace_back(m, pi);
    }
    std::sort(mass.begin(), mass.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, mass.size()); ++i)
      rep.representative_posts.push_back(incidence.post_ids[mass[i].second]);

    reports.push_back(std::move(rep));
  }
  return reports;
}

std::map<std::string, ClassEngagement> engagement_stats(
    const Corpus& corpus, const std::vector<ClassAssignment>& assignments,
    const UserClassTable& table) {
  std::unordered_map<std::string, const ClassAssignment*> by_user;
  for (const auto& a : assignments) by_user[a.username] = &a;

  std::vector<std::string> keys = {"all users"};
  for (const auto& label : table.labels()) keys.push_back(label);

  std::map<std::string, ClassEngagement> out;
  for (const auto& key : keys) {
    std::vector<const User*> members;
    for (const User& u : corpus.users()) {
      if (key == "all users") {
        members.push_back(&u);
        continue;
      }
      auto it = by_user.find(u.username);
      if (it != by_user.end() && it->second->classes.count(key))
        members.push_back(&u);
    }

    ClassEngagement eng;
    eng.n_users = static_cast<long long>(members.size());
    if (members.empty()) {
      out.emplace(key, std::move(eng));
      continue;
    }

    std::vector<double> echoes_made, times_echoed, with_mention, with_hashtag,
        with_url, with_media;
    std::vector<double> comments, upvotes, impressions;
    std::unordered_map<long long, long long> impression_freq;

    for (const User* u : members) {
      double n_echo = 0, n_times = 0, n_mention = 0, n_hashtag = 0, n_url = 0,
             n_media = 0;
      for (std::size_t pi : u->post_indices) {
        const Post& p = corpus.posts()[pi];
        eng.n_posts += 1;
        if (p.is_echo) n_echo += 1;
        n_times += double(p.echo_count);
        if (!p.mentions.empty()) n_mention += 1;
        if (!p.hashtags.empty()) n_hashtag += 1;
        if (!p.urls.empty()) n_url += 1;
        if (p.has_media) n_media += 1;
        comments.push_back(double(p.comment_count));
        upvotes.push_back(double(p.upvote_count));
        impressions.push_back(double(p.impression_count));
        impression_freq[p.impression_count] += 1;
      }
      echoes_made.push_back(n_echo);
      times_echoed.push_back(n_times);
      with_mention.push_back(n_mention);
      with_hashtag.push_back(n_hashtag);
      with_url.push_back(n_url);
      with_media.push_back(n_media);
    }

    eng.echoes_made_per_user = mean_std(echoes_made);
    eng.times_echoed_per_user = mean_std(times_echoed);
    eng.posts_with_mention_per_user = mean_std(with_mention);
    eng.posts_with_hashtag_per_user = mean_std(with_hashtag);
    eng.posts_with_url_per_user = mean_std(with_url);
    eng.posts_with_media_per_user = mean_std(with_media);
    if (!comments.empty()) {
      eng.comments_per_post = mean_std(comments);
      eng.upvotes_per_post = mean_std(upvotes);
      eng.impressions_per_post = mean_std(impressions);
      long long best_value = 0, best_count = -1;
      for (const auto& [value, count] : impression_freq) {
        if (count > best_count || (count == best_count && value < best_value)) {
          best_value = value;
          best_count = count;
        }
      }
      eng.mode_impressions_per_post = best_value;
    }
    out.emplace(key, std::move(eng));
  }
  return out;
}

namespace {

std::string fmt_ms(const std::optional<MeanStd>& ms) {
  if (!ms) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f+/-%.2f", ms->mean, ms->stddev);
  return buf;
}

}  // namespace

std::string render_engagement_table(
    const std::map<std::string, ClassEngagement>& stats,
    const std::vector<std::string>& class_order) {
  std::vector<std::string> cols = {"all users"};
  for (const auto& c : class_order)
    if (c != "all users") cols.push_back(c);

  struct Row {
    std::string label;
    std::function<std::string(const ClassEngagement&)> value;
  };
  std::vector<Row> rows = {
      {"Avg. echos by users",
       [](const ClassEngagement& e) { return fmt_ms(e.echoes_made_per_user); }},
      {"Avg. users echoed",
       [](const ClassEngagement& e) { return fmt_ms(e.times_echoed_per_user); }},
      {"Avg. posts per user with a mention",
       [](const ClassEngagement& e) { return fmt_ms(e.posts_with_mention_per_user); }},
      {"Avg. posts per user with a hashtag",
       [](const ClassEngagement& e) { return fmt_ms(e.posts_with_hashtag_per_user); }},
      {"Avg. posts per user with a URL",
       [](const ClassEngagement& e) { return fmt_ms(e.posts_with_url_per_user); }},
      {"Avg. posts per user with media",
       [](const ClassEngagement& e) { return fmt_ms(e.posts_with_media_per_user); }},
      {"Avg. comments received per post",
       [](const ClassEngagement& e) { return fmt_ms(e.comments_per_post); }},
      {"Avg. upvotes received per post",
       [](const ClassEngagement& e) { return fmt_ms(e.upvotes_per_post); }},
      {"Avg. impressions received per post",
       [](const ClassEngagement& e) { return fmt_ms(e.impressions_per_post); }},
      {"Mode impressions received per post",
       [](const ClassEngagement& e) {
         return e.mode_impressions_per_post
                    ? std::to_string(*e.mode_impressions_per_post)
                    : std::string("-");
       }},
  };

  std::ostringstream out;
  out << std::left;
  out.width(38);
  out << "";
  for (const auto& c : cols) {
    out.width(22);
    out << c;
  }
  out << '\n';
  for (const auto& row : rows) {
    out.width(38);
    out << row.label;
    for (const auto& c : cols) {
      out.width(22);
      auto it = stats.find(c);
      out << (it == stats.end() ? "-" : row.value(it->second));
    }
    out << '\n';
  }
  return out.str();
}

void write_cluster_dot(const CoordinationGraph& pruned,
                       const std::vector<ClassAssignment>& assignments,
                       const std::string& path) {
  std::unordered_map<std::string, const ClassAssignment*> by_user;
  for (const auto& a : assignments) by_user[a.username] = &a;
  auto color_of = [&](const std::string& username) -> std::string {
    auto it = by_user.find(username);
    if (it == by_user.end() || it->second->classes.empty()) return "gray";
    // Fig-style palette; first matching class wins for multi-label users
    if (it->second->classes.count("military/veteran")) return "blue";
    if (it->second->classes.count("patriot")) return "red";
    if (it->second->classes.count("qanon")) return "green";
    return "gray";
  };

  auto degrees = weighted_degree(pruned);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "graph coordination {\n  node [style=filled];\n";
  char buf[64];
  for (std::size_t i = 0; i < pruned.user_ids.size(); ++i) {
    if (degrees[i].unweighted == 0) continue;
    double size = 0.3 + 0.15 * std::sqrt(degrees[i].weighted);
    std::snprintf(buf, sizeof buf, "%.3f", size);
    out << "  \"" << pruned.user_ids[i] << "\" [fillcolor="
        << color_of(pruned.user_ids[i]) << ", width=" << buf << "];\n";
  }
  for (const auto& e : pruned.edges) {
    std::snprintf(buf, sizeof buf, "%.6f", e.weight);
    out << "  \"" << pruned.user_ids[e.a] << "\" -- \""
        << pruned.user_ids[e.b] << "\" [weight=" << buf << "];\n";
  }
  out << "}\n";
}

}  // namespace textcoord
