#include "textcoord/inducer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace textcoord {

IncidenceMatrix build_incidence(const Corpus& corpus) {
  for (const Post& p : corpus.posts()) {
    if (p.is_echo)
      throw std::runtime_error(
          "build_incidence: corpus contains echo posts; run filter_originals "
          "first (post '" + p.post_id + "')");
  }
  IncidenceMatrix b;
  b.user_ids.reserve(corpus.n_users());
  b.post_ids.reserve(corpus.n_posts());
  b.post_owner.resize(corpus.n_posts());
  b.user_posts.resize(corpus.n_users());
  for (const User& u : corpus.users()) b.user_ids.push_back(u.username);
  for (const Post& p : corpus.posts()) b.post_ids.push_back(p.post_id);
  for (std::size_t ui = 0; ui < corpus.n_users(); ++ui) {
    for (std::size_t pi : corpus.users()[ui].post_indices) {
      b.post_owner[pi] = ui;
      b.user_posts[ui].push_back(pi);
    }
  }
  return b;
}

CoordinationGraph induce(const IncidenceMatrix& incidence,
                         const SimilarityGraph& similarity) {
  if (incidence.post_ids.size() != similarity.n)
    throw std::runtime_error("induce: post dimension mismatch (" +
                             std::to_string(incidence.post_ids.size()) +
                             " vs " + std::to_string(similarity.n) + ")");

  // each undirected S edge {p,q} adds its weight to U(owner p, owner q);
  // same-owner pairs are the zeroed diagonal
  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (const auto& e : similarity.edges) {
    std::size_t u = incidence.post_owner[e.a];
    std::size_t v = incidence.post_owner[e.b];
    if (u == v) continue;
    acc[{std::min(u, v), std::max(u, v)}] += e.weight;
  }

  CoordinationGraph g;
  g.user_ids = incidence.user_ids;
  g.edges.reserve(acc.size());
  for (const auto& [key, w] : acc) g.edges.push_back({key.first, key.second, w});
  return g;
}

CoordinationGraph prune(const CoordinationGraph& graph, double std_multiplier,
                        bool population_stddev, PruneReport* report) {
  if (graph.pruned) throw std::runtime_error("prune: graph already pruned");
  std::vector<double> weights;
  for (const auto& e : graph.edges)
    if (e.weight != 0.0) weights.push_back(e.weight);
  if (weights.empty()) throw std::runtime_error("prune: graph has no edges");

  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= double(weights.size());
  double var = 0.0;
  for (double w : weights) var += (w - mean) * (w - mean);
  std::size_t denom = population_stddev ? weights.size() : weights.size() - 1;
  double sigma = denom == 0 ? 0.0 : std::sqrt(var / double(denom));
  double threshold = mean + std_multiplier * sigma;

  CoordinationGraph out;
  out.user_ids = graph.user_ids;
  out.pruned = true;
  out.threshold = threshold;
  out.mean = mean;
  out.stddev = sigma;
  for (const auto& e : graph.edges)
    if (e.weight > threshold) out.edges.push_back(e);

  if (report) {
    report->mean = mean;
    report->stddev = sigma;
    report->threshold = threshold;
    report->n_edges_before = weights.size();
    report->n_edges_after = out.edges.size();
    report->degenerate = out.edges.empty();
  }
  return out;
}

void write_coordination_csv(const CoordinationGraph& graph,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "src_user,dst_user,weight\n";
  char buf[32];
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "%.6f", e.weight);
    out << graph.user_ids[e.a] << ',' << graph.user_ids[e.b] << ',' << buf
        << '\n';
  }
}

CoordinationGraph read_coordination_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CoordinationGraph g;
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    index.emplace(name, g.user_ids.size());
    g.user_ids.push_back(name);
    return g.user_ids.size() - 1;
  };
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
    std::size_t a = intern(src), b = intern(dst);
    if (a > b) std::swap(a, b);
    g.edges.push_back({a, b, std::stod(weight)});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return g;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_coordination_graphml(
    const CoordinationGraph& graph,
    const std::vector<std::string>& node_class_lists, const std::string& path) {
  if (node_class_lists.size() != graph.user_ids.size())
    throw std::runtime_error("graphml: class list size mismatch");

  std::vector<double> degree(graph.user_ids.size(), 0.0);
  for (const auto& e : graph.edges) {
    degree[e.a] += e.weight;
    degree[e.b] += e.weight;
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"d0\" for=\"node\" attr.name=\"user_class_list\" "
         "attr.type=\"string\"/>\n"
         "  <key id=\"d1\" for=\"node\" attr.name=\"weighted_degree\" "
         "attr.type=\"double\"/>\n"
         "  <key id=\"d2\" for=\"edge\" attr.name=\"weight\" "
         "attr.type=\"double\"/>\n"
         "  <graph id=\"U\" edgedefault=\"undirected\">\n";
  char buf[32];
  for (std::size_t i = 0; i < graph.user_ids.size(); ++i) {
    if (graph.pruned && degree[i] == 0.0) continue;  // isolated, not exported
    std::snprintf(buf, sizeof buf, "%.6f", degree[i]);
    out << "    <node id=\"" << xml_escape(graph.user_ids[i]) << "\">"
        << "<data key=\"d0\">" << xml_escape(node_class_lists[i]) << "</data>"
        << "<data key=\"d1\">" << buf << "</data></node>\n";
  }
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "%.6f", e.weight);
    out << "    <edge source=\"" << xml_escape(graph.user_ids[e.a])
        << "\" target=\"" << xml_escape(graph.user_ids[e.b]) << "\">"
        << "<data key=\"d2\">" << buf << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

}  // namespace textcoord
