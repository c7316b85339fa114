#include "textcoord/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "textcoord/analysis.hpp"

namespace textcoord {

namespace {

// splitmix64; self-contained so generated corpora are stable across
// standard-library versions
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return std::size_t(next() % n); }
  std::size_t in_range(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + below(hi - lo + 1);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(double(i + 1), exponent);
      cdf_[i] = total;
    }
    for (double& c : cdf_) c /= total;
  }
  std::size_t draw(Rng& rng) const {
    double u = rng.uniform();
    return std::size_t(std::lower_bound(cdf_.begin(), cdf_.end(), u) -
                       cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

std::string vocab_word(std::size_t index) {
  return "w" + std::to_string(index);
}

std::string join_tokens(const std::vector<std::size_t>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += vocab_word(tokens[i]);
  }
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_groups == 0 || users_per_group == 0 || posts_per_group_user == 0 ||
      vocabulary_size == 0 || posts_per_user_min == 0)
    throw std::runtime_error("scenario config: counts must be positive");
  if (posts_per_user_max < posts_per_user_min)
    throw std::runtime_error("scenario config: bad posts_per_user range");
  if (template_perturbation_rate < 0.0 || template_perturbation_rate > 1.0)
    throw std::runtime_error(
        "scenario config: template_perturbation_rate must be in [0,1]");
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario config " + path);

  std::unordered_map<std::string, std::string> kv;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json doc;
    in >> doc;
    for (const auto& [key, value] : doc.items())
      kv[key] = value.is_string() ? value.get<std::string>() : value.dump();
  } else {
    // flat TOML: `key = value` lines, '#' comments
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r\"");
        auto e = s.find_last_not_of(" \t\r\"");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }

  ScenarioConfig cfg;
  auto get_size = [&](const char* key, std::size_t& slot) {
    auto it = kv.find(key);
    if (it != kv.end()) slot = std::stoull(it->second);
  };
  get_size("n_background_users", cfg.n_background_users);
  get_size("posts_per_user_min", cfg.posts_per_user_min);
  get_size("posts_per_user_max", cfg.posts_per_user_max);
  get_size("n_groups", cfg.n_groups);
  get_size("users_per_group", cfg.users_per_group);
  get_size("posts_per_group_user", cfg.posts_per_group_user);
  get_size("vocabulary_size", cfg.vocabulary_size);
  if (auto it = kv.find("template_perturbation_rate"); it != kv.end())
    cfg.template_perturbation_rate = std::stod(it->second);
  if (auto it = kv.find("seed"); it != kv.end())
    cfg.seed = std::stoull(it->second);
  cfg.validate();
  return cfg;
}

std::pair<Corpus, GroundTruth> generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed * 0x2545f4914f6cdd1dull + 0x9e3779b97f4a7c15ull);
  ZipfSampler zipf(cfg.vocabulary_size, 1.1);

  std::vector<Post> posts;
  GroundTruth truth;
  std::size_t post_counter = 0;
  auto next_post_id = [&] {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%06zu", ++post_counter);
    return std::string(buf);
  };
  auto make_post = [&](const std::string& username, std::string body) {
    Post p;
    p.post_id = next_post_id();
    p.author_username = username;
    p.author_name = username;
    p.body = std::move(body);
    p.echo_count = static_cast<long long>(rng.below(5));
    p.impression_count = static_cast<long long>(10 + rng.below(200));
    p.upvote_count = static_cast<long long>(rng.below(30));
    p.comment_count = static_cast<long long>(rng.below(8));
    return p;
  };

  // planted groups: one template each, members post perturbed copies
  for (std::size_t g = 0; g < cfg.n_groups; ++g) {
    std::size_t template_len = rng.in_range(8, 20);
    std::vector<std::size_t> tmpl(template_len);
    for (auto& t : tmpl) t = rng.below(cfg.vocabulary_size);

    for (std::size_t u = 0; u < cfg.users_per_group; ++u) {
      std::string username =
          "grp" + std::to_string(g) + "_user" + std::to_string(u);
      truth.groups[username] = g;
      for (std::size_t n = 0; n < cfg.posts_per_group_user; ++n) {
        std::vector<std::size_t> toks = tmpl;
        for (auto& t : toks)
          if (rng.uniform() < cfg.template_perturbation_rate)
            t = rng.below(cfg.vocabulary_size);
        posts.push_back(make_post(username, join_tokens(toks)));
      }
    }
  }

  // background users: independent Zipf-token messages
  for (std::size_t u = 0; u < cfg.n_background_users; ++u) {
    std::string username = "bg_user" + std::to_string(u);
    std::size_t n_posts =
        rng.in_range(cfg.posts_per_user_min, cfg.posts_per_user_max);
    for (std::size_t n = 0; n < n_posts; ++n) {
      std::size_t len = rng.in_range(8, 20);
      std::vector<std::size_t> toks(len);
      for (auto& t : toks) t = zipf.draw(rng);
      posts.push_back(make_post(username, join_tokens(toks)));
    }
  }

  return {Corpus::from_posts(std::move(posts)), std::move(truth)};
}

void write_ground_truth_csv(const GroundTruth& truth, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "username,group_id\n";
  for (const auto& [username, group] : truth.groups)
    out << username << ',' << group << '\n';
}

GroundTruth read_ground_truth_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  GroundTruth truth;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": malformed ground-truth row");
    truth.groups[line.substr(0, comma)] = std::stoull(line.substr(comma + 1));
  }
  return truth;
}

DetectionScores score_detection(const CoordinationGraph& pruned,
                                const GroundTruth& truth) {
  DetectionScores scores;

  if (!pruned.edges.empty()) {
    std::size_t intra = 0;
    for (const auto& e : pruned.edges) {
      auto a = truth.groups.find(pruned.user_ids[e.a]);
      auto b = truth.groups.find(pruned.user_ids[e.b]);
      if (a != truth.groups.end() && b != truth.groups.end() &&
          a->second == b->second)
        ++intra;
    }
    scores.edge_precision = double(intra) / double(pruned.edges.size());
  }

  // component id per username
  auto components = connected_components(pruned);
  std::unordered_map<std::string, std::size_t> component_of;
  for (std::size_t ci = 0; ci < components.size(); ++ci)
    for (std::size_t ui : components[ci])
      component_of[pruned.user_ids[ui]] = ci;

  // recall over same-group pairs
  std::map<std::size_t, std::vector<std::string>> members;
  for (const auto& [username, group] : truth.groups)
    members[group].push_back(username);

  std::size_t pairs_total = 0, pairs_connected = 0;
  for (const auto& [group, users] : members) {
    for (std::size_t i = 0; i < users.size(); ++i) {
      for (std::size_t j = i + 1; j < users.size(); ++j) {
        ++pairs_total;
        auto a = component_of.find(users[i]);
        auto b = component_of.find(users[j]);
        if (a != component_of.end() && b != component_of.end() &&
            a->second == b->second)
          ++pairs_connected;
      }
    }
  }
  scores.edge_recall =
      pairs_total == 0 ? 0.0 : double(pairs_connected) / double(pairs_total);

  // group recovered when a strict majority shares one component
  std::size_t recovered = 0;
  for (const auto& [group, users] : members) {
    std::map<std::size_t, std::size_t> tally;
    for (const auto& username : users) {
      auto it = component_of.find(username);
      if (it != component_of.end()) tally[it->second] += 1;
    }
    for (const auto& [ci, count] : tally) {
      if (2 * count > users.size()) {
        ++recovered;
        break;
      }
    }
  }
  scores.group_recovery_rate =
      members.empty() ? 0.0 : double(recovered) / double(members.size());
  return scores;
}

}  // namespace textcoord
