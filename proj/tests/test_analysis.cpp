#include <doctest.h>

#include <random>

#include "textcoord/analysis.hpp"

using namespace textcoord;

namespace {

CoordinationGraph graph_of(std::size_t n_users,
                           const std::vector<std::tuple<std::size_t,
                                                        std::size_t, double>>&
                               edges) {
  CoordinationGraph g;
  g.pruned = true;
  for (std::size_t i = 0; i < n_users; ++i)
    g.user_ids.push_back("u" + std::to_string(i));
  for (const auto& [a, b, w] : edges) g.edges.push_back({a, b, w});
  return g;
}

Post post_of(const std::string& id, const std::string& user,
             const std::string& body) {
  Post p;
  p.post_id = id;
  p.author_username = user;
  p.author_name = user;
  p.body = body;
  return p;
}

}  // namespace

TEST_CASE("two disjoint edges form two clusters") {
  auto g = graph_of(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  auto components = connected_components(g);
  REQUIRE(components.size() == 2);
  CHECK(components[0].size() == 2);
  CHECK(components[1].size() == 2);
}

TEST_CASE("empty graph has no clusters") {
  auto g = graph_of(5, {});
  CHECK(connected_components(g).empty());
}

TEST_CASE("isolated nodes are excluded but components partition the rest") {
  auto g = graph_of(6, {{0, 1, 1.0}, {1, 2, 0.5}, {4, 5, 0.2}});
  auto components = connected_components(g);
  REQUIRE(components.size() == 2);
  CHECK(components[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(components[1] == std::vector<std::size_t>{4, 5});
  // node 3 is isolated: in no component
  std::size_t total = 0;
  for (const auto& c : components) total += c.size();
  CHECK(total == 5);
}

TEST_CASE("weighted degree of a star") {
  auto g = graph_of(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  auto degrees = weighted_degree(g);
  CHECK(degrees[0].weighted == doctest::Approx(3.0));
  CHECK(degrees[0].unweighted == 3);
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(degrees[i].weighted == doctest::Approx(1.0));
    CHECK(degrees[i].unweighted == 1);
  }
}

TEST_CASE("isolated node has zero degree") {
  auto g = graph_of(2, {});
  auto degrees = weighted_degree(g);
  CHECK(degrees[0].weighted == 0.0);
  CHECK(degrees[1].unweighted == 0);
}

TEST_CASE("degree sum equals twice the edge weight sum") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> dist(0.1, 2.0);
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = a + 1; b < 5; ++b)
      if (gen() % 2) edges.emplace_back(a, b, dist(gen));
  auto g = graph_of(5, edges);
  auto degrees = weighted_degree(g);

  double degree_sum = 0.0, edge_sum = 0.0;
  for (const auto& d : degrees) degree_sum += d.weighted;
  for (const auto& e : g.edges) edge_sum += e.weight;
  CHECK(degree_sum == doctest::Approx(2.0 * edge_sum).epsilon(1e-12));

  // per-node independent recomputation
  for (std::size_t i = 0; i < 5; ++i) {
    double expect = 0.0;
    for (const auto& e : g.edges)
      if (e.a == i || e.b == i) expect += e.weight;
    CHECK(degrees[i].weighted == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("top terms with stopwords and lexicographic tie break") {
  Post p1 = post_of("p1", "a", "stop the steal");
  Post p2 = post_of("p2", "a", "stop the count");
  std::vector<const Post*> posts = {&p1, &p2};
  auto terms = top_terms(posts, 3, {"the"});
  REQUIRE(terms.size() == 3);
  CHECK(terms[0] == std::pair<std::string, long long>{"stop", 2});
  CHECK(terms[1] == std::pair<std::string, long long>{"count", 1});
  CHECK(terms[2] == std::pair<std::string, long long>{"steal", 1});
}

TEST_CASE("top terms of nothing is empty; n beyond vocabulary returns all") {
  CHECK(top_terms({}, 5, {}).empty());
  Post p = post_of("p1", "a", "unique words only");
  auto terms = top_terms({&p}, 50, {});
  CHECK(terms.size() == 3);
}

TEST_CASE("top_terms(n) is a prefix of top_terms(n+1)") {
  Post p1 = post_of("p1", "a", "alpha beta beta gamma gamma gamma");
  Post p2 = post_of("p2", "a", "alpha delta delta");
  std::vector<const Post*> posts = {&p1, &p2};
  for (std::size_t n = 1; n < 5; ++n) {
    auto small = top_terms(posts, n, {});
    auto large = top_terms(posts, n + 1, {});
    for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == large[i]);
  }
}

TEST_CASE("engagement stats on a hand-computed fixture") {
  std::vector<Post> posts;
  for (long long imp : {10, 10, 40}) {
    Post p = post_of("p" + std::to_string(posts.size()), "solo", "text");
    p.impression_count = imp;
    posts.push_back(p);
  }
  Corpus corpus = Corpus::from_posts(std::move(posts));
  auto table = UserClassTable::defaults();
  auto assignments = classify_corpus(corpus, table);
  auto stats = engagement_stats(corpus, assignments, table);

  const auto& all = stats.at("all users");
  REQUIRE(all.impressions_per_post.has_value());
  CHECK(all.impressions_per_post->mean == doctest::Approx(20.0));
  CHECK(all.mode_impressions_per_post == 10);

  // user has no hashtag posts: the per-user average is 0
  REQUIRE(all.posts_with_hashtag_per_user.has_value());
  CHECK(all.posts_with_hashtag_per_user->mean == 0.0);
}

TEST_CASE("empty class reports null entries, not zeros") {
  std::vector<Post> posts = {post_of("p1", "nobody", "hello world")};
  Corpus corpus = Corpus::from_posts(std::move(posts));
  auto table = UserClassTable::defaults();
  auto stats = engagement_stats(corpus, classify_corpus(corpus, table), table);
  const auto& qanon = stats.at("qanon");
  CHECK(qanon.n_users == 0);
  CHECK_FALSE(qanon.echoes_made_per_user.has_value());
  CHECK_FALSE(qanon.mode_impressions_per_post.has_value());
}

TEST_CASE("engagement means match an independent single-pass oracle") {
  std::mt19937 gen(9);
  std::vector<Post> posts;
  for (int i = 0; i < 40; ++i) {
    Post p = post_of("p" + std::to_string(i),
                     "user" + std::to_string(gen() % 7), "body");
    p.upvote_count = gen() % 100;
    p.comment_count = gen() % 20;
    p.impression_count = gen() % 1000;
    p.is_echo = (gen() % 4) == 0;
    p.echo_count = gen() % 10;
    posts.push_back(p);
  }
  Corpus corpus = Corpus::from_posts(std::move(posts));
  auto table = UserClassTable::defaults();
  auto stats = engagement_stats(corpus, classify_corpus(corpus, table), table);

  double upvote_sum = 0.0;
  for (const Post& p : corpus.posts()) upvote_sum += double(p.upvote_count);
  double expect_mean = upvote_sum / double(corpus.n_posts());
  CHECK(stats.at("all users").upvotes_per_post->mean ==
        doctest::Approx(expect_mean).epsilon(1e-9));

  double echo_sum = 0.0;
  for (const User& u : corpus.users())
    for (std::size_t pi : u.post_indices)
      echo_sum += corpus.posts()[pi].is_echo ? 1.0 : 0.0;
  CHECK(stats.at("all users").echoes_made_per_user->mean ==
        doctest::Approx(echo_sum / double(corpus.n_users())).epsilon(1e-9));
}

TEST_CASE("rendered table has one row per statistic") {
  std::vector<Post> posts = {post_of("p1", "u", "x")};
  Corpus corpus = Corpus::from_posts(std::move(posts));
  auto table = UserClassTable::defaults();
  auto stats = engagement_stats(corpus, classify_corpus(corpus, table), table);
  auto rendered = render_engagement_table(stats, table.labels());
  CHECK(rendered.find("Avg. echos by users") != std::string::npos);
  CHECK(rendered.find("Mode impressions received per post") !=
        std::string::npos);
  CHECK(rendered.find("all users") != std::string::npos);
}

TEST_CASE("cluster reports carry composition, terms and representatives") {
  // users u0,u1 coordinate (posts share words); u2,u3 separately
  std::vector<Post> posts = {
      post_of("p1", "PatriotOne", "stop the steal now"),
      post_of("p2", "PatriotTwo", "stop the steal today"),
      post_of("p3", "NavyVet", "freedom convoy rolling"),
      post_of("p4", "bystander", "freedom convoy honking"),
  };
  Corpus corpus = Corpus::from_posts(std::move(posts));
  auto incidence = build_incidence(corpus);

  SimilarityGraph s;
  s.n = 4;
  s.neighbors.resize(4);
  auto add = [&](std::size_t a, std::size_t b, double w) {
    s.edges.push_back({a, b, w});
    s.neighbors[a].emplace_back(b, w);
    s.neighbors[b].emplace_back(a, w);
  };
  add(0, 1, 0.9);
  add(2, 3, 0.8);

  CoordinationGraph pruned;
  pruned.pruned = true;
  pruned.user_ids = incidence.user_ids;
  pruned.edges.push_back({0, 1, 0.9});
  pruned.edges.push_back({2, 3, 0.8});

  auto table = UserClassTable::defaults();
  auto assignments = classify_corpus(corpus, table);
  auto reports = cluster_reports(pruned, corpus, s, incidence, assignments,
                                 default_stopwords());
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].member_user_ids ==
        std::vector<std::string>{"PatriotOne", "PatriotTwo"});
  CHECK(reports[0].class_composition.at("patriot") == 2);
  REQUIRE(!reports[0].top_terms.empty());
  CHECK(reports[0].top_terms[0].first == "steal");
  CHECK(reports[0].representative_posts.size() == 2);
  CHECK(reports[1].class_composition.at("military/veteran") == 1);
}
