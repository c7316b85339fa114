#ifndef TEXTCOORD_ANALYSIS_HPP
#define TEXTCOORD_ANALYSIS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "textcoord/corpus.hpp"
#include "textcoord/inducer.hpp"
#include "textcoord/knn.hpp"
#include "textcoord/user_classes.hpp"

namespace textcoord {

struct ClusterReport {
  std::size_t cluster_id = 0;
  std::vector<std::string> member_user_ids;           // sorted
  std::map<std::string, std::size_t> class_composition;
  std::vector<std::pair<std::string, long long>> top_terms;
  std::vector<std::string> representative_posts;      // up to 3 post ids
};

struct DegreeInfo {
  double weighted = 0.0;
  std::size_t unweighted = 0;
};

// Connected components of the pruned graph, largest first; isolated nodes
// are skipped. Ties on size broken by smallest member index.
std::vector<std::vector<std::size_t>> connected_components(
    const CoordinationGraph& graph);

std::vector<DegreeInfo> weighted_degree(const CoordinationGraph& graph);

// Lowercase tokens minus stopwords, counted; ties broken lexicographically.
std::vector<std::pair<std::string, long long>> top_terms(
    const std::vector<const Post*>& posts, std::size_t n,
    const std::set<std::string>& stopwords);

const std::set<std::string>& default_stopwords();
std::set<std::string> load_stopwords(const std::string& path);

// Full cluster reports: membership, class composition, top terms, and the
// 3 posts with the highest within-cluster similarity mass.
std::vector<ClusterReport> cluster_reports(
    const CoordinationGraph& pruned, const Corpus& corpus,
    const SimilarityGraph& similarity, const IncidenceMatrix& incidence,
    const std::vector<ClassAssignment>& assignments,
    const std::set<std::string>& stopwords, std::size_t terms_per_cluster = 10);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

/// Per-class social-media usage statistics; std::nullopt when the class
/// has no members.
struct ClassEngagement {
  long long n_users = 0;
  long long n_posts = 0;
  std::optional<MeanStd> echoes_made_per_user;
  std::optional<MeanStd> times_echoed_per_user;
  std::optional<MeanStd> posts_with_mention_per_user;
  std::optional<MeanStd> posts_with_hashtag_per_user;
  std::optional<MeanStd> posts_with_url_per_user;
  std::optional<MeanStd> posts_with_media_per_user;
  std::optional<MeanStd> comments_per_post;
  std::optional<MeanStd> upvotes_per_post;
  std::optional<MeanStd> impressions_per_post;
  std::optional<long long> mode_impressions_per_post;
};

// Keyed by class label plus "all users". Expects the full corpus
// (originals and echoes), not the filtered one.
std::map<std::string, ClassEngagement> engagement_stats(
    const Corpus& corpus, const std::vector<ClassAssignment>& assignments,
    const UserClassTable& table);

// Plain-text table, one statistic per row, classes as columns.
std::string render_engagement_table(
    const std::map<std::string, ClassEngagement>& stats,
    const std::vector<std::string>& class_order);

// DOT export with class colors (military/veteran=blue, patriot=red,
// qanon=green) and degree-proportional node sizes.
void write_cluster_dot(const CoordinationGraph& pruned,
                       const std::vector<ClassAssignment>& assignments,
                       const std::string& path);

}  // namespace textcoord

#endif  // TEXTCOORD_ANALYSIS_HPP
