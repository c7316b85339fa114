#ifndef TEXTCOORD_CORPUS_HPP
#define TEXTCOORD_CORPUS_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace textcoord {

/// One social-media message in normalized form.
struct Post {
  std::string post_id;
  std::string author_username;  // the @-name
  std::string author_name;      // free-text display name
  std::string body;
  bool is_echo = false;
  std::vector<std::string> hashtags;  // stored without '#', lowercased
  std::vector<std::string> mentions;
  std::vector<std::string> urls;
  bool has_media = false;
  long long echo_count = 0;
  long long impression_count = 0;
  long long upvote_count = 0;
  long long comment_count = 0;
  std::optional<std::string> timestamp;  // ISO-8601 UTC, kept verbatim
};

struct User {
  std::string username;
  std::string display_name;
  std::vector<std::size_t> post_indices;  // into Corpus::posts, load order
};

/// Immutable after load; users are derived by grouping posts on
/// author_username.
class Corpus {
 public:
  Corpus() = default;

  // Takes ownership of the posts and rebuilds the user index.
  // Throws std::runtime_error on duplicate post_id.
  static Corpus from_posts(std::vector<Post> posts);

  const std::vector<Post>& posts() const { return posts_; }
  const std::vector<User>& users() const { return users_; }

  const Post* find_post(const std::string& post_id) const;
  const User* find_user(const std::string& username) const;

  std::size_t n_posts() const { return posts_.size(); }
  std::size_t n_users() const { return users_.size(); }

 private:
  std::vector<Post> posts_;
  std::vector<User> users_;
  std::unordered_map<std::string, std::size_t> post_index_;
  std::unordered_map<std::string, std::size_t> user_index_;
};

enum class CorpusFormat { kJsonl, kCsv };

// Parses "jsonl" / "csv"; throws on anything else.
CorpusFormat parse_corpus_format(const std::string& name);

// Loads a corpus from a structured file. Malformed records, duplicate
// post ids and missing required fields raise std::runtime_error with the
// offending line number. Over-long bodies (>1000 chars) are accepted and
// reported through `warnings` when given.
Corpus load_corpus(const std::string& path, CorpusFormat format,
                   std::vector<std::string>* warnings = nullptr);

void save_corpus(const Corpus& corpus, const std::string& path,
                 CorpusFormat format);

// Keeps only original posts (is_echo = false); users left with no posts
// are dropped.
Corpus filter_originals(const Corpus& corpus);

}  // namespace textcoord

#endif  // TEXTCOORD_CORPUS_HPP
