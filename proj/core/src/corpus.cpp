#include "textcoord/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace textcoord {

namespace {

using nlohmann::json;

const char* const kColumns[] = {
    "post_id",       "author_username", "author_name",  "body",
    "is_echo",       "hashtags",        "mentions",     "urls",
    "has_media",     "echo_count",      "impression_count",
    "upvote_count",  "comment_count",   "timestamp"};
constexpr std::size_t kNumColumns = sizeof(kColumns) / sizeof(kColumns[0]);

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string normalize_hashtag(std::string tag) {
  if (!tag.empty() && tag.front() == '#') tag.erase(tag.begin());
  return lowercase(std::move(tag));
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_list(const std::string& joined) {
  std::vector<std::string> out;
  if (joined.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    std::size_t sep = joined.find(';', start);
    if (sep == std::string::npos) {
      out.push_back(joined.substr(start));
      return out;
    }
    out.push_back(joined.substr(start, sep - start));
    start = sep + 1;
  }
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ';';
    out += items[i];
  }
  return out;
}

long long parse_count(const json& v, const char* field, const std::string& path,
                      std::size_t line) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    fail_line(path, line, std::string("field '") + field + "' must be an integer");
  long long n = v.get<long long>();
  if (n < 0)
    fail_line(path, line, std::string("field '") + field + "' must be >= 0");
  return n;
}

Post post_from_json(const json& rec, const std::string& path, std::size_t line) {
  if (!rec.is_object()) fail_line(path, line, "record is not a JSON object");
  for (const char* col : kColumns) {
    if (!rec.contains(col))
      fail_line(path, line, std::string("missing required field '") + col + "'");
  }
  Post p;
  p.post_id = rec.at("post_id").get<std::string>();
  p.author_username = rec.at("author_username").get<std::string>();
  p.author_name = rec.at("author_name").get<std::string>();
  p.body = rec.at("body").get<std::string>();
  p.is_echo = rec.at("is_echo").get<bool>();
  for (const auto& t : rec.at("hashtags"))
    p.hashtags.push_back(normalize_hashtag(t.get<std::string>()));
  for (const auto& m : rec.at("mentions")) p.mentions.push_back(m.get<std::string>());
  for (const auto& u : rec.at("urls")) p.urls.push_back(u.get<std::string>());
  p.has_media = rec.at("has_media").get<bool>();
  p.echo_count = parse_count(rec.at("echo_count"), "echo_count", path, line);
  p.impression_count =
      parse_count(rec.at("impression_count"), "impression_count", path, line);
  p.upvote_count = parse_count(rec.at("upvote_count"), "upvote_count", path, line);
  p.comment_count = parse_count(rec.at("comment_count"), "comment_count", path, line);
  const auto& ts = rec.at("timestamp");
  if (!ts.is_null()) p.timestamp = ts.get<std::string>();
  return p;
}

json post_to_json(const Post& p) {
  json rec = json::object();
  rec["post_id"] = p.post_id;
  rec["author_username"] = p.author_username;
  rec["author_name"] = p.author_name;
  rec["body"] = p.body;
  rec["is_echo"] = p.is_echo;
  rec["hashtags"] = p.hashtags;
  rec["mentions"] = p.mentions;
  rec["urls"] = p.urls;
  rec["has_media"] = p.has_media;
  rec["echo_count"] = p.echo_count;
  rec["impression_count"] = p.impression_count;
  rec["upvote_count"] = p.upvote_count;
  rec["comment_count"] = p.comment_count;
  if (p.timestamp)
    rec["timestamp"] = *p.timestamp;
  else
    rec["timestamp"] = nullptr;
  return rec;
}

// RFC-4180-style row parser: quoted fields may contain commas and
// doubled quotes.
std::vector<std::string> parse_csv_row(const std::string& row,
                                       const std::string& path,
                                       std::size_t line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    char c = row[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < row.size() && row[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_quotes) fail_line(path, line, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

bool parse_bool_field(const std::string& s, const char* field,
                      const std::string& path, std::size_t line) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail_line(path, line, std::string("field '") + field + "' must be a boolean");
}

long long parse_count_field(const std::string& s, const char* field,
                            const std::string& path, std::size_t line) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    if (n < 0)
      fail_line(path, line, std::string("field '") + field + "' must be >= 0");
    return n;
  } catch (const std::logic_error&) {
    fail_line(path, line, std::string("field '") + field + "' must be an integer");
  }
}

Post post_from_csv(const std::vector<std::string>& f, const std::string& path,
                   std::size_t line) {
  Post p;
  p.post_id = f[0];
  p.author_username = f[1];
  p.author_name = f[2];
  p.body = f[3];
  p.is_echo = parse_bool_field(f[4], "is_echo", path, line);
  for (auto& t : split_list(f[5])) p.hashtags.push_back(normalize_hashtag(t));
  p.mentions = split_list(f[6]);
  p.urls = split_list(f[7]);
  p.has_media = parse_bool_field(f[8], "has_media", path, line);
  p.echo_count = parse_count_field(f[9], "echo_count", path, line);
  p.impression_count = parse_count_field(f[10], "impression_count", path, line);
  p.upvote_count = parse_count_field(f[11], "upvote_count", path, line);
  p.comment_count = parse_count_field(f[12], "comment_count", path, line);
  if (!f[13].empty()) p.timestamp = f[13];
  return p;
}

}  // namespace

Corpus Corpus::from_posts(std::vector<Post> posts) {
  Corpus c;
  c.posts_ = std::move(posts);
  for (std::size_t i = 0; i < c.posts_.size(); ++i) {
    const Post& p = c.posts_[i];
    if (!c.post_index_.emplace(p.post_id, i).second)
      throw std::runtime_error("duplicate post_id '" + p.post_id + "'");
    auto it = c.user_index_.find(p.author_username);
    if (it == c.user_index_.end()) {
      it = c.user_index_.emplace(p.author_username, c.users_.size()).first;
      c.users_.push_back(User{p.author_username, p.author_name, {}});
    }
    c.users_[it->second].post_indices.push_back(i);
  }
  return c;
}

const Post* Corpus::find_post(const std::string& post_id) const {
  auto it = post_index_.find(post_id);
  return it == post_index_.end() ? nullptr : &posts_[it->second];
}

const User* Corpus::find_user(const std::string& username) const {
  auto it = user_index_.find(username);
  return it == user_index_.end() ? nullptr : &users_[it->second];
}

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  throw std::runtime_error("unknown corpus format '" + name +
                           "' (expected jsonl or csv)");
}

Corpus load_corpus(const std::string& path, CorpusFormat format,
                   std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<Post> posts;
  std::string line;
  std::size_t line_no = 0;

  if (format == CorpusFormat::kCsv) {
    if (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto header = parse_csv_row(line, path, line_no);
      if (header.size() != kNumColumns)
        fail_line(path, line_no, "header has " + std::to_string(header.size()) +
                                     " columns, expected " +
                                     std::to_string(kNumColumns));
      for (std::size_t i = 0; i < kNumColumns; ++i) {
        if (header[i] != kColumns[i])
          fail_line(path, line_no, "unexpected header column '" + header[i] +
                                       "' (expected '" + kColumns[i] + "')");
      }
    }
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto fields = parse_csv_row(line, path, line_no);
      if (fields.size() != kNumColumns)
        fail_line(path, line_no, "record has " + std::to_string(fields.size()) +
                                     " fields, expected " +
                                     std::to_string(kNumColumns));
      posts.push_back(post_from_csv(fields, path, line_no));
    }
  } else {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::parse_error& e) {
        fail_line(path, line_no, std::string("malformed JSON: ") + e.what());
      }
      try {
        posts.push_back(post_from_json(rec, path, line_no));
      } catch (const json::exception& e) {
        fail_line(path, line_no, std::string("bad field type: ") + e.what());
      }
    }
  }

  if (warnings) {
    for (std::size_t i = 0; i < posts.size(); ++i) {
      if (posts[i].body.size() > 1000)
        warnings->push_back("post '" + posts[i].post_id + "': body exceeds " +
                            "1000 characters (" +
                            std::to_string(posts[i].body.size()) + ")");
    }
  }
  return Corpus::from_posts(std::move(posts));
}

void save_corpus(const Corpus& corpus, const std::string& path,
                 CorpusFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (format == CorpusFormat::kJsonl) {
    for (const Post& p : corpus.posts()) out << post_to_json(p).dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < kNumColumns; ++i)
    out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const Post& p : corpus.posts()) {
    out << csv_escape(p.post_id) << ',' << csv_escape(p.author_username) << ','
        << csv_escape(p.author_name) << ',' << csv_escape(p.body) << ','
        << (p.is_echo ? "true" : "false") << ','
        << csv_escape(join_list(p.hashtags)) << ','
        << csv_escape(join_list(p.mentions)) << ','
        << csv_escape(join_list(p.urls)) << ','
        << (p.has_media ? "true" : "false") << ',' << p.echo_count << ','
        << p.impression_count << ',' << p.upvote_count << ',' << p.comment_count
        << ',' << csv_escape(p.timestamp.value_or("")) << '\n';
  }
}

Corpus filter_originals(const Corpus& corpus) {
  std::vector<Post> kept;
  for (const Post& p : corpus.posts())
    if (!p.is_echo) kept.push_back(p);
  return Corpus::from_posts(std::move(kept));
}

}  // namespace textcoord
