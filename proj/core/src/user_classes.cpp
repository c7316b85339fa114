#include "textcoord/user_classes.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace textcoord {

namespace {

bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }
bool is_upper(unsigned char c) { return std::isupper(c) != 0; }
bool is_lower(unsigned char c) { return std::islower(c) != 0; }

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Matches term tokens as a consecutive run inside `tokens`.
bool contains_sequence(const std::vector<std::string>& tokens,
                       const std::vector<std::string>& seq) {
  if (seq.empty() || seq.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + seq.size() <= tokens.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (tokens[i + j] != seq[j]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> hard_tokens(const std::string& name) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : name) {
    if (is_alnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> name_tokens(const std::string& name) {
  // delimiter split first, then camel boundaries inside each word:
  // aB splits between a and B; ABc splits between A and Bc.
  std::vector<std::string> words;
  std::string raw;
  unsigned char prev = 0;
  for (unsigned char c : name) {
    if (!is_alnum(c)) {
      if (!raw.empty()) {
        words.push_back(raw);
        raw.clear();
      }
      prev = 0;
      continue;
    }
    if (!raw.empty() && is_upper(c) && is_lower(prev)) {
      words.push_back(raw);
      raw.clear();
    }
    raw += static_cast<char>(c);
    prev = c;
  }
  if (!raw.empty()) words.push_back(raw);

  std::vector<std::string> result;
  for (const std::string& word : words) {
    std::size_t start = 0;
    for (std::size_t i = 1; i + 1 < word.size(); ++i) {
      if (is_upper(word[i]) && is_lower(word[i + 1]) && is_upper(word[i - 1]) &&
          i > start) {
        result.push_back(to_lower(word.substr(start, i - start)));
        start = i;
      }
    }
    result.push_back(to_lower(word.substr(start)));
  }
  return result;
}

UserClassTable UserClassTable::defaults() {
  UserClassTable t;
  t.add_class("military/veteran",
              {"army", "navy", "air force", "airforce", "marine", "veteran",
               "military", "servicemember", "coastguard", "coast guard",
               "soldier", "infantry", "sergeant"});
  t.add_class("patriot", {"patriot"});
  t.add_class("qanon", {"qanon", "wwg1wga", "q", "thegreatawakening",
                        "thestorm", "theplan"});
  return t;
}

UserClassTable UserClassTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class table " + path);
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_object())
    throw std::runtime_error(path + ": class table must be a JSON object");
  UserClassTable t;
  for (const auto& [label, terms] : doc.items()) {
    std::vector<std::string> list;
    for (const auto& term : terms) list.push_back(term.get<std::string>());
    t.add_class(label, std::move(list));
  }
  return t;
}

void UserClassTable::add_class(const std::string& label,
                               std::vector<std::string> terms) {
  if (terms.empty())
    throw std::runtime_error("class '" + label + "' has an empty term list");
  if (terms_.count(label))
    throw std::runtime_error("duplicate class label '" + label + "'");
  for (std::string& term : terms) term = to_lower(std::move(term));
  labels_.push_back(label);
  terms_.emplace(label, std::move(terms));
}

const std::vector<std::string>& UserClassTable::terms(
    const std::string& label) const {
  auto it = terms_.find(label);
  if (it == terms_.end())
    throw std::runtime_error("unknown class label '" + label + "'");
  return it->second;
}

ClassAssignment classify_user(const User& user, const UserClassTable& table) {
  auto display_toks = name_tokens(user.display_name);
  auto handle_toks = name_tokens(user.username);
  auto display_hard = hard_tokens(user.display_name);
  auto handle_hard = hard_tokens(user.username);

  ClassAssignment out;
  out.username = user.username;
  for (const std::string& label : table.labels()) {
    for (const std::string& term : table.terms(label)) {
      bool hit;
      if (term.size() == 1) {
        // single-letter terms only match standalone delimiter-bounded tokens
        hit = contains_sequence(display_hard, {term}) ||
              contains_sequence(handle_hard, {term});
      } else {
        // camel-split view catches "PatriotGal"; the hard view catches
        // glued terms like "TheGreatAwakening" as one token
        auto seq = hard_tokens(term);
        hit = contains_sequence(display_toks, seq) ||
              contains_sequence(handle_toks, seq) ||
              contains_sequence(display_hard, seq) ||
              contains_sequence(handle_hard, seq);
      }
      if (hit) {
        out.classes.insert(label);
        break;
      }
    }
  }
  return out;
}

std::vector<ClassAssignment> classify_corpus(const Corpus& corpus,
                                             const UserClassTable& table) {
  std::vector<ClassAssignment> out;
  out.reserve(corpus.n_users());
  for (const User& u : corpus.users()) out.push_back(classify_user(u, table));
  return out;
}

std::map<std::string, ClassCensusRow> class_census(const Corpus& corpus,
                                                   const UserClassTable& table) {
  if (corpus.n_posts() == 0 || corpus.n_users() == 0)
    throw std::runtime_error("class_census: empty corpus");

  std::map<std::string, ClassCensusRow> rows;
  for (const std::string& label : table.labels()) rows[label] = {};

  for (const User& u : corpus.users()) {
    auto assignment = classify_user(u, table);
    for (const std::string& label : assignment.classes) {
      ClassCensusRow& row = rows[label];
      row.account_count += 1;
      row.post_count += static_cast<long long>(u.post_indices.size());
    }
  }
  auto round4 = [](double x) { return std::round(x * 10000.0) / 10000.0; };
  for (auto& [label, row] : rows) {
    row.account_share =
        round4(static_cast<double>(row.account_count) / corpus.n_users());
    row.post_share =
        round4(static_cast<double>(row.post_count) / corpus.n_posts());
  }
  return rows;
}

}  // namespace textcoord
