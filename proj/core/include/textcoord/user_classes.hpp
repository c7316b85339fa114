#ifndef TEXTCOORD_USER_CLASSES_HPP
#define TEXTCOORD_USER_CLASSES_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "textcoord/corpus.hpp"

namespace textcoord {

/// Term lists defining heuristic user classes. Terms are stored lowercase;
/// matching is done on tokenized account names, not raw substrings.
class UserClassTable {
 public:
  // label -> terms; labels kept in insertion order for stable reports.
  static UserClassTable defaults();

  // JSON object {label: [terms...]}. Throws on empty term lists.
  static UserClassTable from_file(const std::string& path);

  void add_class(const std::string& label, std::vector<std::string> terms);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& terms(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::vector<std::string>> terms_;
};

struct ClassAssignment {
  std::string username;
  std::set<std::string> classes;
};

// Splits on non-alphanumeric boundaries and lower->upper camel-case
// transitions; tokens come out lowercased. "QPatriotArmyWife" ->
// {q, patriot, army, wife}.
std::vector<std::string> name_tokens(const std::string& name);

// Non-alphanumeric boundaries only. Single-letter terms ("q") match
// against these tokens exclusively, so "Q" inside a camel-cased handle
// does not count as standalone.
std::vector<std::string> hard_tokens(const std::string& name);

ClassAssignment classify_user(const User& user, const UserClassTable& table);

struct ClassCensusRow {
  long long account_count = 0;
  double account_share = 0.0;  // rounded to 4 decimals
  long long post_count = 0;
  double post_share = 0.0;
};

// Per-class account/post counts and shares over the whole corpus.
// Multi-label users are counted once per class. Throws on empty corpus.
std::map<std::string, ClassCensusRow> class_census(const Corpus& corpus,
                                                   const UserClassTable& table);

std::vector<ClassAssignment> classify_corpus(const Corpus& corpus,
                                             const UserClassTable& table);

}  // namespace textcoord

#endif  // TEXTCOORD_USER_CLASSES_HPP
