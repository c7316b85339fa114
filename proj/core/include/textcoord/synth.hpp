#ifndef TEXTCOORD_SYNTH_HPP
#define TEXTCOORD_SYNTH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "textcoord/corpus.hpp"
#include "textcoord/inducer.hpp"

namespace textcoord {

/// Parameters for a planted-group scenario: coordinated groups post
/// perturbed copies of a shared template over a background of independent
/// random posters.
struct ScenarioConfig {
  std::size_t n_background_users = 500;
  std::size_t posts_per_user_min = 1;
  std::size_t posts_per_user_max = 3;
  std::size_t n_groups = 3;
  std::size_t users_per_group = 10;
  std::size_t posts_per_group_user = 5;
  double template_perturbation_rate = 0.1;  // fraction of tokens replaced
  std::size_t vocabulary_size = 2000;
  std::uint64_t seed = 1;

  void validate() const;  // throws on bad counts / rate out of [0,1]

  // .json, or flat key = value .toml
  static ScenarioConfig from_file(const std::string& path);
};

struct GroundTruth {
  // username -> group id; background users are absent
  std::map<std::string, std::size_t> groups;
};

std::pair<Corpus, GroundTruth> generate_scenario(const ScenarioConfig& cfg);

// "username,group_id" rows
void write_ground_truth_csv(const GroundTruth& truth, const std::string& path);
GroundTruth read_ground_truth_csv(const std::string& path);

struct DetectionScores {
  std::optional<double> edge_precision;  // nullopt when U' has no edges
  double edge_recall = 0.0;       // same-group pairs sharing a component
  double group_recovery_rate = 0.0;  // groups with a majority in one component
};

DetectionScores score_detection(const CoordinationGraph& pruned,
                                const GroundTruth& truth);

}  // namespace textcoord

#endif  // TEXTCOORD_SYNTH_HPP
