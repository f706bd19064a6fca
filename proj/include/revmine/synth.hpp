#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "revmine/features.hpp"
#include "revmine/types.hpp"

namespace revmine {

struct IntRange {
  int lo = 0;
  int hi = 0;  // inclusive
};

struct NormalDist {
  double mean = 0.0;
  double std = 1.0;
};

// Revision counts per recipe: either uniform on an integer range or a
// rounded normal clamped at zero (used to plant group effects).
struct RevisionModel {
  enum class Kind { Uniform, Normal };
  Kind kind = Kind::Uniform;
  IntRange uniform{1, 4};
  NormalDist normal{1.5, 0.8};
};

struct SimPlan {
  std::uint64_t seed = 42;
  int users_per_group = 25;
  int recipes_per_user = 3;      // one topic pool per recipe ordinal
  int pool_size = 40;            // words per topic pool
  int words_per_draft = 20;
  int words_added_per_revision = 4;
  std::size_t embedding_dim = 50;
  double noise_scale = 0.02;     // word vectors cluster near pool centroids
  RevisionModel revisions_g1;
  RevisionModel revisions_g2;
  IntRange draft_deletions{0, 5};
  IntRange revision_deletions{2, 12};
  NormalDist keystroke_gap_ms{250.0, 60.0};
  double female_gap_factor = 1.0;  // < 1 plants a female efficiency advantage
  double female_p = 0.47;
  double male_p = 0.47;
  double other_p = 0.06;

  void validate() const;  // throws ConfigError on inconsistent parameters
};

SimPlan plan_from_json(const nlohmann::json& j);  // missing keys keep defaults
nlohmann::json plan_to_json(const SimPlan& plan);

// What the generator intended, recorded independently of the pipeline so it
// can serve as the oracle for every stage.
struct UserTruth {
  std::string user_id;
  Group group = Group::G1;
  Gender gender = Gender::Unknown;
  std::vector<std::size_t> boundaries;   // planted session starts (index 0 implicit)
  std::vector<EditCounts> entry_edits;   // per entry, in order
  std::vector<FeatureRecord> sessions;   // intended six feature values
  std::vector<std::string> trace;        // intended activity labels
};

struct GroundTruth {
  std::vector<UserTruth> users;
};

struct SynthResult {
  Corpus corpus;
  GroundTruth truth;
  // word -> embedding, pool by pool; dyadic components so downstream sums
  // are exact and the table round-trips through its text form losslessly
  std::vector<std::pair<std::string, std::vector<double>>> vocabulary;
};

// Deterministic for a given plan: one master generator for the vocabulary,
// one derived stream per user.
SynthResult generate_corpus(const SimPlan& plan);

void write_vector_file(std::ostream& out, const SynthResult& result);
void write_logs_jsonl(std::ostream& out, const Corpus& corpus);
void write_profiles_csv(std::ostream& out, const Corpus& corpus);
nlohmann::json truth_to_json(const GroundTruth& truth);

}  // namespace revmine
