#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revmine/sessionizer.hpp"
#include "revmine/types.hpp"

namespace revmine {

struct EditCounts {
  std::int64_t insertions = 0;  // Character events, whitespace included
  std::int64_t deletions = 0;   // Backspace + Delete events

  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Other events (modifiers etc.) are ignored.
EditCounts count_edits(std::span<const KeystrokeEvent> keystrokes);

// Mean inter-key interval in seconds; nullopt for fewer than two events.
std::optional<double> pause_mean(std::span<const KeystrokeEvent> keystrokes);

// Active typing time of one entry: last minus first keystroke time. Entries
// with fewer than two keystrokes contribute zero.
double active_time_s(std::span<const KeystrokeEvent> keystrokes);

// Per-(user, recipe) values of the six SRL feature variables. Edits, revising
// time, DIRatio and pause statistics cover revision entries only; efficiency
// is a general writing speed over the whole session (draft included).
struct FeatureRecord {
  std::string user_id;
  int recipe_ordinal = 1;
  std::optional<Group> group;    // nullopt when the user has no profile
  Gender gender = Gender::Unknown;

  int num_revisions = 0;
  std::int64_t num_edits = 0;
  double time_revising_s = 0.0;
  std::optional<double> di_ratio;             // deletions/insertions, revision phase
  std::optional<double> efficiency_ins_per_s; // insertions per active second
  std::optional<double> pause_mean_s;         // mean gap within revision entries
};

FeatureRecord session_features(const Session& session);

// One record per (user, recipe), user then recipe order, joined with group
// and gender from the corpus profiles.
std::vector<FeatureRecord> extract_all(const Corpus& corpus,
                                       std::span<const Session> sessions);

// CSV with header user_id,group,gender,recipe,...; Undefined values serialize
// as empty fields. Leading '#' lines carry provenance and are skipped on read.
void write_features_csv(std::ostream& out,
                        std::span<const FeatureRecord> records,
                        std::string_view provenance = {});
std::vector<FeatureRecord> read_features_csv(std::istream& in);

}  // namespace revmine
