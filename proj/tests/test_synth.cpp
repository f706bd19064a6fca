#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "revmine/corpus_io.hpp"
#include "revmine/embedding.hpp"
#include "revmine/features.hpp"
#include "revmine/ingest.hpp"
#include "revmine/sessionizer.hpp"
#include "revmine/synth.hpp"

using namespace revmine;

namespace {

SimPlan small_plan() {
  SimPlan plan;
  plan.seed = 7;
  plan.users_per_group = 4;
  plan.recipes_per_user = 3;
  plan.pool_size = 12;
  plan.words_per_draft = 10;
  return plan;
}

VectorStore store_from(const SynthResult& result) {
  std::stringstream file;
  write_vector_file(file, result);
  return parse_store(file, result.vocabulary.front().second.size());
}

}  // namespace

TEST_CASE("the same seed reproduces byte-identical corpora") {
  const SimPlan plan = small_plan();
  const SynthResult a = generate_corpus(plan);
  const SynthResult b = generate_corpus(plan);
  std::ostringstream bytes_a(std::ios::binary), bytes_b(std::ios::binary);
  save_corpus(a.corpus, bytes_a);
  save_corpus(b.corpus, bytes_b);
  CHECK(bytes_a.str() == bytes_b.str());
  CHECK(a.vocabulary == b.vocabulary);

  SimPlan reseeded = plan;
  reseeded.seed = 8;
  std::ostringstream bytes_c(std::ios::binary);
  save_corpus(generate_corpus(reseeded).corpus, bytes_c);
  CHECK(bytes_a.str() != bytes_c.str());
}

TEST_CASE("a plan without revisions yields straight-through traces") {
  SimPlan plan = small_plan();
  plan.revisions_g1.uniform = {0, 0};
  plan.revisions_g2.uniform = {0, 0};
  const SynthResult result = generate_corpus(plan);
  for (const auto& user : result.truth.users) {
    CHECK(user.trace ==
          std::vector<std::string>{"Start", "W1", "W2", "W3", "End"});
  }
  for (const auto& user : result.corpus.users) {
    CHECK(user.entries.size() == 3);  // one draft per recipe, nothing else
  }
}

TEST_CASE("inconsistent plans are config errors") {
  SimPlan plan = small_plan();
  plan.pool_size = 0;  // empty vocabulary pool
  CHECK_THROWS_AS(generate_corpus(plan), ConfigError);

  SimPlan bad_dim = small_plan();
  bad_dim.embedding_dim = 2;  // fewer dimensions than topics
  CHECK_THROWS_AS(generate_corpus(bad_dim), ConfigError);
}

TEST_CASE("plan json round-trips") {
  SimPlan plan = small_plan();
  plan.revisions_g1.kind = RevisionModel::Kind::Normal;
  plan.revisions_g1.normal = {2.5, 0.8};
  plan.female_gap_factor = 0.6;
  const SimPlan reloaded = plan_from_json(plan_to_json(plan));
  CHECK(plan_to_json(reloaded) == plan_to_json(plan));
}

TEST_CASE("plan json applies defaults for missing keys") {
  const SimPlan plan = plan_from_json(nlohmann::json{{"seed", 123}});
  CHECK(plan.seed == 123);
  CHECK(plan.users_per_group == 25);
  CHECK(plan.recipes_per_user == 3);
}

TEST_CASE("generated corpora are well-formed") {
  const SynthResult result = generate_corpus(small_plan());
  CHECK(result.corpus.users.size() == 8);
  for (const auto& user : result.corpus.users) {
    CHECK(result.corpus.profiles.contains(user.user_id));
    for (std::size_t i = 1; i < user.entries.size(); ++i) {
      CHECK(user.entries[i - 1].submitted_at <= user.entries[i].submitted_at);
    }
    for (const auto& entry : user.entries) {
      for (std::size_t i = 1; i < entry.keystrokes.size(); ++i) {
        CHECK(entry.keystrokes[i - 1].time_ms <= entry.keystrokes[i].time_ms);
      }
    }
  }
}

TEST_CASE("keystream tallies equal the recorded edit counts") {
  const SynthResult result = generate_corpus(small_plan());
  for (std::size_t u = 0; u < result.corpus.users.size(); ++u) {
    const auto& entries = result.corpus.users[u].entries;
    const auto& truth = result.truth.users[u];
    REQUIRE(entries.size() == truth.entry_edits.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
      CHECK(count_edits(entries[e].keystrokes) == truth.entry_edits[e]);
    }
  }
}

TEST_CASE("the pipeline reproduces the generator's ground truth") {
  // default plan: 50 users, 3 recipes each, 1-4 revisions per recipe
  SimPlan plan;
  plan.seed = 20230102;
  const SynthResult result = generate_corpus(plan);
  REQUIRE(result.corpus.users.size() == 50);
  const VectorStore store = store_from(result);

  std::size_t session_count = 0;
  for (std::size_t u = 0; u < result.corpus.users.size(); ++u) {
    const auto& user = result.corpus.users[u];
    const auto& truth = result.truth.users[u];

    const BoundarySet found = find_boundaries(user.entries, store, 0.995);
    CHECK(found.boundaries == truth.boundaries);
    CHECK(found.undefined_entries.empty());

    const auto sessions = build_sessions(user.entries, found);
    REQUIRE(sessions.size() == truth.sessions.size());
    session_count += sessions.size();
    for (std::size_t s = 0; s < sessions.size(); ++s) {
      const FeatureRecord got = session_features(sessions[s]);
      const FeatureRecord& want = truth.sessions[s];
      CHECK(got.num_revisions == want.num_revisions);
      CHECK(got.num_edits == want.num_edits);
      CHECK(got.time_revising_s ==
            doctest::Approx(want.time_revising_s).epsilon(1e-9));
      CHECK(got.di_ratio.has_value() == want.di_ratio.has_value());
      if (want.di_ratio)
        CHECK(*got.di_ratio == doctest::Approx(*want.di_ratio).epsilon(1e-9));
      CHECK(got.efficiency_ins_per_s.has_value() ==
            want.efficiency_ins_per_s.has_value());
      if (want.efficiency_ins_per_s)
        CHECK(*got.efficiency_ins_per_s ==
              doctest::Approx(*want.efficiency_ins_per_s).epsilon(1e-9));
      CHECK(got.pause_mean_s.has_value() == want.pause_mean_s.has_value());
      if (want.pause_mean_s)
        CHECK(*got.pause_mean_s ==
              doctest::Approx(*want.pause_mean_s).epsilon(1e-9));
    }
  }

  // one feature record per (user, recipe) across the whole corpus
  const SessionizeResult all = sessionize_corpus(result.corpus, store, 0.995);
  CHECK(extract_all(result.corpus, all.sessions).size() == session_count);
  CHECK(session_count == 150);
}

TEST_CASE("generated logs survive the ingest path unchanged") {
  const SynthResult result = generate_corpus(small_plan());
  std::stringstream logs, profiles;
  write_logs_jsonl(logs, result.corpus);
  write_profiles_csv(profiles, result.corpus);
  const IngestResult ingested = parse_corpus(logs, profiles);
  CHECK(ingested.skipped_rows.empty());
  CHECK(ingested.skipped_profiles.empty());
  CHECK(ingested.corpus == result.corpus);
}

TEST_CASE("planted group deltas shift the recovered means") {
  SimPlan plan = small_plan();
  plan.users_per_group = 20;
  plan.revisions_g1.kind = RevisionModel::Kind::Normal;
  plan.revisions_g1.normal = {3.0, 0.5};
  plan.revisions_g2.kind = RevisionModel::Kind::Normal;
  plan.revisions_g2.normal = {1.0, 0.5};
  const SynthResult result = generate_corpus(plan);
  double g1_mean = 0.0, g2_mean = 0.0;
  int g1_n = 0, g2_n = 0;
  for (const auto& truth : result.truth.users) {
    for (const auto& session : truth.sessions) {
      if (truth.group == Group::G1) {
        g1_mean += session.num_revisions;
        ++g1_n;
      } else {
        g2_mean += session.num_revisions;
        ++g2_n;
      }
    }
  }
  g1_mean /= g1_n;
  g2_mean /= g2_n;
  CHECK(g1_mean - g2_mean > 1.0);  // planted delta of 2, sampling noise aside
}

TEST_CASE("truth json carries boundaries, edits, sessions and traces") {
  const SynthResult result = generate_corpus(small_plan());
  const nlohmann::json j = truth_to_json(result.truth);
  REQUIRE(j.contains("users"));
  REQUIRE(j["users"].is_array());
  const auto& first = j["users"][0];
  CHECK(first.contains("boundaries"));
  CHECK(first.contains("entry_edits"));
  CHECK(first.contains("sessions"));
  CHECK(first.contains("trace"));
}
