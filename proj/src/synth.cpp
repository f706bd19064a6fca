#include "revmine/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace revmine {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Thin wrapper over mt19937_64 with hand-rolled draws so the byte stream is
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double std) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return mean + std * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  int uniform_int(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::mt19937_64 engine_;
};

double quantize(double v) { return std::round(v * 1024.0) / 1024.0; }

int draw_revisions(Rng& rng, const RevisionModel& model) {
  if (model.kind == RevisionModel::Kind::Uniform) {
    return rng.uniform_int(model.uniform.lo, model.uniform.hi);
  }
  const double v = rng.normal(model.normal.mean, model.normal.std);
  return std::max(0, static_cast<int>(std::llround(v)));
}

IntRange range_from_json(const json& j, IntRange fallback) {
  if (j.is_null()) return fallback;
  return {j.at("lo").get<int>(), j.at("hi").get<int>()};
}

NormalDist normal_from_json(const json& j, NormalDist fallback) {
  if (j.is_null()) return fallback;
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

RevisionModel revision_model_from_json(const json& j, RevisionModel fallback) {
  if (j.is_null()) return fallback;
  RevisionModel model;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform") {
    model.kind = RevisionModel::Kind::Uniform;
    model.uniform = {j.at("lo").get<int>(), j.at("hi").get<int>()};
  } else if (kind == "normal") {
    model.kind = RevisionModel::Kind::Normal;
    model.normal = {j.at("mean").get<double>(), j.at("std").get<double>()};
  } else {
    throw ConfigError("revision model kind must be uniform or normal");
  }
  return model;
}

json revision_model_to_json(const RevisionModel& model) {
  if (model.kind == RevisionModel::Kind::Uniform) {
    return {{"kind", "uniform"},
            {"lo", model.uniform.lo},
            {"hi", model.uniform.hi}};
  }
  return {{"kind", "normal"},
          {"mean", model.normal.mean},
          {"std", model.normal.std}};
}

// Per-entry bookkeeping the generator keeps while emitting keystrokes.
struct EntryTally {
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t first_ms = 0;
  std::int64_t last_ms = 0;
  std::int64_t event_count = 0;

  double active_s() const {
    return event_count >= 2
               ? static_cast<double>(last_ms - first_ms) / 1000.0
               : 0.0;
  }
  std::int64_t gap_count() const {
    return event_count >= 2 ? event_count - 1 : 0;
  }
  std::int64_t gap_sum_ms() const {
    return event_count >= 2 ? last_ms - first_ms : 0;
  }
};

EntryTally emit_keystrokes(std::vector<KeystrokeEvent>& out,
                           std::string_view typed, int deletions,
                           double gap_mean_ms, double gap_std_ms, Rng& rng) {
  EntryTally tally;
  std::int64_t t = 0;
  auto advance = [&] {
    const double gap = rng.normal(gap_mean_ms, gap_std_ms);
    t += std::max<std::int64_t>(1, std::llround(gap));
  };
  for (char c : typed) {
    out.push_back({t, Key::character(std::string(1, c))});
    ++tally.insertions;
    ++tally.event_count;
    tally.last_ms = t;
    advance();
  }
  for (int d = 0; d < deletions; ++d) {
    out.push_back(
        {t, rng.uniform01() < 0.5 ? Key::backspace() : Key::del()});
    ++tally.deletions;
    ++tally.event_count;
    tally.last_ms = t;
    advance();
  }
  return tally;
}

constexpr std::int64_t kBaseEpoch = 1672563600;  // 2023-01-01T09:00:00

}  // namespace

void SimPlan::validate() const {
  if (users_per_group < 1) throw ConfigError("plan: users_per_group must be >= 1");
  if (recipes_per_user < 1) throw ConfigError("plan: recipes_per_user must be >= 1");
  if (pool_size < 1) throw ConfigError("plan: vocabulary pool must not be empty");
  if (words_per_draft < 1) throw ConfigError("plan: words_per_draft must be >= 1");
  if (words_added_per_revision < 1)
    throw ConfigError("plan: words_added_per_revision must be >= 1");
  if (embedding_dim < static_cast<std::size_t>(recipes_per_user))
    throw ConfigError("plan: embedding_dim must be >= recipes_per_user");
  if (noise_scale < 0.0) throw ConfigError("plan: noise_scale must be >= 0");
  if (draft_deletions.lo < 0 || draft_deletions.hi < draft_deletions.lo)
    throw ConfigError("plan: bad draft_deletions range");
  if (revision_deletions.lo < 0 ||
      revision_deletions.hi < revision_deletions.lo)
    throw ConfigError("plan: bad revision_deletions range");
  if (revisions_g1.kind == RevisionModel::Kind::Uniform &&
      (revisions_g1.uniform.lo < 0 ||
       revisions_g1.uniform.hi < revisions_g1.uniform.lo))
    throw ConfigError("plan: bad G1 revision range");
  if (revisions_g2.kind == RevisionModel::Kind::Uniform &&
      (revisions_g2.uniform.lo < 0 ||
       revisions_g2.uniform.hi < revisions_g2.uniform.lo))
    throw ConfigError("plan: bad G2 revision range");
  if (!(keystroke_gap_ms.mean > 0.0) || keystroke_gap_ms.std < 0.0)
    throw ConfigError("plan: bad keystroke gap distribution");
  if (female_gap_factor <= 0.0)
    throw ConfigError("plan: female_gap_factor must be positive");
  if (female_p < 0 || male_p < 0 || other_p < 0 ||
      female_p + male_p + other_p > 1.0 + 1e-12)
    throw ConfigError("plan: gender probabilities must be >= 0 and sum <= 1");
}

SimPlan plan_from_json(const json& j) {
  SimPlan plan;
  plan.seed = j.value("seed", plan.seed);
  plan.users_per_group = j.value("users_per_group", plan.users_per_group);
  plan.recipes_per_user = j.value("recipes_per_user", plan.recipes_per_user);
  plan.pool_size = j.value("pool_size", plan.pool_size);
  plan.words_per_draft = j.value("words_per_draft", plan.words_per_draft);
  plan.words_added_per_revision =
      j.value("words_added_per_revision", plan.words_added_per_revision);
  plan.embedding_dim = j.value("embedding_dim", plan.embedding_dim);
  plan.noise_scale = j.value("noise_scale", plan.noise_scale);
  plan.revisions_g1 =
      revision_model_from_json(j.value("revisions_g1", json()), plan.revisions_g1);
  plan.revisions_g2 =
      revision_model_from_json(j.value("revisions_g2", json()), plan.revisions_g2);
  plan.draft_deletions =
      range_from_json(j.value("draft_deletions", json()), plan.draft_deletions);
  plan.revision_deletions = range_from_json(
      j.value("revision_deletions", json()), plan.revision_deletions);
  plan.keystroke_gap_ms = normal_from_json(j.value("keystroke_gap_ms", json()),
                                           plan.keystroke_gap_ms);
  plan.female_gap_factor = j.value("female_gap_factor", plan.female_gap_factor);
  plan.female_p = j.value("female_p", plan.female_p);
  plan.male_p = j.value("male_p", plan.male_p);
  plan.other_p = j.value("other_p", plan.other_p);
  plan.validate();
  return plan;
}

json plan_to_json(const SimPlan& plan) {
  return {{"seed", plan.seed},
          {"users_per_group", plan.users_per_group},
          {"recipes_per_user", plan.recipes_per_user},
          {"pool_size", plan.pool_size},
          {"words_per_draft", plan.words_per_draft},
          {"words_added_per_revision", plan.words_added_per_revision},
          {"embedding_dim", plan.embedding_dim},
          {"noise_scale", plan.noise_scale},
          {"revisions_g1", revision_model_to_json(plan.revisions_g1)},
          {"revisions_g2", revision_model_to_json(plan.revisions_g2)},
          {"draft_deletions",
           {{"lo", plan.draft_deletions.lo}, {"hi", plan.draft_deletions.hi}}},
          {"revision_deletions",
           {{"lo", plan.revision_deletions.lo},
            {"hi", plan.revision_deletions.hi}}},
          {"keystroke_gap_ms",
           {{"mean", plan.keystroke_gap_ms.mean},
            {"std", plan.keystroke_gap_ms.std}}},
          {"female_gap_factor", plan.female_gap_factor},
          {"female_p", plan.female_p},
          {"male_p", plan.male_p},
          {"other_p", plan.other_p}};
}

SynthResult generate_corpus(const SimPlan& plan) {
  plan.validate();
  SynthResult result;

  // topic centroids: orthonormalized gaussian draws, one per recipe ordinal
  Rng table_rng(splitmix64(plan.seed));
  const std::size_t dim = plan.embedding_dim;
  std::vector<std::vector<double>> centroids;
  for (int r = 0; r < plan.recipes_per_user; ++r) {
    std::vector<double> c(dim);
    for (auto& x : c) x = table_rng.normal(0.0, 1.0);
    for (const auto& prev : centroids) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += c[i] * prev[i];
      for (std::size_t i = 0; i < dim; ++i) c[i] -= dot * prev[i];
    }
    double norm = 0.0;
    for (double x : c) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-9) throw ConfigError("plan: degenerate centroid draw");
    for (auto& x : c) x /= norm;
    centroids.push_back(std::move(c));
  }

  std::vector<std::vector<std::string>> pools(
      static_cast<std::size_t>(plan.recipes_per_user));
  for (int r = 0; r < plan.recipes_per_user; ++r) {
    for (int w = 0; w < plan.pool_size; ++w) {
      std::string word =
          "t" + std::to_string(r) + "w" + std::to_string(w);
      std::vector<double> vec(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        vec[i] = quantize(centroids[static_cast<std::size_t>(r)][i] +
                          plan.noise_scale * table_rng.normal(0.0, 1.0));
      }
      pools[static_cast<std::size_t>(r)].push_back(word);
      result.vocabulary.emplace_back(std::move(word), std::move(vec));
    }
  }

  const int total_users = plan.users_per_group * 2;
  for (int u = 0; u < total_users; ++u) {
    Rng rng(splitmix64(plan.seed ^ (0x51ED2700F7D6A3ULL +
                                    static_cast<std::uint64_t>(u) * 2 + 1)));
    char id[16];
    std::snprintf(id, sizeof(id), "u%03d", u);

    UserTruth truth;
    truth.user_id = id;
    truth.group = u < plan.users_per_group ? Group::G1 : Group::G2;
    const double gender_draw = rng.uniform01();
    if (gender_draw < plan.female_p) {
      truth.gender = Gender::Female;
    } else if (gender_draw < plan.female_p + plan.male_p) {
      truth.gender = Gender::Male;
    } else if (gender_draw < plan.female_p + plan.male_p + plan.other_p) {
      truth.gender = Gender::Other;
    } else {
      truth.gender = Gender::Unknown;
    }

    UserProfile profile;
    profile.user_id = id;
    profile.group = truth.group;
    profile.gender = truth.gender;
    profile.age = rng.uniform_int(20, 35);
    result.corpus.profiles.emplace(profile.user_id, profile);

    double gap_mean = plan.keystroke_gap_ms.mean * rng.uniform(0.75, 1.25);
    if (truth.gender == Gender::Female) gap_mean *= plan.female_gap_factor;
    const double gap_std = plan.keystroke_gap_ms.std;

    UserLog log;
    log.user_id = id;
    truth.trace.emplace_back("Start");
    const RevisionModel& revision_model =
        truth.group == Group::G1 ? plan.revisions_g1 : plan.revisions_g2;

    for (int r = 0; r < plan.recipes_per_user; ++r) {
      const auto& pool = pools[static_cast<std::size_t>(r)];
      if (r > 0) truth.boundaries.push_back(log.entries.size());

      const int revisions = draw_revisions(rng, revision_model);
      std::string text;
      for (int w = 0; w < plan.words_per_draft; ++w) {
        if (w > 0) text += ' ';
        text += pool[rng.index(pool.size())];
      }

      FeatureRecord session;
      session.user_id = id;
      session.recipe_ordinal = r + 1;
      session.group = truth.group;
      session.gender = truth.gender;
      session.num_revisions = revisions;

      SubmissionEntry draft;
      draft.user_id = id;
      draft.submitted_at = kBaseEpoch + u * 86400 +
                           static_cast<int>(log.entries.size()) * 600;
      const EntryTally draft_tally = emit_keystrokes(
          draft.keystrokes, text,
          rng.uniform_int(plan.draft_deletions.lo, plan.draft_deletions.hi),
          gap_mean, gap_std, rng);
      draft.text = text;
      log.entries.push_back(std::move(draft));
      truth.entry_edits.push_back(
          {draft_tally.insertions, draft_tally.deletions});
      truth.trace.push_back("W" + std::to_string(r + 1));

      std::int64_t rev_ins = 0, rev_del = 0;
      double rev_active_s = 0.0;
      std::int64_t gap_sum_ms = 0, gap_count = 0;
      for (int v = 0; v < revisions; ++v) {
        std::string added;
        for (int w = 0; w < plan.words_added_per_revision; ++w) {
          added += ' ';
          added += pool[rng.index(pool.size())];
        }
        SubmissionEntry revision;
        revision.user_id = id;
        revision.submitted_at = kBaseEpoch + u * 86400 +
                                static_cast<int>(log.entries.size()) * 600;
        const EntryTally tally = emit_keystrokes(
            revision.keystrokes, added,
            rng.uniform_int(plan.revision_deletions.lo,
                            plan.revision_deletions.hi),
            gap_mean, gap_std, rng);
        text += added;
        revision.text = text;
        log.entries.push_back(std::move(revision));
        truth.entry_edits.push_back({tally.insertions, tally.deletions});
        truth.trace.emplace_back("Revise");

        rev_ins += tally.insertions;
        rev_del += tally.deletions;
        rev_active_s += tally.active_s();
        gap_sum_ms += tally.gap_sum_ms();
        gap_count += tally.gap_count();
      }

      session.num_edits = rev_ins + rev_del;
      session.time_revising_s = rev_active_s;
      if (rev_ins > 0) {
        session.di_ratio =
            static_cast<double>(rev_del) / static_cast<double>(rev_ins);
      }
      if (gap_count > 0) {
        session.pause_mean_s = static_cast<double>(gap_sum_ms) /
                               (static_cast<double>(gap_count) * 1000.0);
      }
      const double all_active_s = draft_tally.active_s() + rev_active_s;
      if (all_active_s > 0.0) {
        session.efficiency_ins_per_s =
            static_cast<double>(draft_tally.insertions + rev_ins) /
            all_active_s;
      }
      truth.sessions.push_back(std::move(session));
    }
    truth.trace.emplace_back("End");
    result.corpus.users.push_back(std::move(log));
    result.truth.users.push_back(std::move(truth));
  }
  return result;
}

void write_vector_file(std::ostream& out, const SynthResult& result) {
  char buf[32];
  for (const auto& [word, vec] : result.vocabulary) {
    out << word;
    for (double v : vec) {
      // components are dyadic (k/1024), so ten decimals round-trip exactly
      std::snprintf(buf, sizeof(buf), " %.10f", v);
      out << buf;
    }
    out << '\n';
  }
}

void write_logs_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& user : corpus.users) {
    for (const auto& entry : user.entries) {
      json keys = json::array();
      for (const auto& ev : entry.keystrokes) {
        keys.push_back({{"time", ev.time_ms}, {"key", ev.key.name()}});
      }
      const json row = {{"ts", format_iso_timestamp(entry.submitted_at)},
                        {"user", user.user_id},
                        {"keys", std::move(keys)},
                        {"text", entry.text}};
      out << row.dump() << '\n';
    }
  }
}

void write_profiles_csv(std::ostream& out, const Corpus& corpus) {
  out << "user_id,group,gender,age\n";
  for (const auto& [id, p] : corpus.profiles) {
    out << id << ',' << to_string(p.group) << ',' << to_string(p.gender)
        << ',';
    if (p.age) out << *p.age;
    out << '\n';
  }
}

json truth_to_json(const GroundTruth& truth) {
  json users = json::array();
  for (const auto& u : truth.users) {
    json sessions = json::array();
    for (const auto& s : u.sessions) {
      sessions.push_back(
          {{"recipe", s.recipe_ordinal},
           {"num_revisions", s.num_revisions},
           {"num_edits", s.num_edits},
           {"time_revising_s", s.time_revising_s},
           {"di_ratio", s.di_ratio ? json(*s.di_ratio) : json(nullptr)},
           {"efficiency", s.efficiency_ins_per_s
                              ? json(*s.efficiency_ins_per_s)
                              : json(nullptr)},
           {"pause_mean_s",
            s.pause_mean_s ? json(*s.pause_mean_s) : json(nullptr)}});
    }
    json edits = json::array();
    for (const auto& e : u.entry_edits) {
      edits.push_back({{"insertions", e.insertions},
                       {"deletions", e.deletions}});
    }
    users.push_back({{"user", u.user_id},
                     {"group", std::string(to_string(u.group))},
                     {"gender", std::string(to_string(u.gender))},
                     {"boundaries", u.boundaries},
                     {"entry_edits", std::move(edits)},
                     {"sessions", std::move(sessions)},
                     {"trace", u.trace}});
  }
  return {{"users", std::move(users)}};
}

}  // namespace revmine
