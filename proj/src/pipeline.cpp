#include "revmine/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "revmine/corpus_io.hpp"
#include "revmine/procmine.hpp"
#include "revmine/version.hpp"

namespace revmine {

namespace {

using nlohmann::ordered_json;

ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json provenance_envelope(const RunConfig& config) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = config_to_json(config);
  return j;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

struct UserRollup {
  int times_revised = 0;
  double time_revising_s = 0.0;
  std::int64_t rev_insertions = 0;
  std::int64_t rev_deletions = 0;
  std::int64_t all_insertions = 0;
  double all_active_s = 0.0;
};

}  // namespace

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  ordered_json j;
  j["logs"] = config.logs.string();
  j["profiles"] = config.profiles.string();
  j["embeddings"] = config.embeddings.string();
  j["dim"] = config.dim;
  j["threshold"] = config.threshold;
  j["overrides"] =
      config.overrides ? ordered_json(config.overrides->string())
                       : ordered_json(nullptr);
  j["outlier_max_time_s"] = config.policy.max_time_revising_s;
  j["outlier_min_efficiency"] = config.policy.min_efficiency_ins_per_s;
  j["out_dir"] = config.out_dir.string();
  j["time_unit"] =
      config.time_unit == TimeUnit::Milliseconds ? "ms" : "s";
  return j;
}

nlohmann::ordered_json stats_to_json(
    const StatsBundle& bundle, const nlohmann::ordered_json& provenance) {
  ordered_json j = provenance;
  j["policy"] = {{"max_time_revising_s", bundle.policy.max_time_revising_s},
                 {"min_efficiency_ins_per_s",
                  bundle.policy.min_efficiency_ins_per_s}};

  ordered_json recipes = ordered_json::array();
  for (int recipe : bundle.recipes) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : bundle.per_recipe.at(recipe)) {
      ordered_json r;
      r["feature"] = row.feature;
      r["g1_mean"] = opt_json(row.g1_mean);
      r["g1_std"] = opt_json(row.g1_std);
      r["g2_mean"] = opt_json(row.g2_mean);
      r["g2_std"] = opt_json(row.g2_std);
      r["p_value"] = opt_json(row.p_value);
      r["n1"] = row.n1;
      r["n2"] = row.n2;
      r["undefined_g1"] = row.undefined_g1;
      r["undefined_g2"] = row.undefined_g2;
      if (!row.diagnostic.empty()) r["diagnostic"] = row.diagnostic;
      rows.push_back(std::move(r));
    }
    recipes.push_back({{"recipe", recipe}, {"rows", std::move(rows)}});
  }
  j["recipes"] = std::move(recipes);

  ordered_json gender;
  for (const auto& [group, comparisons] : bundle.gender) {
    ordered_json rows = ordered_json::array();
    for (const auto& cmp : comparisons) {
      ordered_json r;
      r["feature"] = cmp.feature;
      r["p_value"] = opt_json(cmp.p);
      r["n_female"] = cmp.n_female;
      r["n_male"] = cmp.n_male;
      if (!cmp.diagnostic.empty()) r["diagnostic"] = cmp.diagnostic;
      rows.push_back(std::move(r));
    }
    gender[std::string(to_string(group))] = std::move(rows);
  }
  j["gender"] = std::move(gender);

  ordered_json trend;
  for (const auto& [group, cells] : bundle.trend.cells) {
    ordered_json row;
    for (const auto feature : kEvolutionFeatures) {
      const auto it = cells.find(feature);
      ordered_json cell;
      if (it != cells.end()) {
        cell["percent_change"] = opt_json(it->second.percent_change);
        cell["mean_recipe1"] = opt_json(it->second.mean_first);
        cell["mean_recipe3"] = opt_json(it->second.mean_last);
      }
      row[std::string(feature)] = std::move(cell);
    }
    trend[std::string(to_string(group))] = std::move(row);
  }
  j["trend"] = std::move(trend);

  ordered_json removed = ordered_json::array();
  for (const auto& r : bundle.removed) {
    removed.push_back({{"user", r.user_id},
                       {"recipe", r.recipe_ordinal},
                       {"reason", r.reason}});
  }
  j["outliers_removed"] = std::move(removed);
  return j;
}

nlohmann::ordered_json bubble_data(std::span<const Session> sessions,
                                   const Corpus& corpus) {
  std::map<int, std::vector<const Session*>> by_recipe;
  for (const auto& s : sessions) by_recipe[s.recipe_ordinal].push_back(&s);

  ordered_json recipes = ordered_json::array();
  for (const auto& [recipe, recipe_sessions] : by_recipe) {
    std::vector<const Session*> sorted = recipe_sessions;
    std::sort(sorted.begin(), sorted.end(),
              [](const Session* a, const Session* b) {
                if (a->revisions.size() != b->revisions.size())
                  return a->revisions.size() > b->revisions.size();
                return a->user_id < b->user_id;
              });
    ordered_json users = ordered_json::array();
    for (const Session* s : sorted) {
      ordered_json points = ordered_json::array();
      for (std::size_t i = 0; i < s->revisions.size(); ++i) {
        const EditCounts edits = count_edits(s->revisions[i].keystrokes);
        points.push_back({{"step", i + 1},
                          {"edits", edits.insertions + edits.deletions}});
      }
      const UserProfile* profile = corpus.find_profile(s->user_id);
      users.push_back(
          {{"user", s->user_id},
           {"group", profile ? ordered_json(std::string(
                                   to_string(profile->group)))
                             : ordered_json(nullptr)},
           {"revisions", s->revisions.size()},
           {"points", std::move(points)}});
    }
    recipes.push_back({{"recipe", recipe}, {"users", std::move(users)}});
  }
  return recipes;
}

nlohmann::ordered_json summary_data(const StatsBundle& bundle) {
  ordered_json groups;
  for (const Group group : {Group::G1, Group::G2}) {
    ordered_json series = ordered_json::array();
    for (int recipe : bundle.recipes) {
      ordered_json point;
      point["recipe"] = recipe;
      for (const auto& row : bundle.per_recipe.at(recipe)) {
        point[row.feature] =
            opt_json(group == Group::G1 ? row.g1_mean : row.g2_mean);
      }
      series.push_back(std::move(point));
    }
    groups[std::string(to_string(group))] = std::move(series);
  }
  return ordered_json{{"groups", std::move(groups)}};
}

nlohmann::ordered_json gender_data(std::span<const Session> sessions,
                                   const Corpus& corpus) {
  std::map<std::string, UserRollup> rollups;
  for (const auto& s : sessions) {
    UserRollup& r = rollups[s.user_id];
    r.times_revised += static_cast<int>(s.revisions.size());
    const EditCounts draft = count_edits(s.draft.keystrokes);
    r.all_insertions += draft.insertions;
    r.all_active_s += active_time_s(s.draft.keystrokes);
    for (const auto& rev : s.revisions) {
      const EditCounts edits = count_edits(rev.keystrokes);
      r.rev_insertions += edits.insertions;
      r.rev_deletions += edits.deletions;
      r.all_insertions += edits.insertions;
      const double active = active_time_s(rev.keystrokes);
      r.time_revising_s += active;
      r.all_active_s += active;
    }
  }
  ordered_json users = ordered_json::array();
  for (const auto& [user_id, r] : rollups) {
    const UserProfile* profile = corpus.find_profile(user_id);
    ordered_json row;
    row["user"] = user_id;
    row["group"] = profile ? ordered_json(std::string(to_string(profile->group)))
                           : ordered_json(nullptr);
    row["gender"] = profile ? std::string(to_string(profile->gender))
                            : std::string(to_string(Gender::Unknown));
    row["times_revised"] = r.times_revised;
    row["time_revising_s"] = r.time_revising_s;
    row["efficiency"] =
        r.all_active_s > 0.0
            ? ordered_json(static_cast<double>(r.all_insertions) /
                           r.all_active_s)
            : ordered_json(nullptr);
    row["di_ratio"] =
        r.rev_insertions > 0
            ? ordered_json(static_cast<double>(r.rev_deletions) /
                           static_cast<double>(r.rev_insertions))
            : ordered_json(nullptr);
    users.push_back(std::move(row));
  }
  return users;
}

ReportArtifacts run_report(const RunConfig& config) {
  namespace fs = std::filesystem;

  // validate everything up front so a bad config writes no partial outputs
  for (const auto& [what, path] :
       {std::pair<const char*, const fs::path*>{"logs", &config.logs},
        {"profiles", &config.profiles},
        {"embeddings", &config.embeddings}}) {
    if (path->empty() || !fs::exists(*path)) {
      throw StageError("config", std::string(what) + " path missing: " +
                                     (path->empty() ? "(unset)"
                                                    : path->string()));
    }
  }
  if (config.overrides && !fs::exists(*config.overrides)) {
    throw StageError("config",
                     "overrides path missing: " + config.overrides->string());
  }
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw StageError("config", "threshold must be in (0, 1)");
  }
  if (config.out_dir.empty()) {
    throw StageError("config", "out-dir is required");
  }

  ReportArtifacts artifacts;
  const ordered_json provenance = provenance_envelope(config);
  const std::string provenance_line =
      std::string(kToolName) + " " + std::string(kToolVersion) +
      " config=" + config_to_json(config).dump();

  IngestResult ingested;
  try {
    ingested = parse_corpus_files(config.logs, config.profiles,
                                  config.time_unit);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("ingest", e.what());
  }
  artifacts.corpus = std::move(ingested.corpus);

  SessionizeResult sessionized;
  try {
    const VectorStore store = load_store(config.embeddings, config.dim);
    std::vector<BoundaryOverride> overrides;
    if (config.overrides) {
      std::ifstream in(*config.overrides);
      if (!in)
        throw IoError("cannot open overrides: " + config.overrides->string());
      overrides = parse_overrides(in);
    }
    sessionized = sessionize_corpus(artifacts.corpus, store, config.threshold,
                                    overrides);
  } catch (const std::exception& e) {
    throw StageError("sessionize", e.what());
  }
  artifacts.sessions = std::move(sessionized.sessions);

  try {
    artifacts.features = extract_all(artifacts.corpus, artifacts.sessions);
  } catch (const std::exception& e) {
    throw StageError("features", e.what());
  }

  try {
    artifacts.stats = compute_stats(artifacts.features, config.policy);
  } catch (const std::exception& e) {
    throw StageError("stats", e.what());
  }

  std::string g1_dot, g2_dot;
  try {
    for (const Group group : {Group::G1, Group::G2}) {
      const EventLog log =
          build_event_log(artifacts.sessions, artifacts.corpus, group);
      std::string& dot = group == Group::G1 ? g1_dot : g2_dot;
      dot = "// " + provenance_line + "\n";
      dot += log.traces.empty() ? "digraph dfg {\n}\n" : export_dot(discover_dfg(log));
    }
  } catch (const std::exception& e) {
    throw StageError("dfg", e.what());
  }

  try {
    fs::create_directories(config.out_dir / "plots");

    std::ofstream features_out(config.out_dir / "features.csv",
                               std::ios::binary);
    if (!features_out) throw IoError("cannot write features.csv");
    write_features_csv(features_out, artifacts.features, provenance_line);
    features_out.close();

    ordered_json stats_json = stats_to_json(artifacts.stats, provenance);
    write_text_file(config.out_dir / "stats.json", stats_json.dump(2) + "\n");

    write_text_file(config.out_dir / "g1.dot", g1_dot);
    write_text_file(config.out_dir / "g2.dot", g2_dot);

    ordered_json bubble = provenance;
    bubble["recipes"] = bubble_data(artifacts.sessions, artifacts.corpus);
    write_text_file(config.out_dir / "plots" / "bubble.json",
                    bubble.dump(2) + "\n");

    ordered_json summary = provenance;
    summary.update(summary_data(artifacts.stats));
    write_text_file(config.out_dir / "plots" / "summary.json",
                    summary.dump(2) + "\n");

    ordered_json gender = provenance;
    gender["users"] = gender_data(artifacts.sessions, artifacts.corpus);
    write_text_file(config.out_dir / "plots" / "gender.json",
                    gender.dump(2) + "\n");

    std::string diag = "# " + provenance_line + "\n";
    diag += "log rows: " + std::to_string(ingested.total_log_rows) +
            ", skipped: " + std::to_string(ingested.skipped_rows.size()) +
            "\n";
    for (const auto& d : ingested.skipped_rows) {
      diag += "skipped log row " + std::to_string(d.line) + ": " + d.message +
              "\n";
    }
    for (const auto& d : ingested.skipped_profiles) {
      diag += "skipped profile row " + std::to_string(d.line) + ": " +
              d.message + "\n";
    }
    for (const auto& d : ingested.warnings) {
      diag += "warning";
      if (d.line > 0) diag += " (line " + std::to_string(d.line) + ")";
      diag += ": " + d.message + "\n";
    }
    for (const auto& d : sessionized.notes) {
      diag += "sessionizer: " + d.message + "\n";
    }
    for (const auto& r : artifacts.stats.removed) {
      diag += "outlier removed: user " + r.user_id + " recipe " +
              std::to_string(r.recipe_ordinal) + " (" + r.reason + ")\n";
    }
    write_text_file(config.out_dir / "diagnostics.txt", diag);
  } catch (const std::exception& e) {
    throw StageError("write", e.what());
  }

  artifacts.written = {config.out_dir / "features.csv",
                       config.out_dir / "stats.json",
                       config.out_dir / "g1.dot",
                       config.out_dir / "g2.dot",
                       config.out_dir / "plots" / "bubble.json",
                       config.out_dir / "plots" / "summary.json",
                       config.out_dir / "plots" / "gender.json",
                       config.out_dir / "diagnostics.txt"};
  return artifacts;
}

}  // namespace revmine
