// revmine: mines keystroke logs from writing experiments into sessions,
// SRL feature tables, group statistics and directly-follows graphs.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "revmine/corpus_io.hpp"
#include "revmine/pipeline.hpp"
#include "revmine/procmine.hpp"
#include "revmine/synth.hpp"
#include "revmine/version.hpp"

namespace {

using namespace revmine;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

std::string provenance_line(const nlohmann::ordered_json& config) {
  return std::string(kToolName) + " " + std::string(kToolVersion) +
         " config=" + config.dump();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

TimeUnit parse_time_unit(const std::string& s) {
  if (s == "ms") return TimeUnit::Milliseconds;
  if (s == "s") return TimeUnit::Seconds;
  throw ConfigError("time unit must be ms or s");
}

int run_ingest(const std::string& logs, const std::string& profiles,
               const std::string& out, const std::string& time_unit) {
  const IngestResult result =
      parse_corpus_files(logs, profiles, parse_time_unit(time_unit));
  save_corpus(result.corpus, std::filesystem::path(out));
  std::cerr << "ingested " << result.corpus.users.size() << " users, "
            << result.corpus.entry_count() << " entries ("
            << result.skipped_rows.size() << " of "
            << result.total_log_rows << " log rows skipped, "
            << result.skipped_profiles.size() << " profile rows skipped)\n";
  for (const auto& d : result.skipped_rows) {
    std::cerr << "  skipped log row " << d.line << ": " << d.message << "\n";
  }
  for (const auto& d : result.skipped_profiles) {
    std::cerr << "  skipped profile row " << d.line << ": " << d.message
              << "\n";
  }
  for (const auto& d : result.warnings) {
    std::cerr << "  warning: " << d.message << "\n";
  }
  return kExitOk;
}

int run_sessionize(const std::string& corpus_path,
                   const std::string& embeddings, std::size_t dim,
                   double threshold, const std::string& overrides_path,
                   const std::string& out) {
  const Corpus corpus = load_corpus(std::filesystem::path(corpus_path));
  const VectorStore store = load_store(embeddings, dim);
  std::vector<BoundaryOverride> overrides;
  if (!overrides_path.empty()) {
    std::ifstream in(overrides_path);
    if (!in) throw IoError("cannot open overrides: " + overrides_path);
    overrides = parse_overrides(in);
  }
  const SessionizeResult result =
      sessionize_corpus(corpus, store, threshold, overrides);

  nlohmann::ordered_json config;
  config["corpus"] = corpus_path;
  config["embeddings"] = embeddings;
  config["dim"] = dim;
  config["threshold"] = threshold;
  config["overrides"] = overrides_path;
  std::ofstream manifest(out, std::ios::binary);
  if (!manifest) throw IoError("cannot open for writing: " + out);
  manifest << "# " << provenance_line(config) << "\n";
  write_session_manifest(manifest, result.sessions);
  if (!manifest) throw IoError("failed writing " + out);

  std::cerr << "sessionized " << corpus.users.size() << " users into "
            << result.sessions.size() << " sessions\n";
  for (const auto& note : result.notes) {
    std::cerr << "  " << note.message << "\n";
  }
  return kExitOk;
}

int run_features(const std::string& corpus_path,
                 const std::string& sessions_path, const std::string& out) {
  const Corpus corpus = load_corpus(std::filesystem::path(corpus_path));
  std::ifstream manifest(sessions_path);
  if (!manifest) throw IoError("cannot open sessions: " + sessions_path);
  const std::vector<Session> sessions =
      read_session_manifest(manifest, corpus);
  const std::vector<FeatureRecord> features = extract_all(corpus, sessions);

  nlohmann::ordered_json config;
  config["corpus"] = corpus_path;
  config["sessions"] = sessions_path;
  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw IoError("cannot open for writing: " + out);
  write_features_csv(csv, features, provenance_line(config));
  if (!csv) throw IoError("failed writing " + out);
  std::cerr << "extracted " << features.size() << " feature records\n";
  return kExitOk;
}

int run_stats(const std::string& features_path, const std::string& out,
              double max_time, double min_eff) {
  std::ifstream in(features_path);
  if (!in) throw IoError("cannot open features: " + features_path);
  const std::vector<FeatureRecord> features = read_features_csv(in);
  const OutlierPolicy policy{max_time, min_eff};
  const StatsBundle bundle = compute_stats(features, policy);

  nlohmann::ordered_json provenance;
  provenance["tool"] = kToolName;
  provenance["version"] = kToolVersion;
  provenance["config"] = {{"features", features_path},
                          {"outlier_max_time_s", max_time},
                          {"outlier_min_efficiency", min_eff}};
  write_file(out, stats_to_json(bundle, provenance).dump(2) + "\n");
  std::cerr << "stats over " << features.size() << " records ("
            << bundle.removed.size() << " outliers removed)\n";
  return kExitOk;
}

int run_dfg(const std::string& corpus_path, const std::string& sessions_path,
            const std::string& group_name, const std::string& out) {
  const auto group = parse_group(group_name);
  if (!group) throw ConfigError("group must be G1 or G2");
  const Corpus corpus = load_corpus(std::filesystem::path(corpus_path));
  std::ifstream manifest(sessions_path);
  if (!manifest) throw IoError("cannot open sessions: " + sessions_path);
  const std::vector<Session> sessions =
      read_session_manifest(manifest, corpus);
  const EventLog log = build_event_log(sessions, corpus, *group);
  if (log.traces.empty()) {
    throw ConfigError("no traces for group " + group_name +
                      " (no users of that group in the corpus)");
  }
  nlohmann::ordered_json config;
  config["corpus"] = corpus_path;
  config["sessions"] = sessions_path;
  config["group"] = group_name;
  write_file(out, "// " + provenance_line(config) + "\n" +
                      export_dot(discover_dfg(log)));
  std::cerr << "dfg for " << group_name << ": " << log.traces.size()
            << " traces\n";
  return kExitOk;
}

int run_simulate(const std::string& plan_path, std::uint64_t seed,
                 bool seed_given, const std::string& out,
                 const std::string& truth_path,
                 const std::string& profiles_out,
                 const std::string& embeddings_out) {
  SimPlan plan;
  if (!plan_path.empty()) {
    std::ifstream in(plan_path);
    if (!in) throw IoError("cannot open plan: " + plan_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("bad plan file: " + std::string(e.what()));
    }
    plan = plan_from_json(j);
  }
  if (seed_given) plan.seed = seed;
  const SynthResult result = generate_corpus(plan);

  {
    std::ofstream logs(out, std::ios::binary);
    if (!logs) throw IoError("cannot open for writing: " + out);
    write_logs_jsonl(logs, result.corpus);
    if (!logs) throw IoError("failed writing " + out);
  }
  if (!truth_path.empty()) {
    nlohmann::json truth = truth_to_json(result.truth);
    truth["plan"] = plan_to_json(plan);
    write_file(truth_path, truth.dump(2) + "\n");
  }
  if (!profiles_out.empty()) {
    std::ofstream profiles(profiles_out, std::ios::binary);
    if (!profiles) throw IoError("cannot open for writing: " + profiles_out);
    write_profiles_csv(profiles, result.corpus);
  }
  if (!embeddings_out.empty()) {
    std::ofstream vectors(embeddings_out, std::ios::binary);
    if (!vectors) throw IoError("cannot open for writing: " + embeddings_out);
    write_vector_file(vectors, result);
  }
  std::cerr << "simulated " << result.corpus.users.size() << " users, "
            << result.corpus.entry_count() << " entries (seed " << plan.seed
            << ")\n";
  return kExitOk;
}

int run_report_cmd(const RunConfig& config) {
  const ReportArtifacts artifacts = run_report(config);
  std::cerr << "report complete: " << artifacts.features.size()
            << " feature records, artifacts in "
            << config.out_dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"keystroke-log mining for writing experiments"};
  app.set_version_flag("--version", std::string(kToolName) + " " +
                                        std::string(kToolVersion));
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse raw logs into a corpus cache");
  std::string in_logs, in_profiles, in_out, in_unit = "ms";
  ingest->add_option("--logs", in_logs, "log source (csv lines or jsonl)")->required();
  ingest->add_option("--profiles", in_profiles, "profile csv")->required();
  ingest->add_option("--out", in_out, "corpus cache output")->required();
  ingest->add_option("--time-unit", in_unit, "keystroke time unit: ms or s");

  // sessionize
  auto* sessionize = app.add_subcommand("sessionize", "split entries into recipe sessions");
  std::string se_corpus, se_embeddings, se_overrides, se_out;
  std::size_t se_dim = 50;
  double se_threshold = 0.995;
  sessionize->add_option("--corpus", se_corpus, "corpus cache")->required();
  sessionize->add_option("--embeddings", se_embeddings, "word vector file")->required();
  sessionize->add_option("--dim", se_dim, "vector dimension");
  sessionize->add_option("--threshold", se_threshold, "similarity threshold");
  sessionize->add_option("--overrides", se_overrides, "manual boundary fixes csv");
  sessionize->add_option("--out", se_out, "session manifest output")->required();

  // features
  auto* features = app.add_subcommand("features", "compute the six SRL feature variables");
  std::string fe_corpus, fe_sessions, fe_out;
  features->add_option("--corpus", fe_corpus, "corpus cache")->required();
  features->add_option("--sessions", fe_sessions, "session manifest")->required();
  features->add_option("--out", fe_out, "feature csv output")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "group summaries, t-tests and trends");
  std::string st_features, st_out;
  double st_max_time = 10000.0, st_min_eff = 0.05;
  stats->add_option("--features", st_features, "feature csv")->required();
  stats->add_option("--out", st_out, "stats json output")->required();
  stats->add_option("--outlier-max-time", st_max_time, "max seconds revising");
  stats->add_option("--outlier-min-eff", st_min_eff, "min efficiency (ins/s)");

  // dfg
  auto* dfg = app.add_subcommand("dfg", "discover a directly-follows graph");
  std::string df_corpus, df_sessions, df_group, df_out;
  dfg->add_option("--corpus", df_corpus, "corpus cache")->required();
  dfg->add_option("--sessions", df_sessions, "session manifest")->required();
  dfg->add_option("--group", df_group, "G1 or G2")->required();
  dfg->add_option("--out", df_out, "dot output")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a seeded synthetic corpus");
  std::string si_plan, si_out, si_truth, si_profiles, si_embeddings;
  std::uint64_t si_seed = 42;
  simulate->add_option("--plan", si_plan, "plan json (defaults when omitted)");
  auto* seed_opt = simulate->add_option("--seed", si_seed, "overrides the plan seed");
  simulate->add_option("--out", si_out, "log jsonl output")->required();
  simulate->add_option("--truth", si_truth, "ground-truth json output");
  simulate->add_option("--profiles-out", si_profiles, "profile csv output");
  simulate->add_option("--embeddings-out", si_embeddings,
                       "matching word-vector file output");

  // report
  auto* report = app.add_subcommand("report", "run the whole pipeline");
  std::string re_logs, re_profiles, re_embeddings, re_overrides, re_out_dir;
  std::string re_unit = "ms";
  std::size_t re_dim = 50;
  double re_threshold = 0.995, re_max_time = 10000.0, re_min_eff = 0.05;
  report->add_option("--logs", re_logs, "log source")->required();
  report->add_option("--profiles", re_profiles, "profile csv")->required();
  report->add_option("--embeddings", re_embeddings, "word vector file")->required();
  report->add_option("--dim", re_dim, "vector dimension");
  report->add_option("--threshold", re_threshold, "similarity threshold");
  report->add_option("--overrides", re_overrides, "manual boundary fixes csv");
  report->add_option("--outlier-max-time", re_max_time, "max seconds revising");
  report->add_option("--outlier-min-eff", re_min_eff, "min efficiency (ins/s)");
  report->add_option("--out-dir", re_out_dir, "artifact directory")->required();
  report->add_option("--time-unit", re_unit, "keystroke time unit: ms or s");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      return run_ingest(in_logs, in_profiles, in_out, in_unit);
    }
    if (sessionize->parsed()) {
      return run_sessionize(se_corpus, se_embeddings, se_dim, se_threshold,
                            se_overrides, se_out);
    }
    if (features->parsed()) {
      return run_features(fe_corpus, fe_sessions, fe_out);
    }
    if (stats->parsed()) {
      return run_stats(st_features, st_out, st_max_time, st_min_eff);
    }
    if (dfg->parsed()) {
      return run_dfg(df_corpus, df_sessions, df_group, df_out);
    }
    if (simulate->parsed()) {
      return run_simulate(si_plan, si_seed, seed_opt->count() > 0, si_out,
                          si_truth, si_profiles, si_embeddings);
    }
    if (report->parsed()) {
      RunConfig config;
      config.logs = re_logs;
      config.profiles = re_profiles;
      config.embeddings = re_embeddings;
      config.dim = re_dim;
      config.threshold = re_threshold;
      if (!re_overrides.empty()) config.overrides = re_overrides;
      config.policy = OutlierPolicy{re_max_time, re_min_eff};
      config.out_dir = re_out_dir;
      config.time_unit = parse_time_unit(re_unit);
      return run_report_cmd(config);
    }
  } catch (const StageError& e) {
    std::cerr << "revmine: " << e.what() << "\n";
    return e.stage() == "config" ? kExitConfig : kExitFailure;
  } catch (const ConfigError& e) {
    std::cerr << "revmine: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "revmine: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
