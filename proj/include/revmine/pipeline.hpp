#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "revmine/ingest.hpp"
#include "revmine/sessionizer.hpp"
#include "revmine/stats.hpp"

namespace revmine {

struct RunConfig {
  std::filesystem::path logs;
  std::filesystem::path profiles;
  std::filesystem::path embeddings;
  std::size_t dim = 50;
  double threshold = 0.995;
  std::optional<std::filesystem::path> overrides;
  OutlierPolicy policy;
  std::filesystem::path out_dir;
  TimeUnit time_unit = TimeUnit::Milliseconds;
};

// Echoed verbatim into every artifact for provenance.
nlohmann::ordered_json config_to_json(const RunConfig& config);

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message),
        stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

nlohmann::ordered_json stats_to_json(const StatsBundle& bundle,
                                     const nlohmann::ordered_json& provenance);

// Plot-ready data series for external renderers.
nlohmann::ordered_json bubble_data(std::span<const Session> sessions,
                                   const Corpus& corpus);
nlohmann::ordered_json summary_data(const StatsBundle& bundle);
nlohmann::ordered_json gender_data(std::span<const Session> sessions,
                                   const Corpus& corpus);

struct ReportArtifacts {
  Corpus corpus;
  std::vector<Session> sessions;
  std::vector<FeatureRecord> features;
  StatsBundle stats;
  std::vector<std::filesystem::path> written;  // artifact paths, in order
};

// ingest -> sessionize -> features -> stats -> dfg -> plots. Validates the
// whole config before writing anything; any stage failure carries its stage
// tag. Outputs are byte-deterministic for identical inputs and config.
ReportArtifacts run_report(const RunConfig& config);

}  // namespace revmine
