#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revmine/features.hpp"

namespace revmine {

double sample_mean(std::span<const double> xs);
// Sample (n-1) standard deviation, the convention used in all reporting.
double sample_std(std::span<const double> xs);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Welch unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
// Undefined (with a note in *diagnostic) when a sample has fewer than two
// values or both samples are constant with different values; two equal
// constant samples give t=0, p=1.
std::optional<WelchResult> welch_t_test(std::span<const double> a,
                                        std::span<const double> b,
                                        std::string* diagnostic = nullptr);

struct OutlierPolicy {
  double max_time_revising_s = 10000.0;
  double min_efficiency_ins_per_s = 0.05;
};

struct RemovedRow {
  std::string user_id;
  int recipe_ordinal = 0;
  std::string reason;  // "max_time" or "min_efficiency"
};

struct FilterResult {
  std::vector<FeatureRecord> kept;
  std::vector<RemovedRow> removed;
};

// Drops rows revising strictly longer than the cap ("over" the footnote
// threshold, so a row exactly at the cap stays) or with a defined efficiency
// below the floor.
FilterResult filter_outliers(std::span<const FeatureRecord> features,
                             const OutlierPolicy& policy);

// The four evolution features reported per recipe, in table order.
inline constexpr std::array<std::string_view, 4> kEvolutionFeatures = {
    "num_revisions", "num_edits", "time_revising_s", "pause_mean_s"};

// Value of a named feature for one record; nullopt when Undefined.
std::optional<double> feature_value(const FeatureRecord& rec,
                                    std::string_view feature);

struct SummaryRow {
  std::string feature;
  std::optional<double> g1_mean, g1_std, g2_mean, g2_std;
  std::optional<double> p_value;
  std::size_t n1 = 0, n2 = 0;              // defined samples used
  std::size_t undefined_g1 = 0, undefined_g2 = 0;  // excluded rows
  std::string diagnostic;
};

// Group comparison for one recipe over the evolution features; outlier policy
// applied, Undefined values excluded with counts reported.
std::vector<SummaryRow> summarize_by_group(
    std::span<const FeatureRecord> features, int recipe,
    const OutlierPolicy& policy);

struct GenderComparison {
  std::string feature;  // "efficiency" or "di_ratio"
  std::optional<double> p;
  std::size_t n_female = 0, n_male = 0;
  std::string diagnostic;
};

// Female-vs-male Welch test within one group on efficiency and DIRatio,
// pooled over recipes.
std::vector<GenderComparison> gender_compare(
    std::span<const FeatureRecord> features, Group group,
    const OutlierPolicy& policy);

struct TrendCell {
  std::optional<double> percent_change;  // 100 * (mean3 - mean1) / mean1
  std::optional<double> mean_first, mean_last;
};

struct TrendTable {
  // group -> feature -> cell; features in kEvolutionFeatures order
  std::map<Group, std::map<std::string, TrendCell, std::less<>>> cells;
};

// Per-group percent change of each evolution feature between the first and
// third recipe; Undefined when the first-recipe mean is zero or missing.
TrendTable engagement_trend(std::span<const FeatureRecord> features,
                            const OutlierPolicy& policy);

struct StatsBundle {
  OutlierPolicy policy;
  std::vector<RemovedRow> removed;
  std::vector<int> recipes;  // distinct ordinals present, ascending
  std::map<int, std::vector<SummaryRow>> per_recipe;
  std::map<Group, std::vector<GenderComparison>> gender;
  TrendTable trend;
};

StatsBundle compute_stats(std::span<const FeatureRecord> features,
                          const OutlierPolicy& policy);

}  // namespace revmine
