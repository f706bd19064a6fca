#include "revmine/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

namespace revmine {

namespace {

double sample_variance(std::span<const double> xs, double mean) {
  double rss = 0.0;
  for (double x : xs) rss += (x - mean) * (x - mean);
  return rss / (static_cast<double>(xs.size()) - 1.0);
}

struct GroupSample {
  std::vector<double> values;
  std::size_t undefined = 0;
};

GroupSample collect(std::span<const FeatureRecord> rows, Group group,
                    std::string_view feature) {
  GroupSample sample;
  for (const auto& rec : rows) {
    if (!rec.group || *rec.group != group) continue;
    if (const auto v = feature_value(rec, feature)) {
      sample.values.push_back(*v);
    } else {
      ++sample.undefined;
    }
  }
  return sample;
}

}  // namespace

double sample_mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(sample_variance(xs, sample_mean(xs)));
}

std::optional<WelchResult> welch_t_test(std::span<const double> a,
                                        std::span<const double> b,
                                        std::string* diagnostic) {
  if (a.size() < 2 || b.size() < 2) {
    if (diagnostic) {
      *diagnostic = "sample too small (n1=" + std::to_string(a.size()) +
                    ", n2=" + std::to_string(b.size()) + ", need >= 2 each)";
    }
    return std::nullopt;
  }
  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  const double mean1 = sample_mean(a);
  const double mean2 = sample_mean(b);
  const double var1 = sample_variance(a, mean1);
  const double var2 = sample_variance(b, mean2);

  if (var1 == 0.0 && var2 == 0.0) {
    if (mean1 == mean2) return WelchResult{0.0, n1 + n2 - 2.0, 1.0};
    if (diagnostic) {
      *diagnostic = "both samples are constant with different values";
    }
    return std::nullopt;
  }

  const double ratio1 = var1 / n1;
  const double ratio2 = var2 / n2;
  const double t = (mean1 - mean2) / std::sqrt(ratio1 + ratio2);
  const double df = (ratio1 + ratio2) * (ratio1 + ratio2) /
                    (ratio1 * ratio1 / (n1 - 1.0) +
                     ratio2 * ratio2 / (n2 - 1.0));
  // two-sided p through the regularized incomplete beta behind the t CDF
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(dist, -std::fabs(t));
  return WelchResult{t, df, std::min(p, 1.0)};
}

FilterResult filter_outliers(std::span<const FeatureRecord> features,
                             const OutlierPolicy& policy) {
  if (!(policy.max_time_revising_s > 0.0) ||
      !(policy.min_efficiency_ins_per_s > 0.0)) {
    throw ConfigError("outlier policy bounds must be positive");
  }
  FilterResult result;
  result.kept.reserve(features.size());
  for (const auto& rec : features) {
    if (rec.time_revising_s > policy.max_time_revising_s) {
      result.removed.push_back({rec.user_id, rec.recipe_ordinal, "max_time"});
    } else if (rec.efficiency_ins_per_s &&
               *rec.efficiency_ins_per_s < policy.min_efficiency_ins_per_s) {
      result.removed.push_back(
          {rec.user_id, rec.recipe_ordinal, "min_efficiency"});
    } else {
      result.kept.push_back(rec);
    }
  }
  return result;
}

std::optional<double> feature_value(const FeatureRecord& rec,
                                    std::string_view feature) {
  if (feature == "num_revisions") return static_cast<double>(rec.num_revisions);
  if (feature == "num_edits") return static_cast<double>(rec.num_edits);
  if (feature == "time_revising_s") return rec.time_revising_s;
  if (feature == "pause_mean_s") return rec.pause_mean_s;
  if (feature == "di_ratio") return rec.di_ratio;
  if (feature == "efficiency") return rec.efficiency_ins_per_s;
  throw ConfigError("unknown feature name: " + std::string(feature));
}

std::vector<SummaryRow> summarize_by_group(
    std::span<const FeatureRecord> features, int recipe,
    const OutlierPolicy& policy) {
  const FilterResult filtered = filter_outliers(features, policy);
  std::vector<FeatureRecord> rows;
  for (const auto& rec : filtered.kept) {
    if (rec.recipe_ordinal == recipe) rows.push_back(rec);
  }

  std::vector<SummaryRow> summary;
  for (const auto feature : kEvolutionFeatures) {
    SummaryRow row;
    row.feature = std::string(feature);
    const GroupSample g1 = collect(rows, Group::G1, feature);
    const GroupSample g2 = collect(rows, Group::G2, feature);
    row.n1 = g1.values.size();
    row.n2 = g2.values.size();
    row.undefined_g1 = g1.undefined;
    row.undefined_g2 = g2.undefined;
    if (!g1.values.empty()) {
      row.g1_mean = sample_mean(g1.values);
      row.g1_std = sample_std(g1.values);
    }
    if (!g2.values.empty()) {
      row.g2_mean = sample_mean(g2.values);
      row.g2_std = sample_std(g2.values);
    }
    if (g1.values.empty() || g2.values.empty()) {
      row.diagnostic = "empty group sample after filtering";
    } else {
      std::string why;
      if (const auto welch = welch_t_test(g1.values, g2.values, &why)) {
        row.p_value = welch->p;
      } else {
        row.diagnostic = why;
      }
    }
    summary.push_back(std::move(row));
  }
  return summary;
}

std::vector<GenderComparison> gender_compare(
    std::span<const FeatureRecord> features, Group group,
    const OutlierPolicy& policy) {
  const FilterResult filtered = filter_outliers(features, policy);
  std::vector<GenderComparison> result;
  for (const std::string_view feature : {std::string_view("efficiency"),
                                         std::string_view("di_ratio")}) {
    GenderComparison cmp;
    cmp.feature = std::string(feature);
    std::vector<double> female, male;
    for (const auto& rec : filtered.kept) {
      if (!rec.group || *rec.group != group) continue;
      const auto v = feature_value(rec, feature);
      if (!v) continue;
      if (rec.gender == Gender::Female) female.push_back(*v);
      if (rec.gender == Gender::Male) male.push_back(*v);
    }
    cmp.n_female = female.size();
    cmp.n_male = male.size();
    if (female.empty() || male.empty()) {
      cmp.diagnostic = female.empty() ? "no female rows in group"
                                      : "no male rows in group";
    } else {
      std::string why;
      if (const auto welch = welch_t_test(female, male, &why)) {
        cmp.p = welch->p;
      } else {
        cmp.diagnostic = why;
      }
    }
    result.push_back(std::move(cmp));
  }
  return result;
}

TrendTable engagement_trend(std::span<const FeatureRecord> features,
                            const OutlierPolicy& policy) {
  constexpr int kFirstRecipe = 1;
  constexpr int kLastRecipe = 3;
  const FilterResult filtered = filter_outliers(features, policy);
  std::vector<FeatureRecord> first, last;
  for (const auto& rec : filtered.kept) {
    if (rec.recipe_ordinal == kFirstRecipe) first.push_back(rec);
    if (rec.recipe_ordinal == kLastRecipe) last.push_back(rec);
  }
  TrendTable table;
  for (const Group group : {Group::G1, Group::G2}) {
    auto& row = table.cells[group];
    for (const auto feature : kEvolutionFeatures) {
      TrendCell cell;
      const GroupSample s1 = collect(first, group, feature);
      const GroupSample s3 = collect(last, group, feature);
      if (!s1.values.empty()) cell.mean_first = sample_mean(s1.values);
      if (!s3.values.empty()) cell.mean_last = sample_mean(s3.values);
      if (cell.mean_first && cell.mean_last && *cell.mean_first != 0.0) {
        cell.percent_change =
            100.0 * (*cell.mean_last - *cell.mean_first) / *cell.mean_first;
      }
      row.emplace(std::string(feature), cell);
    }
  }
  return table;
}

StatsBundle compute_stats(std::span<const FeatureRecord> features,
                          const OutlierPolicy& policy) {
  StatsBundle bundle;
  bundle.policy = policy;
  bundle.removed = filter_outliers(features, policy).removed;
  for (const auto& rec : features) {
    if (!std::binary_search(bundle.recipes.begin(), bundle.recipes.end(),
                            rec.recipe_ordinal)) {
      bundle.recipes.insert(
          std::lower_bound(bundle.recipes.begin(), bundle.recipes.end(),
                           rec.recipe_ordinal),
          rec.recipe_ordinal);
    }
  }
  for (int recipe : bundle.recipes) {
    bundle.per_recipe.emplace(recipe,
                              summarize_by_group(features, recipe, policy));
  }
  for (const Group group : {Group::G1, Group::G2}) {
    bundle.gender.emplace(group, gender_compare(features, group, policy));
  }
  bundle.trend = engagement_trend(features, policy);
  return bundle;
}

}  // namespace revmine
