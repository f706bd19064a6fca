#include "revmine/features.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace revmine {

namespace {

constexpr std::string_view kCsvHeader =
    "user_id,group,gender,recipe,num_revisions,num_edits,time_revising_s,"
    "di_ratio,efficiency,pause_mean_s";

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

std::optional<double> parse_opt_double(std::string_view field) {
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size()) {
    throw FormatError("bad numeric field `" + std::string(field) + "`");
  }
  return v;
}

double parse_required_double(std::string_view field, const char* name) {
  const auto v = parse_opt_double(field);
  if (!v) throw FormatError(std::string(name) + " must not be empty");
  return *v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

EditCounts count_edits(std::span<const KeystrokeEvent> keystrokes) {
  EditCounts counts;
  for (const auto& ev : keystrokes) {
    switch (ev.key.kind) {
      case KeyKind::Character:
        ++counts.insertions;
        break;
      case KeyKind::Backspace:
      case KeyKind::Delete:
        ++counts.deletions;
        break;
      case KeyKind::Other:
        break;
    }
  }
  return counts;
}

std::optional<double> pause_mean(std::span<const KeystrokeEvent> keystrokes) {
  if (keystrokes.size() < 2) return std::nullopt;
  // mean of gaps == (last - first) / (n - 1) for a sorted stream
  const double total_ms = static_cast<double>(
      keystrokes.back().time_ms - keystrokes.front().time_ms);
  return total_ms / (static_cast<double>(keystrokes.size() - 1) * 1000.0);
}

double active_time_s(std::span<const KeystrokeEvent> keystrokes) {
  if (keystrokes.size() < 2) return 0.0;
  return static_cast<double>(keystrokes.back().time_ms -
                             keystrokes.front().time_ms) /
         1000.0;
}

FeatureRecord session_features(const Session& session) {
  FeatureRecord rec;
  rec.user_id = session.user_id;
  rec.recipe_ordinal = session.recipe_ordinal;
  rec.num_revisions = static_cast<int>(session.revisions.size());

  std::int64_t rev_insertions = 0;
  std::int64_t rev_deletions = 0;
  double rev_active_s = 0.0;
  std::int64_t gap_total_ms = 0;
  std::int64_t gap_count = 0;
  for (const auto& revision : session.revisions) {
    const EditCounts counts = count_edits(revision.keystrokes);
    rev_insertions += counts.insertions;
    rev_deletions += counts.deletions;
    rev_active_s += active_time_s(revision.keystrokes);
    if (revision.keystrokes.size() >= 2) {
      // gaps stay within one entry; the wait between submissions is not a
      // typing pause
      gap_total_ms += revision.keystrokes.back().time_ms -
                      revision.keystrokes.front().time_ms;
      gap_count += static_cast<std::int64_t>(revision.keystrokes.size()) - 1;
    }
  }
  rec.num_edits = rev_insertions + rev_deletions;
  rec.time_revising_s = rev_active_s;
  if (rev_insertions > 0) {
    rec.di_ratio = static_cast<double>(rev_deletions) /
                   static_cast<double>(rev_insertions);
  }
  if (gap_count > 0) {
    rec.pause_mean_s = static_cast<double>(gap_total_ms) /
                       (static_cast<double>(gap_count) * 1000.0);
  }

  const EditCounts draft_counts = count_edits(session.draft.keystrokes);
  const std::int64_t all_insertions = draft_counts.insertions + rev_insertions;
  const double all_active_s =
      active_time_s(session.draft.keystrokes) + rev_active_s;
  if (all_active_s > 0.0) {
    rec.efficiency_ins_per_s =
        static_cast<double>(all_insertions) / all_active_s;
  }
  return rec;
}

std::vector<FeatureRecord> extract_all(const Corpus& corpus,
                                       std::span<const Session> sessions) {
  std::vector<FeatureRecord> records;
  records.reserve(sessions.size());
  for (const auto& session : sessions) {
    FeatureRecord rec = session_features(session);
    if (const UserProfile* profile = corpus.find_profile(session.user_id)) {
      rec.group = profile->group;
      rec.gender = profile->gender;
    }
    records.push_back(std::move(rec));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const FeatureRecord& a, const FeatureRecord& b) {
                     if (a.user_id != b.user_id) return a.user_id < b.user_id;
                     return a.recipe_ordinal < b.recipe_ordinal;
                   });
  return records;
}

void write_features_csv(std::ostream& out,
                        std::span<const FeatureRecord> records,
                        std::string_view provenance) {
  if (!provenance.empty()) out << "# " << provenance << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.user_id << ',' << (r.group ? to_string(*r.group) : "") << ','
        << to_string(r.gender) << ',' << r.recipe_ordinal << ','
        << r.num_revisions << ',' << r.num_edits << ','
        << fmt_double(r.time_revising_s) << ',' << fmt_opt(r.di_ratio) << ','
        << fmt_opt(r.efficiency_ins_per_s) << ',' << fmt_opt(r.pause_mean_s)
        << '\n';
  }
}

std::vector<FeatureRecord> read_features_csv(std::istream& in) {
  std::vector<FeatureRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (!header_seen) {
      if (row != kCsvHeader) {
        throw FormatError("feature table: unexpected header", line_no);
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= row.size(); ++i) {
      if (i == row.size() || row[i] == ',') {
        fields.push_back(trim(row.substr(start, i - start)));
        start = i + 1;
      }
    }
    if (fields.size() != 10) {
      throw FormatError("feature table line " + std::to_string(line_no) +
                            ": want 10 fields",
                        line_no);
    }
    try {
      FeatureRecord rec;
      rec.user_id = std::string(fields[0]);
      if (!fields[1].empty()) {
        const auto group = parse_group(fields[1]);
        if (!group) throw FormatError("bad group");
        rec.group = *group;
      }
      rec.gender = parse_gender(fields[2]);
      rec.recipe_ordinal =
          static_cast<int>(parse_required_double(fields[3], "recipe"));
      rec.num_revisions =
          static_cast<int>(parse_required_double(fields[4], "num_revisions"));
      rec.num_edits =
          static_cast<std::int64_t>(parse_required_double(fields[5], "num_edits"));
      rec.time_revising_s = parse_required_double(fields[6], "time_revising_s");
      rec.di_ratio = parse_opt_double(fields[7]);
      rec.efficiency_ins_per_s = parse_opt_double(fields[8]);
      rec.pause_mean_s = parse_opt_double(fields[9]);
      records.push_back(std::move(rec));
    } catch (const FormatError& e) {
      throw FormatError("feature table line " + std::to_string(line_no) +
                            ": " + e.what(),
                        line_no);
    }
  }
  return records;
}

}  // namespace revmine
