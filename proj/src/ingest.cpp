#include "revmine/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace revmine {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::int64_t time_to_ms(const json& t, TimeUnit unit) {
  if (!t.is_number()) throw FormatError("keystroke time is not a number");
  if (unit == TimeUnit::Seconds) {
    const double seconds = t.get<double>();
    if (!(seconds >= 0.0)) throw FormatError("negative keystroke time");
    return std::llround(seconds * 1000.0);
  }
  if (!t.is_number_integer() && !t.is_number_unsigned()) {
    throw FormatError("keystroke time must be integer milliseconds");
  }
  const std::int64_t ms = t.get<std::int64_t>();
  if (ms < 0) throw FormatError("negative keystroke time");
  return ms;
}

KeystrokeParse events_from_json(const json& arr, TimeUnit unit) {
  if (!arr.is_array()) {
    throw FormatError("keystrokes: expected an array of {time, key} records");
  }
  KeystrokeParse out;
  out.events.reserve(arr.size());
  for (const auto& rec : arr) {
    if (!rec.is_object() || !rec.contains("time")) {
      throw FormatError("keystroke record missing `time`");
    }
    const json* key = rec.contains("key")         ? &rec.at("key")
                      : rec.contains("character") ? &rec.at("character")
                                                  : nullptr;
    if (key == nullptr || !key->is_string()) {
      throw FormatError("keystroke record missing string `key`");
    }
    out.events.push_back({time_to_ms(rec.at("time"), unit),
                          Key::from_name(key->get<std::string>())});
  }
  const bool sorted = std::is_sorted(
      out.events.begin(), out.events.end(),
      [](const auto& a, const auto& b) { return a.time_ms < b.time_ms; });
  if (!sorted) {
    std::stable_sort(
        out.events.begin(), out.events.end(),
        [](const auto& a, const auto& b) { return a.time_ms < b.time_ms; });
    out.reordered = true;
  }
  return out;
}

// Index one past the ']' matching the '[' at `start`, or npos.
std::size_t scan_json_array(std::string_view s, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

struct RawEntry {
  SubmissionEntry entry;
  bool keystrokes_reordered = false;
};

RawEntry parse_csv_row(std::string_view line, TimeUnit unit) {
  RawEntry out;
  const std::size_t c1 = line.find(',');
  if (c1 == std::string_view::npos) throw FormatError("missing field separators");
  const auto ts = parse_iso_timestamp(trim(line.substr(0, c1)));
  if (!ts) throw FormatError("bad timestamp (want ISO-8601, e.g. 2023-01-01T12:00:00)");
  out.entry.submitted_at = *ts;

  const std::size_t c2 = line.find(',', c1 + 1);
  if (c2 == std::string_view::npos) throw FormatError("missing keystrokes field");
  out.entry.user_id = std::string(trim(line.substr(c1 + 1, c2 - c1 - 1)));
  if (out.entry.user_id.empty()) throw FormatError("empty user_id");

  std::size_t pos = c2 + 1;
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size() || line[pos] != '[')
    throw FormatError("keystrokes field must be a serialized array");
  const std::size_t arr_end = scan_json_array(line, pos);
  if (arr_end == std::string_view::npos)
    throw FormatError("unterminated keystrokes array");
  auto parsed = parse_keystrokes(line.substr(pos, arr_end - pos), unit);
  out.entry.keystrokes = std::move(parsed.events);
  out.keystrokes_reordered = parsed.reordered;

  pos = arr_end;
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size() || line[pos] != ',')
    throw FormatError("missing text field");
  std::string_view rest = trim(line.substr(pos + 1));
  if (rest.empty() || rest.front() != '"')
    throw FormatError("text field must be a quoted string");
  json text = json::parse(rest, nullptr, true);
  if (!text.is_string()) throw FormatError("text field must be a quoted string");
  out.entry.text = text.get<std::string>();
  return out;
}

RawEntry parse_jsonl_row(std::string_view line, TimeUnit unit) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("bad JSON: ") + e.what(), 0, e.byte);
  }
  if (!obj.is_object()) throw FormatError("expected a JSON object per line");
  for (const char* field : {"ts", "user", "keys", "text"}) {
    if (!obj.contains(field))
      throw FormatError(std::string("missing field `") + field + "`");
  }
  RawEntry out;
  if (!obj["ts"].is_string()) throw FormatError("`ts` must be a string");
  const auto ts = parse_iso_timestamp(obj["ts"].get<std::string>());
  if (!ts) throw FormatError("bad timestamp in `ts`");
  out.entry.submitted_at = *ts;
  if (!obj["user"].is_string() || obj["user"].get<std::string>().empty())
    throw FormatError("`user` must be a non-empty string");
  out.entry.user_id = obj["user"].get<std::string>();
  KeystrokeParse parsed;
  if (obj["keys"].is_string()) {
    parsed = parse_keystrokes(obj["keys"].get<std::string>(), unit);
  } else {
    parsed = events_from_json(obj["keys"], unit);
  }
  out.entry.keystrokes = std::move(parsed.events);
  out.keystrokes_reordered = parsed.reordered;
  if (!obj["text"].is_string()) throw FormatError("`text` must be a string");
  out.entry.text = obj["text"].get<std::string>();
  return out;
}

void parse_profiles(std::istream& in, IngestResult& result) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != "user_id,group,gender,age") {
        throw FormatError(
            "profile file must start with header `user_id,group,gender,age`",
            line_no);
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
    if (fields.size() != 4) {
      result.skipped_profiles.push_back(
          {line_no, "profile row needs 4 fields, got " +
                        std::to_string(fields.size())});
      continue;
    }
    UserProfile profile;
    profile.user_id = std::string(fields[0]);
    if (profile.user_id.empty()) {
      result.skipped_profiles.push_back({line_no, "empty user_id"});
      continue;
    }
    const auto group = parse_group(fields[1]);
    if (!group) {
      result.skipped_profiles.push_back(
          {line_no, "group must be G1 or G2, got `" + std::string(fields[1]) +
                        "`"});
      continue;
    }
    profile.group = *group;
    profile.gender = parse_gender(fields[2]);
    if (profile.gender == Gender::Unknown && !fields[2].empty() &&
        fields[2] != "unknown") {
      result.warnings.push_back(
          {line_no, "unrecognized gender `" + std::string(fields[2]) +
                        "` for " + profile.user_id + ", using unknown"});
    }
    if (!fields[3].empty()) {
      int age = 0;
      bool ok = !fields[3].empty();
      for (char c : fields[3]) {
        if (c < '0' || c > '9') {
          ok = false;
          break;
        }
        age = age * 10 + (c - '0');
      }
      if (!ok || age <= 0) {
        result.skipped_profiles.push_back(
            {line_no, "age must be a positive integer or empty"});
        continue;
      }
      profile.age = age;
    }
    if (result.corpus.profiles.contains(profile.user_id)) {
      result.warnings.push_back(
          {line_no, "duplicate profile for " + profile.user_id +
                        ", keeping the first"});
      continue;
    }
    result.corpus.profiles.emplace(profile.user_id, std::move(profile));
  }
}

}  // namespace

KeystrokeParse parse_keystrokes(std::string_view raw, TimeUnit unit) {
  json arr;
  try {
    arr = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("keystrokes: ") + e.what(), 0, e.byte);
  }
  return events_from_json(arr, unit);
}

IngestResult parse_corpus(std::istream& log_source,
                          std::istream& profile_source, TimeUnit unit) {
  IngestResult result;
  parse_profiles(profile_source, result);

  std::map<std::string, std::vector<SubmissionEntry>> by_user;
  std::string line;
  std::size_t line_no = 0;
  bool jsonl = false;
  bool format_detected = false;
  while (std::getline(log_source, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!format_detected) {
      jsonl = row.front() == '{';
      format_detected = true;
    }
    ++result.total_log_rows;
    try {
      RawEntry raw = jsonl ? parse_jsonl_row(row, unit)
                           : parse_csv_row(row, unit);
      if (raw.keystrokes_reordered) {
        result.warnings.push_back(
            {line_no, "keystrokes out of time order, stable-sorted"});
      }
      by_user[raw.entry.user_id].push_back(std::move(raw.entry));
    } catch (const FormatError& e) {
      result.skipped_rows.push_back({line_no, e.what()});
    }
  }

  result.corpus.users.reserve(by_user.size());
  for (auto& [user_id, entries] : by_user) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const SubmissionEntry& a, const SubmissionEntry& b) {
                       return a.submitted_at < b.submitted_at;
                     });
    if (!result.corpus.profiles.contains(user_id)) {
      result.warnings.push_back(
          {0, "user " + user_id + " has no profile; flagged unassigned"});
    }
    result.corpus.users.push_back({user_id, std::move(entries)});
  }
  return result;
}

IngestResult parse_corpus_files(const std::filesystem::path& logs,
                                const std::filesystem::path& profiles,
                                TimeUnit unit) {
  std::ifstream log_in(logs);
  if (!log_in) throw IoError("cannot open log source: " + logs.string());
  std::ifstream profile_in(profiles);
  if (!profile_in)
    throw IoError("cannot open profile source: " + profiles.string());
  return parse_corpus(log_in, profile_in, unit);
}

}  // namespace revmine
