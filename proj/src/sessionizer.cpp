#include "revmine/sessionizer.hpp"

#include <algorithm>
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

}  // namespace

BoundarySet find_boundaries(std::span<const SubmissionEntry> entries,
                            const VectorStore& store, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("session threshold must be in (0, 1)");
  }
  BoundarySet set;
  if (entries.size() < 2) return set;

  std::vector<TextVector> vectors;
  vectors.reserve(entries.size());
  for (const auto& entry : entries) {
    vectors.push_back(embed_text(preprocess(entry.text), store));
  }

  std::vector<bool> flagged(entries.size(), false);
  std::size_t anchor = 0;
  while (anchor < entries.size() - 1) {
    std::size_t next_anchor = entries.size();
    for (std::size_t n = anchor + 1; n < entries.size(); ++n) {
      const auto sim = cosine_similarity(vectors[anchor], vectors[n]);
      if (!sim) {
        flagged[n] = true;  // manual-review flag, never a boundary
        continue;
      }
      if (*sim < threshold) {
        set.boundaries.push_back(n);
        next_anchor = n;
        break;
      }
    }
    if (next_anchor == entries.size()) break;  // scan exhausted
    anchor = next_anchor;
  }
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    if (flagged[i]) set.undefined_entries.push_back(i);
  }
  return set;
}

std::vector<BoundaryOverride> parse_overrides(std::istream& in) {
  std::vector<BoundaryOverride> overrides;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (line_no == 1 && row == "user_id,op,index") continue;  // tolerate header
    const std::size_t c1 = row.find(',');
    const std::size_t c2 =
        c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw FormatError("override line " + std::to_string(line_no) +
                            ": want `user_id,op,index`",
                        line_no);
    }
    BoundaryOverride ov;
    ov.user_id = std::string(trim(row.substr(0, c1)));
    const std::string_view op = trim(row.substr(c1 + 1, c2 - c1 - 1));
    if (op == "add") {
      ov.op = OverrideOp::Add;
    } else if (op == "remove") {
      ov.op = OverrideOp::Remove;
    } else {
      throw FormatError("override line " + std::to_string(line_no) +
                            ": op must be add or remove",
                        line_no);
    }
    const std::string_view idx = trim(row.substr(c2 + 1));
    std::size_t value = 0;
    if (idx.empty() ||
        !std::all_of(idx.begin(), idx.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw FormatError("override line " + std::to_string(line_no) +
                            ": index must be a non-negative integer",
                        line_no);
    }
    for (char c : idx) value = value * 10 + static_cast<std::size_t>(c - '0');
    ov.index = value;
    overrides.push_back(std::move(ov));
  }
  return overrides;
}

BoundarySet apply_overrides(BoundarySet set,
                            std::span<const BoundaryOverride> overrides,
                            std::string_view user_id,
                            std::size_t entry_count) {
  for (const auto& ov : overrides) {
    if (ov.user_id != user_id) continue;
    if (ov.index == 0 || ov.index >= entry_count) {
      throw ConfigError("override for user " + ov.user_id + ": index " +
                        std::to_string(ov.index) + " out of range (user has " +
                        std::to_string(entry_count) + " entries)");
    }
    auto it = std::lower_bound(set.boundaries.begin(), set.boundaries.end(),
                               ov.index);
    const bool present = it != set.boundaries.end() && *it == ov.index;
    if (ov.op == OverrideOp::Add) {
      if (!present) set.boundaries.insert(it, ov.index);
    } else {
      if (!present) {
        throw ConfigError("override for user " + ov.user_id + ": index " +
                          std::to_string(ov.index) +
                          " is not a detected boundary, cannot remove");
      }
      set.boundaries.erase(it);
    }
  }
  return set;
}

std::vector<Session> build_sessions(std::span<const SubmissionEntry> entries,
                                    const BoundarySet& set) {
  std::vector<Session> sessions;
  if (entries.empty()) return sessions;
  std::vector<std::size_t> starts{0};
  starts.insert(starts.end(), set.boundaries.begin(), set.boundaries.end());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::size_t begin = starts[s];
    const std::size_t end =
        s + 1 < starts.size() ? starts[s + 1] : entries.size();
    Session session;
    session.user_id = entries[begin].user_id;
    session.recipe_ordinal = static_cast<int>(s) + 1;
    session.draft_index = begin;
    session.draft = entries[begin];
    session.revisions.assign(entries.begin() + static_cast<std::ptrdiff_t>(begin) + 1,
                             entries.begin() + static_cast<std::ptrdiff_t>(end));
    for (std::size_t flagged : set.undefined_entries) {
      if (flagged >= begin && flagged < end)
        session.flagged_entries.push_back(flagged);
    }
    sessions.push_back(std::move(session));
  }
  return sessions;
}

SessionizeResult sessionize_corpus(const Corpus& corpus,
                                   const VectorStore& store, double threshold,
                                   std::span<const BoundaryOverride> overrides,
                                   int warn_above_ordinal) {
  for (const auto& ov : overrides) {
    if (corpus.find_user(ov.user_id) == nullptr) {
      throw ConfigError("override for unknown user " + ov.user_id);
    }
  }
  SessionizeResult result;
  for (const auto& user : corpus.users) {
    BoundarySet set = find_boundaries(user.entries, store, threshold);
    set = apply_overrides(std::move(set), overrides, user.user_id,
                          user.entries.size());
    for (std::size_t flagged : set.undefined_entries) {
      result.notes.push_back(
          {0, "user " + user.user_id + " entry " + std::to_string(flagged) +
                  ": similarity undefined (zero embedding), review manually"});
    }
    auto sessions = build_sessions(user.entries, set);
    if (!sessions.empty() &&
        sessions.back().recipe_ordinal > warn_above_ordinal) {
      result.notes.push_back(
          {0, "user " + user.user_id + " has " +
                  std::to_string(sessions.back().recipe_ordinal) +
                  " recipes, more than the expected " +
                  std::to_string(warn_above_ordinal)});
    }
    result.sessions.insert(result.sessions.end(),
                           std::make_move_iterator(sessions.begin()),
                           std::make_move_iterator(sessions.end()));
  }
  return result;
}

void write_session_manifest(std::ostream& out,
                            std::span<const Session> sessions) {
  for (const auto& s : sessions) {
    json revisions = json::array();
    for (std::size_t i = 1; i <= s.revisions.size(); ++i) {
      revisions.push_back(s.draft_index + i);
    }
    json flags = json::array();
    for (std::size_t f : s.flagged_entries) flags.push_back(f);
    const json row = {{"user", s.user_id},
                      {"recipe", s.recipe_ordinal},
                      {"draft", s.draft_index},
                      {"revisions", std::move(revisions)},
                      {"flags", std::move(flags)}};
    out << row.dump() << '\n';
  }
}

std::vector<Session> read_session_manifest(std::istream& in,
                                           const Corpus& corpus) {
  std::vector<Session> sessions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row_text = trim(line);
    if (row_text.empty() || row_text.front() == '#') continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("session manifest line " + std::to_string(line_no) +
                            ": " + e.what(),
                        line_no);
    }
    const auto user_id = row.at("user").get<std::string>();
    const UserLog* user = corpus.find_user(user_id);
    if (user == nullptr) {
      throw FormatError("session manifest line " + std::to_string(line_no) +
                            ": user " + user_id + " not in corpus",
                        line_no);
    }
    Session s;
    s.user_id = user_id;
    s.recipe_ordinal = row.at("recipe").get<int>();
    s.draft_index = row.at("draft").get<std::size_t>();
    const auto revision_indices =
        row.at("revisions").get<std::vector<std::size_t>>();
    const std::size_t end = s.draft_index + revision_indices.size() + 1;
    if (end > user->entries.size()) {
      throw FormatError("session manifest line " + std::to_string(line_no) +
                            ": span exceeds entry count for " + user_id,
                        line_no);
    }
    for (std::size_t i = 0; i < revision_indices.size(); ++i) {
      if (revision_indices[i] != s.draft_index + i + 1) {
        throw FormatError("session manifest line " + std::to_string(line_no) +
                              ": revision indices must be contiguous",
                          line_no);
      }
    }
    s.draft = user->entries[s.draft_index];
    s.revisions.assign(
        user->entries.begin() + static_cast<std::ptrdiff_t>(s.draft_index) + 1,
        user->entries.begin() + static_cast<std::ptrdiff_t>(end));
    if (row.contains("flags")) {
      s.flagged_entries = row.at("flags").get<std::vector<std::size_t>>();
    }
    sessions.push_back(std::move(s));
  }
  return sessions;
}

}  // namespace revmine
