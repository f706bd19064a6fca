#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "revmine/types.hpp"

namespace revmine {

enum class TimeUnit { Milliseconds, Seconds };

struct KeystrokeParse {
  std::vector<KeystrokeEvent> events;  // non-decreasing in time_ms
  bool reordered = false;  // input was out of order and got stable-sorted
};

// Parses a serialized array of {time, key} records ("character" is accepted
// as an alias for "key"). Throws FormatError carrying the byte offset on
// unparseable input. In Seconds mode fractional times are converted to ms.
KeystrokeParse parse_keystrokes(std::string_view raw,
                                TimeUnit unit = TimeUnit::Milliseconds);

struct IngestResult {
  Corpus corpus;
  std::vector<Diagnostic> skipped_rows;      // malformed log rows, in order
  std::vector<Diagnostic> skipped_profiles;  // malformed profile rows
  std::vector<Diagnostic> warnings;          // recoverable oddities
  std::size_t total_log_rows = 0;            // non-blank log lines seen
};

// Log source: one record per line, either
//   `timestamp,user_id,[{...keystrokes...}],"text"` or a JSON-lines object
//   `{ts, user, keys, text}` (auto-detected by first non-blank byte '{').
// Profile source: CSV with header `user_id,group,gender,age`.
// Malformed rows are skipped and recorded, never silently dropped.
IngestResult parse_corpus(std::istream& log_source,
                          std::istream& profile_source,
                          TimeUnit unit = TimeUnit::Milliseconds);

IngestResult parse_corpus_files(const std::filesystem::path& logs,
                                const std::filesystem::path& profiles,
                                TimeUnit unit = TimeUnit::Milliseconds);

}  // namespace revmine
