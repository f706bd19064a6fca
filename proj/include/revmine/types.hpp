#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revmine {

// Fatal error classes. Anything recoverable is reported through Diagnostic
// lists instead of being thrown.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Format violation in an input file; carries the 1-based line number when
// known, or a byte offset for sub-line parse failures.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string message, std::size_t line = 0, std::size_t byte = 0)
      : std::runtime_error(std::move(message)), line_(line), byte_(byte) {}
  std::size_t line() const { return line_; }
  std::size_t byte() const { return byte_; }

 private:
  std::size_t line_;
  std::size_t byte_;
};

enum class KeyKind { Character, Backspace, Delete, Other };

// One key press. Characters hold exactly one Unicode scalar (UTF-8 encoded,
// whitespace allowed); Other keeps the raw multi-character key name so no
// input information is lost, even though edit counting ignores it.
struct Key {
  KeyKind kind = KeyKind::Other;
  std::string text;  // scalar for Character, label for Other, empty otherwise

  static Key character(std::string utf8_scalar) {
    return {KeyKind::Character, std::move(utf8_scalar)};
  }
  static Key backspace() { return {KeyKind::Backspace, {}}; }
  static Key del() { return {KeyKind::Delete, {}}; }
  static Key other(std::string label) {
    return {KeyKind::Other, std::move(label)};
  }

  // Maps a raw key name: "Backspace"/"Delete" to their variants, any single
  // Unicode scalar to Character, everything else to Other.
  static Key from_name(std::string_view name);
  std::string name() const;

  friend bool operator==(const Key&, const Key&) = default;
};

struct KeystrokeEvent {
  std::int64_t time_ms = 0;  // offset from entry start, >= 0
  Key key;

  friend bool operator==(const KeystrokeEvent&, const KeystrokeEvent&) =
      default;
};

// One dated text submission together with its keystroke stream.
struct SubmissionEntry {
  std::string user_id;
  std::int64_t submitted_at = 0;  // seconds since Unix epoch, UTC
  std::vector<KeystrokeEvent> keystrokes;  // sorted by time_ms
  std::string text;

  friend bool operator==(const SubmissionEntry&, const SubmissionEntry&) =
      default;
};

enum class Group { G1, G2 };
enum class Gender { Female, Male, Other, Unknown };

std::string_view to_string(Group g);
std::string_view to_string(Gender g);
std::optional<Group> parse_group(std::string_view s);
Gender parse_gender(std::string_view s);  // unrecognized -> Unknown

struct UserProfile {
  std::string user_id;
  Group group = Group::G1;
  Gender gender = Gender::Unknown;
  std::optional<int> age;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct UserLog {
  std::string user_id;
  std::vector<SubmissionEntry> entries;  // sorted by submitted_at, stable

  friend bool operator==(const UserLog&, const UserLog&) = default;
};

// Immutable after construction; users sorted by user_id so every downstream
// iteration order is deterministic.
struct Corpus {
  std::vector<UserLog> users;
  std::map<std::string, UserProfile> profiles;

  const UserLog* find_user(std::string_view user_id) const;
  const UserProfile* find_profile(std::string_view user_id) const;
  std::size_t entry_count() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct Diagnostic {
  std::size_t line = 0;  // 1-based input line, 0 when not line-bound
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// "YYYY-MM-DDTHH:MM:SS" (also accepts a space separator and a trailing 'Z');
// proleptic Gregorian, UTC, second resolution.
std::optional<std::int64_t> parse_iso_timestamp(std::string_view s);
std::string format_iso_timestamp(std::int64_t seconds_since_epoch);

// Number of Unicode scalars in a UTF-8 string (counts lead bytes).
std::size_t utf8_scalar_count(std::string_view s);

}  // namespace revmine
