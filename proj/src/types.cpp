#include "revmine/types.hpp"

#include <algorithm>
#include <cstdio>

namespace revmine {

namespace {

// Howard Hinnant's civil-date algorithms, proleptic Gregorian.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                     unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len,
                      unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace

Key Key::from_name(std::string_view name) {
  if (name == "Backspace") return backspace();
  if (name == "Delete") return del();
  if (utf8_scalar_count(name) == 1) return character(std::string(name));
  return other(std::string(name));
}

std::string Key::name() const {
  switch (kind) {
    case KeyKind::Character:
      return text;
    case KeyKind::Backspace:
      return "Backspace";
    case KeyKind::Delete:
      return "Delete";
    case KeyKind::Other:
      return text;
  }
  return text;
}

std::string_view to_string(Group g) { return g == Group::G1 ? "G1" : "G2"; }

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Female:
      return "female";
    case Gender::Male:
      return "male";
    case Gender::Other:
      return "other";
    case Gender::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<Group> parse_group(std::string_view s) {
  if (s == "G1") return Group::G1;
  if (s == "G2") return Group::G2;
  return std::nullopt;
}

Gender parse_gender(std::string_view s) {
  if (s == "female") return Gender::Female;
  if (s == "male") return Gender::Male;
  if (s == "other") return Gender::Other;
  return Gender::Unknown;
}

const UserLog* Corpus::find_user(std::string_view user_id) const {
  auto it = std::lower_bound(
      users.begin(), users.end(), user_id,
      [](const UserLog& u, std::string_view id) { return u.user_id < id; });
  if (it == users.end() || it->user_id != user_id) return nullptr;
  return &*it;
}

const UserProfile* Corpus::find_profile(std::string_view user_id) const {
  auto it = profiles.find(std::string(user_id));
  return it == profiles.end() ? nullptr : &it->second;
}

std::size_t Corpus::entry_count() const {
  std::size_t n = 0;
  for (const auto& u : users) n += u.entries.size();
  return n;
}

std::optional<std::int64_t> parse_iso_timestamp(std::string_view s) {
  // YYYY-MM-DD{T or space}HH:MM:SS with optional trailing 'Z'
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 19) return std::nullopt;
  unsigned y, mo, d, h, mi, se;
  if (!parse_fixed_uint(s, 0, 4, y) || s[4] != '-' ||
      !parse_fixed_uint(s, 5, 2, mo) || s[7] != '-' ||
      !parse_fixed_uint(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') ||
      !parse_fixed_uint(s, 11, 2, h) || s[13] != ':' ||
      !parse_fixed_uint(s, 14, 2, mi) || s[16] != ':' ||
      !parse_fixed_uint(s, 17, 2, se)) {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60) {
    return std::nullopt;
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

std::string format_iso_timestamp(std::int64_t t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned mo, d;
  civil_from_days(days, y, mo, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                static_cast<long long>(y), mo, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

std::size_t utf8_scalar_count(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace revmine
