#pragma once

// Shared test utilities and the naive oracles the implementation is checked
// against. The oracles recompute everything step by step from raw events and
// must stay independent of the library code paths they verify.

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "revmine/features.hpp"
#include "revmine/sessionizer.hpp"
#include "revmine/types.hpp"

namespace revtest {

inline std::filesystem::path data_dir() {
  return std::filesystem::path(REVMINE_TEST_DATA_DIR);
}

inline revmine::KeystrokeEvent ch(std::int64_t t, char c) {
  return {t, revmine::Key::character(std::string(1, c))};
}

inline revmine::KeystrokeEvent bs(std::int64_t t) {
  return {t, revmine::Key::backspace()};
}

inline revmine::KeystrokeEvent del(std::int64_t t) {
  return {t, revmine::Key::del()};
}

inline revmine::KeystrokeEvent other(std::int64_t t, std::string label) {
  return {t, revmine::Key::other(std::move(label))};
}

inline revmine::SubmissionEntry entry(
    std::string user, std::int64_t submitted_at,
    std::vector<revmine::KeystrokeEvent> keystrokes, std::string text = "") {
  revmine::SubmissionEntry e;
  e.user_id = std::move(user);
  e.submitted_at = submitted_at;
  e.keystrokes = std::move(keystrokes);
  e.text = std::move(text);
  return e;
}

// ---------------------------------------------------------------------------
// naive feature oracle: walks raw events, one definition at a time

struct NaiveFeatures {
  int num_revisions = 0;
  long long num_edits = 0;
  double time_revising_s = 0.0;
  std::optional<double> di_ratio;
  std::optional<double> efficiency;
  std::optional<double> pause_mean_s;
};

inline long long naive_insertions(const std::vector<revmine::KeystrokeEvent>& ks) {
  long long n = 0;
  for (const auto& ev : ks) {
    if (ev.key.kind == revmine::KeyKind::Character) ++n;
  }
  return n;
}

inline long long naive_deletions(const std::vector<revmine::KeystrokeEvent>& ks) {
  long long n = 0;
  for (const auto& ev : ks) {
    if (ev.key.kind == revmine::KeyKind::Backspace ||
        ev.key.kind == revmine::KeyKind::Delete) {
      ++n;
    }
  }
  return n;
}

inline double naive_active_s(const std::vector<revmine::KeystrokeEvent>& ks) {
  if (ks.size() < 2) return 0.0;
  return double(ks.back().time_ms - ks.front().time_ms) / 1000.0;
}

inline NaiveFeatures naive_session_features(const revmine::Session& s) {
  NaiveFeatures out;
  out.num_revisions = int(s.revisions.size());
  long long ins = 0, dels = 0;
  std::vector<double> gaps_ms;
  for (const auto& rev : s.revisions) {
    ins += naive_insertions(rev.keystrokes);
    dels += naive_deletions(rev.keystrokes);
    out.num_edits += naive_insertions(rev.keystrokes) +
                     naive_deletions(rev.keystrokes);
    out.time_revising_s += naive_active_s(rev.keystrokes);
    for (std::size_t i = 1; i < rev.keystrokes.size(); ++i) {
      gaps_ms.push_back(double(rev.keystrokes[i].time_ms -
                               rev.keystrokes[i - 1].time_ms));
    }
  }
  if (ins > 0) out.di_ratio = double(dels) / double(ins);
  if (!gaps_ms.empty()) {
    double sum = 0.0;
    for (double g : gaps_ms) sum += g;
    out.pause_mean_s = sum / (double(gaps_ms.size()) * 1000.0);
  }
  long long all_ins = ins + naive_insertions(s.draft.keystrokes);
  double all_active = out.time_revising_s + naive_active_s(s.draft.keystrokes);
  // recompute revision active time the slow way to keep the routes separate
  double rev_active = 0.0;
  for (const auto& rev : s.revisions) rev_active += naive_active_s(rev.keystrokes);
  all_active = rev_active + naive_active_s(s.draft.keystrokes);
  if (all_active > 0.0) out.efficiency = double(all_ins) / all_active;
  return out;
}

// Random session with edge cases mixed in (empty keystreams, single events,
// zero revisions).
inline revmine::Session random_session(std::mt19937_64& rng) {
  auto rand_int = [&](int lo, int hi) {
    return lo + int(rng() % std::uint64_t(hi - lo + 1));
  };
  auto random_keystrokes = [&]() {
    std::vector<revmine::KeystrokeEvent> ks;
    const int shape = rand_int(0, 9);
    const int n = shape == 0 ? 0 : shape == 1 ? 1 : rand_int(2, 120);
    std::int64_t t = rand_int(0, 500);
    for (int i = 0; i < n; ++i) {
      const int kind = rand_int(0, 9);
      if (kind < 6) {
        ks.push_back(ch(t, char('a' + rand_int(0, 25))));
      } else if (kind < 7) {
        ks.push_back(ch(t, ' '));
      } else if (kind < 8) {
        ks.push_back(bs(t));
      } else if (kind < 9) {
        ks.push_back(del(t));
      } else {
        ks.push_back(other(t, "Shift"));
      }
      t += rand_int(0, 800);  // zero gaps allowed
    }
    return ks;
  };
  revmine::Session s;
  s.user_id = "u" + std::to_string(rng() % 100);
  s.recipe_ordinal = rand_int(1, 3);
  s.draft = entry(s.user_id, 1'000'000, random_keystrokes(), "draft text");
  const int revisions = rand_int(0, 4);
  for (int i = 0; i < revisions; ++i) {
    s.revisions.push_back(
        entry(s.user_id, 1'000'000 + 600 * (i + 1), random_keystrokes(),
              "revision " + std::to_string(i)));
  }
  return s;
}

}  // namespace revtest
