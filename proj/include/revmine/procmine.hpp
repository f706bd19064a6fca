#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "revmine/sessionizer.hpp"
#include "revmine/types.hpp"

namespace revmine {

// The writing-process activity alphabet. Every Revise step shares one label,
// which is what produces the revise self-loop in the discovered graph.
struct Activity {
  enum class Kind { Start, Write, Revise, End };
  Kind kind = Kind::Start;
  int ordinal = 0;  // recipe number, Write only

  static Activity start() { return {Kind::Start, 0}; }
  static Activity write(int recipe) { return {Kind::Write, recipe}; }
  static Activity revise() { return {Kind::Revise, 0}; }
  static Activity end() { return {Kind::End, 0}; }

  std::string label() const;  // "Start", "W<k>", "Revise", "End"

  friend auto operator<=>(const Activity&, const Activity&) = default;
};

struct ActivityInstance {
  Activity activity;
  double duration_s = 0.0;  // active time producing this submission
};

struct Trace {
  std::vector<ActivityInstance> steps;
};

// Multiset of traces, one per user; duplicates count with multiplicity.
struct EventLog {
  std::vector<Trace> traces;
};

// One trace per user of `group`: Start, then per session WriteRecipe(k)
// followed by one Revise per revision entry, then End. Start/End carry zero
// duration; the other steps carry the active time of their submission.
EventLog build_event_log(std::span<const Session> sessions,
                         const Corpus& corpus, Group group);

struct DfgEdge {
  std::uint64_t frequency = 0;
  double mean_duration_s = 0.0;  // mean duration of the targets reached here
};

struct Dfg {
  std::set<std::string> nodes;
  std::map<std::pair<std::string, std::string>, DfgEdge> edges;
};

// Directly-follows discovery: edge (u,v) iff v immediately follows u in some
// trace; frequency counts every adjacent pair across the multiset.
// Throws ConfigError on an empty log.
Dfg discover_dfg(const EventLog& log);

// Deterministic DOT text: nodes then edges, both lexicographic; identical
// graphs serialize byte-identically.
std::string export_dot(const Dfg& dfg);

}  // namespace revmine
