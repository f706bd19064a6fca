#include "revmine/procmine.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "revmine/features.hpp"

namespace revmine {

std::string Activity::label() const {
  switch (kind) {
    case Kind::Start:
      return "Start";
    case Kind::Write:
      return "W" + std::to_string(ordinal);
    case Kind::Revise:
      return "Revise";
    case Kind::End:
      return "End";
  }
  return {};
}

EventLog build_event_log(std::span<const Session> sessions,
                         const Corpus& corpus, Group group) {
  std::map<std::string, std::vector<const Session*>> by_user;
  for (const auto& session : sessions) {
    const UserProfile* profile = corpus.find_profile(session.user_id);
    if (profile == nullptr || profile->group != group) continue;
    by_user[session.user_id].push_back(&session);
  }
  for (auto& [user_id, user_sessions] : by_user) {
    std::stable_sort(user_sessions.begin(), user_sessions.end(),
                     [](const Session* a, const Session* b) {
                       return a->recipe_ordinal < b->recipe_ordinal;
                     });
  }

  EventLog log;
  log.traces.reserve(by_user.size());
  for (const auto& [user_id, user_sessions] : by_user) {
    Trace trace;
    trace.steps.push_back({Activity::start(), 0.0});
    for (const Session* session : user_sessions) {
      trace.steps.push_back({Activity::write(session->recipe_ordinal),
                             active_time_s(session->draft.keystrokes)});
      for (const auto& revision : session->revisions) {
        trace.steps.push_back(
            {Activity::revise(), active_time_s(revision.keystrokes)});
      }
    }
    trace.steps.push_back({Activity::end(), 0.0});
    log.traces.push_back(std::move(trace));
  }
  return log;
}

Dfg discover_dfg(const EventLog& log) {
  if (log.traces.empty()) throw ConfigError("cannot discover a DFG from an empty log");
  Dfg dfg;
  std::map<std::pair<std::string, std::string>, double> duration_sums;
  for (const auto& trace : log.traces) {
    for (const auto& step : trace.steps) dfg.nodes.insert(step.activity.label());
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
      const auto key = std::make_pair(trace.steps[i].activity.label(),
                                      trace.steps[i + 1].activity.label());
      dfg.edges[key].frequency += 1;
      duration_sums[key] += trace.steps[i + 1].duration_s;
    }
  }
  for (auto& [key, edge] : dfg.edges) {
    edge.mean_duration_s =
        duration_sums[key] / static_cast<double>(edge.frequency);
  }
  return dfg;
}

std::string export_dot(const Dfg& dfg) {
  std::string out = "digraph dfg {\n";
  for (const auto& node : dfg.nodes) {
    out += "  \"" + node + "\";\n";
  }
  for (const auto& [key, edge] : dfg.edges) {
    char label[64];
    std::snprintf(label, sizeof(label), "n=%llu, t\xCC\x84=%.3fs",
                  static_cast<unsigned long long>(edge.frequency),
                  edge.mean_duration_s);
    out += "  \"" + key.first + "\" -> \"" + key.second + "\" [label=\"" +
           label + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace revmine
