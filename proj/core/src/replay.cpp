// Copyright 2026 The deepwolf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deepwolf/replay.hpp"

#include <algorithm>
#include <map>

namespace deepwolf {

namespace {

struct PendingChoice {
  PlayerId seer;
  PlayerId target;
};

// Divinations whose result is in the record but whose choice is not, keyed
// by the day the choice must have been made on.
std::map<int, PendingChoice> missing_choices(const std::vector<Event>& events) {
  std::map<int, PendingChoice> out;
  for (const Event& e : events) {
    const auto* res = e.as<ev::DivineResult>();
    if (!res) continue;
    const int choice_day = e.day - 1;
    const bool explicit_choice =
        std::any_of(events.begin(), events.end(), [&](const Event& c) {
          return c.is<ev::DivineChoice>() && c.day == choice_day;
        });
    if (!explicit_choice) out.emplace(choice_day, PendingChoice{res->seer, res->target});
  }
  return out;
}

}  // namespace

ReplayReport replay(const GameRecord& record, const ReplayOptions& options) {
  GameConfig config = record.config;
  config.role_assignment = record.roles;

  ReplayReport report;
  GameState& s = report.state;
  try {
    s = new_game(config);
  } catch (const ConfigError& e) {
    throw InconsistentRecord(0, e.what());
  }

  auto pending = options.lenient ? missing_choices(record.events)
                                 : std::map<int, PendingChoice>{};
  const auto& want = record.events;
  const std::size_t n = want.size();
  std::size_t r = 0;  // next record event
  std::size_t e = 0;  // next engine event to match

  auto is_synth = [&](std::size_t i) {
    return std::find(report.synthesized.begin(), report.synthesized.end(), i) !=
           report.synthesized.end();
  };

  while (true) {
    while (e < s.events.size()) {
      const Event& got = s.events[e];
      if (is_synth(e)) {
        ++e;
      } else if (r < n && got == want[r]) {
        ++e;
        ++r;
      } else if (options.lenient && got.is<ev::GameEnd>() &&
                 (r == n || !want[r].is<ev::GameEnd>())) {
        ++e;
      } else if (r >= n) {
        throw InconsistentRecord(n + 1, "record ends before " + describe(got));
      } else {
        throw InconsistentRecord(r + 1, "expected " + describe(got) +
                                            ", record has " +
                                            describe(want[r]));
      }
    }
    if (r >= n) break;

    if (s.finished()) {
      if (options.lenient) {
        report.ignored_trailing = n - r;
        break;
      }
      throw InconsistentRecord(r + 1, "event after game end: " +
                                          describe(want[r]));
    }

    if (auto it = pending.find(s.day); it != pending.end()) {
      const CandidateAction pick = act::DivineTarget{it->second.target};
      if (is_legal(s, it->second.seer, pick)) {
        const std::size_t at = s.events.size();
        apply(s, to_event(s, it->second.seer, pick));
        report.synthesized.push_back(at);
        pending.erase(it);
        continue;
      }
    }

    const Event& next = want[r];
    if (is_derived_event(next)) {
      throw InconsistentRecord(r + 1,
                               "engine did not produce " + describe(next));
    }
    try {
      apply(s, next);
    } catch (const IllegalEvent& ex) {
      throw InconsistentRecord(r + 1, ex.reason() + ": " + describe(next));
    }
  }
  return report;
}

}  // namespace deepwolf
