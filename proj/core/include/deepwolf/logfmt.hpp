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

#ifndef DEEPWOLF_LOGFMT_HPP_
#define DEEPWOLF_LOGFMT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deepwolf/action.hpp"
#include "deepwolf/engine.hpp"
#include "deepwolf/types.hpp"

namespace deepwolf {

// Persisted form of a game: what happened plus who held which role.
struct GameRecord {
  GameConfig config;
  RoleMap roles{};
  std::vector<Event> events;
  std::optional<Side> winner;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

GameRecord record_of(const GameState& state);

// Canonical line for one event:
//   Talk           #<n>) <text>
//   Over           #<n>) Over.
//   Vote           #<a> voted for #<b>.
//   Expel          #<n> has been erased.
//   Attack         The werewolf erased #<n>.
//   DivineResult   #<s> divined #<t> and #<t> is the werewolf.
//                  #<s> divined #<t> and #<t> is not a werewolf.
//   DivineChoice   #<s> chose to divine #<t>.
//   GameEnd        The villager side won. / The werewolf side won.
std::string render_line(const Event& event);

// Every event, one line each, "\n"-terminated. Throws InconsistentRecord if
// the record does not replay through the engine.
std::string render_full(const GameRecord& record);

// Inverse of render_full on the event list. Day numbers are reconstructed
// from the line sequence. Throws ParseError on any unrecognised line.
std::vector<Event> parse(std::string_view text);

// One player's masked view of a game: a two-line header naming the viewer
// and their own role, then every event that player could see.
struct ViewpointLog {
  PlayerId viewer;
  Role viewer_role;
  std::vector<std::string> lines;
  std::optional<std::size_t> truncated_at;

  // Lines joined with "\n", each terminated.
  std::string text() const;

  friend bool operator==(const ViewpointLog&, const ViewpointLog&) = default;
};

// Whether `viewer` observes `event`. Seer-private events are visible only
// to that seer; everything else is public.
bool visible_to(const Event& event, PlayerId viewer);

std::vector<std::string> viewpoint_header(PlayerId viewer, Role role);

// Projection of record.events[0, upto) onto `viewer`.
ViewpointLog project(const GameRecord& record, PlayerId viewer,
                     std::optional<std::size_t> upto = std::nullopt);

// The candidate as the viewer's next log line, without newline.
std::string render_candidate(PlayerId viewer, const CandidateAction& candidate);

// Exact oracle input: a log text followed by one candidate line.
std::string oracle_input(std::string_view log_text,
                         std::string_view candidate_line);

std::string render_prefix(const ViewpointLog& viewpoint,
                          const CandidateAction& candidate);

}  // namespace deepwolf

#endif  // DEEPWOLF_LOGFMT_HPP_
