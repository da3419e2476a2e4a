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

#ifndef DEEPWOLF_ENGINE_HPP_
#define DEEPWOLF_ENGINE_HPP_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "deepwolf/action.hpp"
#include "deepwolf/rng.hpp"
#include "deepwolf/types.hpp"

namespace deepwolf {

// Authoritative state of one five-player game. Mutated only through
// apply()/apply_event(), which keep the invariants below:
//   * alive shrinks only on Expel or Attack events;
//   * pending_votes keys and values are alive players;
//   * at most one divination per day;
//   * phase == kFinished exactly when winner is set.
struct GameState {
  GameConfig config;
  Phase phase = Phase::kDay0Divine;
  std::optional<Side> winner;
  int day = 0;
  RoleMap roles{};
  std::array<bool, kNumPlayers> alive{};
  std::vector<Event> events;

  std::map<PlayerId, PlayerId> pending_votes;
  std::optional<PlayerId> pending_divine;
  std::optional<PlayerId> pending_attack;
  std::set<PlayerId> divined_targets;
  // Who has said Over in the current talk phase.
  std::array<bool, kNumPlayers> said_over{};
  // Vote tie-breaks only. Role dealing and timeout picks draw from their
  // own streams, so replaying explicit votes reproduces every tie-break.
  Rng rng;
  Rng timeout_rng;

  Role role_of(PlayerId p) const { return roles[p.index()]; }
  bool is_alive(PlayerId p) const { return alive[p.index()]; }
  bool has_said_over(PlayerId p) const { return said_over[p.index()]; }
  bool has_voted(PlayerId p) const { return pending_votes.contains(p); }
  bool finished() const { return phase == Phase::kFinished; }
  std::vector<PlayerId> alive_players() const;
  std::size_t alive_count() const;
  // The seat holding `role` (first match for villagers).
  PlayerId holder_of(Role role) const;
};

GameState new_game(const GameConfig& config);

// Everything `player` may do right now. Dead players and players with
// nothing to do in this phase get an empty list.
std::vector<LegalMove> legal_actions(const GameState& state, PlayerId player);

bool is_legal(const GameState& state, PlayerId actor,
              const CandidateAction& action);

// Converts a seat's choice into the event the engine expects. The Attack
// event carries no actor; the werewolf is implied.
Event to_event(const GameState& state, PlayerId actor,
               const CandidateAction& action);

// Validates and applies a submitted event (Talk, Over, Vote, DivineChoice,
// Attack), appending it and any events the engine derives from it, and
// advancing the phase. Throws IllegalEvent and leaves `state` untouched on
// rejection.
void apply(GameState& state, const Event& event);
GameState apply_event(GameState state, const Event& event);

// Plurality winner; ties drawn uniformly from `rng`. Throws EmptyVotes.
PlayerId tally_votes(const std::map<PlayerId, PlayerId>& votes, Rng& rng);

// Night resolution. Night0: deliver the day-0 divination. Night1: carry out
// the pending attack, then deliver the day-1 divination if the seer
// survived. Throws MissingNightAction when the attack is not chosen yet.
void resolve_night_in_place(GameState& state);
GameState resolve_night(GameState state);

std::optional<Side> check_win(const GameState& state);

// Default actions for everyone still owing one in the current phase:
// Over for talkers, uniform random votes, a uniform random divination on
// day 0 and a uniform random attack on night 1. Used by turn timers.
void expire_phase(GameState& state);

}  // namespace deepwolf

#endif  // DEEPWOLF_ENGINE_HPP_
