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

#include "deepwolf/sim.hpp"

#include <algorithm>

namespace deepwolf {

namespace {

const std::vector<std::string>& fallback_lines() {
  static const std::vector<std::string> lines = {
      "Good morning.", "I am a villager.", "Let's think carefully.",
      "Who do you suspect?", "I have nothing to add."};
  return lines;
}

std::vector<PlayerId> targets(const std::vector<LegalMove>& moves,
                              ActionKind kind) {
  std::vector<PlayerId> out;
  for (const auto& m : moves) {
    if (m.kind == kind) out.push_back(*m.target);
  }
  return out;
}

bool has_kind(const std::vector<LegalMove>& moves, ActionKind kind) {
  return std::any_of(moves.begin(), moves.end(),
                     [&](const auto& m) { return m.kind == kind; });
}

std::vector<std::string> pool_lines(const PolicyContext& ctx, Role role) {
  const auto it = ctx.pools.find(role);
  if (it == ctx.pools.end() || it->second.utterances.empty()) return fallback_lines();
  return it->second.utterances;
}

}  // namespace

RandomLegalPolicy::RandomLegalPolicy(std::uint64_t seed,
                                     std::vector<std::string> utterances,
                                     double over_probability)
    : rng_(make_rng(seed)),
      utterances_(utterances.empty() ? fallback_lines() : std::move(utterances)),
      over_probability_(over_probability) {}

std::optional<CandidateAction> RandomLegalPolicy::act(const GameState& state,
                                                      PlayerId me) {
  const auto moves = legal_actions(state, me);
  if (moves.empty()) return std::nullopt;
  auto pick = [&](const std::vector<PlayerId>& ts) {
    return ts[uniform_index(rng_, ts.size())];
  };

  const auto divine = targets(moves, ActionKind::kDivine);
  // Day 0 must divine; later the seer divines at a random moment of day 1.
  if (!divine.empty() && (state.phase == Phase::kDay0Divine || uniform_unit(rng_) < 0.5)) {
    return act::DivineTarget{pick(divine)};
  }
  if (const auto votes = targets(moves, ActionKind::kVote); !votes.empty()) {
    return act::VoteTarget{pick(votes)};
  }
  if (const auto attacks = targets(moves, ActionKind::kAttack); !attacks.empty()) {
    return act::AttackTarget{pick(attacks)};
  }
  if (has_kind(moves, ActionKind::kOver)) {
    if (!has_kind(moves, ActionKind::kTalk) || uniform_unit(rng_) < over_probability_) {
      return act::OverSignal{};
    }
    return act::Utterance{utterances_[uniform_index(rng_, utterances_.size())]};
  }
  return std::nullopt;
}

FirstCandidatePolicy::FirstCandidatePolicy(std::vector<std::string> utterances)
    : utterances_(utterances.empty() ? fallback_lines() : std::move(utterances)) {}

std::optional<CandidateAction> FirstCandidatePolicy::act(const GameState& state,
                                                         PlayerId me) {
  const auto moves = legal_actions(state, me);
  if (moves.empty()) return std::nullopt;
  if (const auto t = targets(moves, ActionKind::kDivine); !t.empty()) {
    return act::DivineTarget{t.front()};
  }
  if (const auto t = targets(moves, ActionKind::kVote); !t.empty()) {
    return act::VoteTarget{t.front()};
  }
  if (const auto t = targets(moves, ActionKind::kAttack); !t.empty()) {
    return act::AttackTarget{t.front()};
  }
  if (!has_kind(moves, ActionKind::kOver)) return std::nullopt;
  if (has_kind(moves, ActionKind::kTalk) && talked_on_day_ != state.day) {
    for (const auto& u : utterances_) {
      if (said_.insert(u).second) {
        talked_on_day_ = state.day;
        return act::Utterance{u};
      }
    }
  }
  return act::OverSignal{};
}

AgentPolicy::AgentPolicy(AgentState agent, CandidatePool pool, OracleHandle oracle)
    : agent_(std::move(agent)), pool_(std::move(pool)), oracle_(std::move(oracle)) {}

std::optional<CandidateAction> AgentPolicy::act(const GameState& state, PlayerId) {
  return decision_for_phase(agent_, state, pool_, *oracle_);
}

bool is_known_policy(std::string_view name) {
  return name == kAgentPolicy || name == kRandomPolicy ||
         name == kFirstCandidatePolicy;
}

std::unique_ptr<Policy> make_policy(std::string_view name, PlayerId seat,
                                    Role role, std::uint64_t seed,
                                    const PolicyContext& ctx) {
  if (name == kRandomPolicy) {
    return std::make_unique<RandomLegalPolicy>(seed, pool_lines(ctx, role));
  }
  if (name == kFirstCandidatePolicy) {
    return std::make_unique<FirstCandidatePolicy>(pool_lines(ctx, role));
  }
  if (name == kAgentPolicy) {
    const OracleKey key{role, seat};
    if (!ctx.registry || !ctx.registry->contains(key)) {
      throw PolicyLoadError("no value model for " + key.str());
    }
    const auto it = ctx.pools.find(role);
    CandidatePool pool =
        it != ctx.pools.end() ? it->second : CandidatePool{role, {}};
    return std::make_unique<AgentPolicy>(AgentState(seat, role, ctx.turn_params),
                                         std::move(pool),
                                         ctx.registry->lookup(key));
  }
  throw PolicyLoadError("unknown policy '" + std::string(name) + "'");
}

GameRecord play_game(const GameConfig& config,
                     const std::array<PolicyFactory, kNumPlayers>& seats,
                     const SimOptions& options, SimStats* stats) {
  GameState state = new_game(config);
  std::array<std::unique_ptr<Policy>, kNumPlayers> policies;
  for (PlayerId p : all_players()) {
    policies[p.index()] = seats[p.index()](p, state.role_of(p));
  }

  SimStats local;
  std::size_t start = 0;
  std::size_t talk_lines = 0;
  while (!state.finished()) {
    const Phase phase = state.phase;
    bool acted = false;
    for (std::size_t k = 0; k < kNumPlayers && state.phase == phase; ++k) {
      const PlayerId seat = PlayerId::from_index((start + k) % kNumPlayers);
      if (legal_actions(state, seat).empty()) continue;
      const auto choice = policies[seat.index()]->act(state, seat);
      if (!choice) continue;
      if (!is_legal(state, seat, *choice)) {
        throw IllegalEvent("policy for " + seat.str() + " proposed " +
                           describe(*choice));
      }
      apply(state, to_event(state, seat, *choice));
      ++local.actions;
      acted = true;
      if (std::holds_alternative<act::Utterance>(*choice)) ++talk_lines;
    }
    start = (start + 1) % kNumPlayers;

    if (state.phase != phase) {
      talk_lines = 0;
      continue;
    }
    if (!acted || (is_talk_phase(phase) && talk_lines >= options.max_talk_per_phase)) {
      expire_phase(state);
      ++local.timeouts;
      talk_lines = 0;
    }
  }
  if (stats) *stats = local;
  return record_of(state);
}

}  // namespace deepwolf
