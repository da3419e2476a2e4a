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

#include "deepwolf/session.hpp"

#include <algorithm>

#include "deepwolf/manifest.hpp"

namespace deepwolf {

using nlohmann::json;

namespace {

// Bound on agent moves per settle() call; a full game is far shorter.
constexpr int kMaxAgentMoves = 1000;

std::optional<PlayerId> target_field(const json& msg) {
  if (!msg.contains("target") || !msg["target"].is_number_integer()) {
    return std::nullopt;
  }
  const auto n = msg["target"].get<std::int64_t>();
  if (n < 1 || n > static_cast<std::int64_t>(kNumPlayers)) return std::nullopt;
  return PlayerId(static_cast<int>(n));
}

}  // namespace

SeatSpec parse_seat_spec(std::string_view text) {
  if (text == "human") return SeatSpec{SeatKind::kHuman, ""};
  if (!is_known_policy(text)) {
    throw BadSeatPlan("unknown seat kind '" + std::string(text) + "'");
  }
  return SeatSpec{SeatKind::kAgent, std::string(text)};
}

Session::Session(std::string id, const GameConfig& config,
                 const std::vector<SeatSpec>& plan,
                 const PolicyContext& policies, SessionOptions options,
                 Clock::time_point now)
    : id_(std::move(id)), options_(std::move(options)) {
  if (plan.size() != kNumPlayers) {
    throw BadSeatPlan("a seat plan needs exactly 5 seats, got " +
                      std::to_string(plan.size()));
  }
  for (const auto& s : plan) {
    if (s.kind == SeatKind::kAgent && !is_known_policy(s.policy)) {
      throw BadSeatPlan("unknown agent policy '" + s.policy + "'");
    }
  }
  state_ = new_game(config);
  for (PlayerId p : all_players()) {
    seats_[p.index()] = plan[p.index()];
    if (plan[p.index()].kind == SeatKind::kAgent) {
      agents_[p.index()] =
          make_policy(plan[p.index()].policy, p, state_.role_of(p),
                      derive_seed(config.seed, 100 + p.index()), policies);
    }
  }
  arm_timer(now);
  pending_ = settle(now, 0);
}

bool Session::is_human(PlayerId seat) const {
  return seats_[seat.index()].kind == SeatKind::kHuman;
}

std::vector<PlayerId> Session::human_seats() const {
  std::vector<PlayerId> out;
  for (PlayerId p : all_players()) {
    if (is_human(p)) out.push_back(p);
  }
  return out;
}

std::vector<Outbound> Session::take_pending() { return std::exchange(pending_, {}); }

json Session::state_message(PlayerId seat) const {
  const ViewpointLog view = project(record_of(state_), seat);
  json alive = json::array();
  for (PlayerId p : state_.alive_players()) alive.push_back(p.number());
  return {{"type", "state"},
          {"session", id_},
          {"phase", phase_name(state_.phase)},
          {"day", state_.day},
          {"alive", alive},
          {"you", seat.number()},
          {"your_role", role_name(state_.role_of(seat))},
          {"lines", view.lines}};
}

json Session::error_message(std::string reason) const {
  return {{"type", "error"}, {"session", id_}, {"reason", std::move(reason)}};
}

std::vector<Outbound> Session::on_join(PlayerId seat) const {
  std::vector<Outbound> out{{seat, state_message(seat)}};
  if (state_.winner) {
    out.push_back({seat,
                   {{"type", "game_end"},
                    {"session", id_},
                    {"winner", side_name(*state_.winner)}}});
  }
  return out;
}

std::vector<Outbound> Session::handle(PlayerId seat, const json& msg,
                                      Clock::time_point now) {
  auto reject = [&](std::string reason) {
    return std::vector<Outbound>{{seat, error_message(std::move(reason))}};
  };
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return reject("malformed message");
  }
  if (!is_human(seat)) return reject("seat is played by an agent");
  if (finished()) return reject("game is over");

  const std::string type = msg["type"].get<std::string>();
  std::optional<CandidateAction> action;
  if (type == "talk") {
    if (!msg.contains("text") || !msg["text"].is_string()) return reject("missing text");
    action = act::Utterance{msg["text"].get<std::string>()};
  } else if (type == "over") {
    action = act::OverSignal{};
  } else if (type == "vote") {
    const auto target = target_field(msg);
    if (!target) return reject("invalid target");
    action = act::VoteTarget{*target};
  } else if (type == "night_action") {
    const auto target = target_field(msg);
    if (!target) return reject("invalid target");
    const std::string kind = msg.value("kind", std::string{});
    if (kind == "divine") {
      action = act::DivineTarget{*target};
    } else if (kind == "attack") {
      action = act::AttackTarget{*target};
    } else {
      return reject("unknown night action");
    }
  } else {
    return reject("unknown message type");
  }

  if (!is_legal(state_, seat, *action)) {
    if (!state_.is_alive(seat)) return reject("not alive");
    if (std::holds_alternative<act::AttackTarget>(*action) &&
        state_.role_of(seat) != Role::kWerewolf) {
      return reject("not the werewolf");
    }
    GameState trial = state_;
    try {
      apply(trial, to_event(trial, seat, *action));
    } catch (const IllegalEvent& e) {
      return reject(e.reason());
    }
    return reject("illegal action");
  }

  const std::size_t before = state_.events.size();
  apply(state_, to_event(state_, seat, *action));
  return settle(now, before);
}

std::vector<Outbound> Session::tick(Clock::time_point now) {
  if (finished() || now < deadline_) return {};
  const std::size_t before = state_.events.size();
  expire_phase(state_);
  return settle(now, before);
}

void Session::run_agents() {
  for (int moves = 0; moves < kMaxAgentMoves && !finished();) {
    bool acted = false;
    for (PlayerId p : all_players()) {
      if (!agents_[p.index()] || finished()) continue;
      if (legal_actions(state_, p).empty()) continue;
      std::optional<CandidateAction> choice;
      try {
        choice = agents_[p.index()]->act(state_, p);
      } catch (const Error&) {
        // An unreachable oracle leaves the seat to the phase timer.
        continue;
      }
      if (!choice || !is_legal(state_, p, *choice)) continue;
      apply(state_, to_event(state_, p, *choice));
      acted = true;
      ++moves;
    }
    if (!acted) break;
  }
}

void Session::arm_timer(Clock::time_point now) {
  timed_phase_ = state_.phase;
  deadline_ = now + (is_talk_phase(state_.phase) ? options_.talk_cap
                                                  : options_.action_cap);
}

std::vector<Outbound> Session::settle(Clock::time_point now,
                                      std::size_t events_before) {
  run_agents();
  if (state_.phase != timed_phase_) arm_timer(now);

  std::vector<Outbound> out;
  if (state_.events.size() == events_before) return out;
  for (PlayerId p : human_seats()) out.push_back({p, state_message(p)});
  if (finished()) {
    for (PlayerId p : human_seats()) {
      out.push_back({p,
                     {{"type", "game_end"},
                      {"session", id_},
                      {"winner", side_name(*state_.winner)}}});
    }
    if (!options_.records_dir.empty()) {
      try {
        write_record(options_.records_dir, id_, record_of(state_));
      } catch (const StorageError& e) {
        storage_error_ = e.what();
      }
    }
  }
  return out;
}

}  // namespace deepwolf
