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

#ifndef DEEPWOLF_SESSION_HPP_
#define DEEPWOLF_SESSION_HPP_

#include <array>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deepwolf/engine.hpp"
#include "deepwolf/logfmt.hpp"
#include "deepwolf/sim.hpp"

namespace deepwolf {

using Clock = std::chrono::steady_clock;

enum class SeatKind { kHuman, kAgent };

struct SeatSpec {
  SeatKind kind = SeatKind::kHuman;
  // For agent seats: a policy name understood by make_policy.
  std::string policy = std::string(kAgentPolicy);
};

// "human", or an agent policy name.
SeatSpec parse_seat_spec(std::string_view text);

struct SessionOptions {
  std::chrono::milliseconds talk_cap = std::chrono::minutes(10);
  std::chrono::milliseconds action_cap = std::chrono::minutes(2);
  // Finished records land here; empty disables persistence.
  std::filesystem::path records_dir;
};

struct Outbound {
  PlayerId to;
  nlohmann::json message;
};

// One live game. Not thread-safe; the owner serializes calls.
class Session {
 public:
  // Throws BadSeatPlan or PolicyLoadError.
  Session(std::string id, const GameConfig& config,
          const std::vector<SeatSpec>& plan, const PolicyContext& policies,
          SessionOptions options, Clock::time_point now);

  const std::string& id() const { return id_; }
  const GameState& state() const { return state_; }
  bool finished() const { return state_.finished(); }
  bool is_human(PlayerId seat) const;
  std::vector<PlayerId> human_seats() const;

  // Messages produced while seating agents (e.g. a seer agent's day-0
  // divination already applied). Drained once.
  std::vector<Outbound> take_pending();

  // What a newly connected seat sees first.
  std::vector<Outbound> on_join(PlayerId seat) const;

  // One inbound wire message from a human seat. Rejections produce a
  // single `error` to the sender and leave the game untouched.
  std::vector<Outbound> handle(PlayerId seat, const nlohmann::json& msg,
                               Clock::time_point now);

  // Fires the phase timer when its deadline has passed.
  std::vector<Outbound> tick(Clock::time_point now);

  Clock::time_point deadline() const { return deadline_; }

  nlohmann::json state_message(PlayerId seat) const;

  // Persistence failure of the finished record, if any.
  const std::optional<std::string>& storage_error() const { return storage_error_; }

 private:
  std::vector<Outbound> settle(Clock::time_point now, std::size_t events_before);
  void run_agents();
  void arm_timer(Clock::time_point now);
  nlohmann::json error_message(std::string reason) const;

  std::string id_;
  SessionOptions options_;
  GameState state_;
  std::array<SeatSpec, kNumPlayers> seats_;
  std::array<std::unique_ptr<Policy>, kNumPlayers> agents_;
  Phase timed_phase_ = Phase::kDay0Divine;
  Clock::time_point deadline_;
  std::vector<Outbound> pending_;
  std::optional<std::string> storage_error_;
};

}  // namespace deepwolf

#endif  // DEEPWOLF_SESSION_HPP_
