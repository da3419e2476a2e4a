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

#ifndef DEEPWOLF_SIM_HPP_
#define DEEPWOLF_SIM_HPP_

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "deepwolf/agent.hpp"
#include "deepwolf/engine.hpp"
#include "deepwolf/logfmt.hpp"
#include "deepwolf/oracle.hpp"
#include "deepwolf/rng.hpp"

namespace deepwolf {

// Drives one seat. act() is called whenever the seat has a legal move;
// returning nullopt means "not now" (talk phases) or "no opinion", in which
// case the phase timer eventually picks for the seat.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::optional<CandidateAction> act(const GameState& state,
                                             PlayerId me) = 0;
};

// Uniform over legal targets; in talk phases says Over with probability
// `over_probability`, otherwise a random line of its role's pool.
class RandomLegalPolicy : public Policy {
 public:
  RandomLegalPolicy(std::uint64_t seed, std::vector<std::string> utterances,
                    double over_probability = 0.25);
  std::optional<CandidateAction> act(const GameState& state, PlayerId me) override;

 private:
  Rng rng_;
  std::vector<std::string> utterances_;
  double over_probability_;
};

// Always the canonical-first option: lowest-numbered target, first unsaid
// pool line once per day, then Over.
class FirstCandidatePolicy : public Policy {
 public:
  explicit FirstCandidatePolicy(std::vector<std::string> utterances);
  std::optional<CandidateAction> act(const GameState& state, PlayerId me) override;

 private:
  std::vector<std::string> utterances_;
  std::set<std::string> said_;
  int talked_on_day_ = -1;
};

// The value-oracle agent in one seat.
class AgentPolicy : public Policy {
 public:
  AgentPolicy(AgentState agent, CandidatePool pool, OracleHandle oracle);
  std::optional<CandidateAction> act(const GameState& state, PlayerId me) override;
  const AgentState& agent() const { return agent_; }

 private:
  AgentState agent_;
  CandidatePool pool_;
  OracleHandle oracle_;
};

// Everything needed to instantiate a policy by name.
struct PolicyContext {
  std::map<Role, CandidatePool> pools;
  std::shared_ptr<const OracleRegistry> registry;
  TurnPolicyParams turn_params;
};

inline constexpr std::string_view kAgentPolicy = "agent";
inline constexpr std::string_view kRandomPolicy = "random-legal";
inline constexpr std::string_view kFirstCandidatePolicy = "first-candidate";

bool is_known_policy(std::string_view name);

// Throws PolicyLoadError for unknown names or an agent whose model is
// missing.
std::unique_ptr<Policy> make_policy(std::string_view name, PlayerId seat,
                                    Role role, std::uint64_t seed,
                                    const PolicyContext& context);

using PolicyFactory =
    std::function<std::unique_ptr<Policy>(PlayerId seat, Role role)>;

struct SimOptions {
  // Talk lines per talk phase before stragglers are auto-Over'd.
  std::size_t max_talk_per_phase = 40;
};

struct SimStats {
  std::size_t actions = 0;
  std::size_t timeouts = 0;
};

// Plays one game to the end. Seats are polled round-robin, the starting
// seat rotating each round; a round in which nobody acts counts as the
// phase timer expiring. Throws IllegalEvent if a policy proposes an
// illegal action.
GameRecord play_game(const GameConfig& config,
                     const std::array<PolicyFactory, kNumPlayers>& seats,
                     const SimOptions& options = {}, SimStats* stats = nullptr);

}  // namespace deepwolf

#endif  // DEEPWOLF_SIM_HPP_
