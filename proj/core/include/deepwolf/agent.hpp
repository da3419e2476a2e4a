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

#ifndef DEEPWOLF_AGENT_HPP_
#define DEEPWOLF_AGENT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepwolf/action.hpp"
#include "deepwolf/engine.hpp"
#include "deepwolf/logfmt.hpp"
#include "deepwolf/oracle.hpp"

namespace deepwolf {

// Utterances a role may choose from, in canonical (load) order, no exact
// duplicates.
struct CandidatePool {
  Role role = Role::kVillager;
  std::vector<std::string> utterances;
};

// One utterance per line; blank lines and "#" comments (a "#" not followed
// by a digit) skipped;
// exact duplicates dropped. Throws StorageError.
CandidatePool load_pool_file(const std::filesystem::path& path, Role role);
// Reads <dir>/<role>.txt for every role that has a file.
std::map<Role, CandidatePool> load_pools(const std::filesystem::path& dir);

// Lowercase, whitespace runs collapsed to one space, trimmed.
std::string normalize_utterance(std::string_view text);
// Jaccard index of the character-trigram sets of the normalized strings.
// Strings shorter than three characters count as a single gram.
double trigram_jaccard(std::string_view a, std::string_view b);

inline constexpr double kDefaultDedupThreshold = 0.8;

// Greedy, in order: drop an utterance whose similarity to any kept one is
// >= threshold.
std::vector<std::string> dedup_candidates(std::span<const std::string> utterances,
                                          double threshold = kDefaultDedupThreshold);

// Every Talk line spoken by a holder of `role`, exact duplicates removed,
// then dedup_candidates. Throws NoSuchRoleInLogs when no record has a
// speaking holder of the role.
CandidatePool build_candidate_pool(const std::vector<GameRecord>& human_logs,
                                   Role role,
                                   double threshold = kDefaultDedupThreshold);

struct TurnPolicyParams {
  int k_day1 = 3;
  int k_day2 = 1;
  // Throws ConfigError unless both are >= 1.
  void validate() const;
  int k_for(Phase talk_phase) const {
    return talk_phase == Phase::kDay1Talk ? k_day1 : k_day2;
  }
};

enum class TurnDecision { kSpeak, kSayOver, kWait };

struct AgentState {
  PlayerId me;
  Role role;
  OracleKey key;
  std::set<std::string> said;
  ViewpointLog viewpoint;
  TurnPolicyParams params;

  AgentState(PlayerId me, Role role, TurnPolicyParams params = {});
};

// Talk-phase turn taking from the agent's public view of the events:
// SayOver once every other alive player has said Over today; Speak once at
// least k distinct other players have talked since the agent's last line
// today (or since the start of the day); otherwise Wait. An agent that has
// already said Over waits.
TurnDecision should_act(const AgentState& agent, Phase phase,
                        std::span<const Event> events);

// Scores every candidate through `oracle` and returns the argmax, ties to
// the earliest candidate. Utterances already said this game are skipped; a
// chosen utterance is recorded in agent.said. Throws NoCandidates.
CandidateAction choose_action(AgentState& agent,
                              std::span<const CandidateAction> candidates,
                              const Oracle& oracle);

// The phase-appropriate candidate set for the agent right now: a divination
// target if one is still owed today, otherwise pool utterances, vote
// targets or attack targets. Empty when the agent has nothing to do.
std::vector<CandidateAction> phase_candidates(const AgentState& agent,
                                              const GameState& state,
                                              const CandidatePool& pool);

// Refreshes the agent's viewpoint from `state`, then decides. Returns
// nullopt when the agent waits or has nothing to do. In talk phases an
// exhausted pool degrades to Over.
std::optional<CandidateAction> decision_for_phase(AgentState& agent,
                                                  const GameState& state,
                                                  const CandidatePool& pool,
                                                  const Oracle& oracle);

}  // namespace deepwolf

#endif  // DEEPWOLF_AGENT_HPP_
