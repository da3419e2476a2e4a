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

#ifndef DEEPWOLF_TYPES_HPP_
#define DEEPWOLF_TYPES_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deepwolf/errors.hpp"

namespace deepwolf {

inline constexpr int kNumPlayers = 5;

enum class Role : std::uint8_t { kVillager, kSeer, kBetrayer, kWerewolf };
enum class Side : std::uint8_t { kVillager, kWerewolf };

inline constexpr std::array<Role, 4> kAllRoles = {
    Role::kVillager, Role::kSeer, Role::kBetrayer, Role::kWerewolf};

constexpr Side side_of(Role role) {
  return (role == Role::kVillager || role == Role::kSeer) ? Side::kVillager
                                                         : Side::kWerewolf;
}

// Lowercase wire/log names: villager, seer, betrayer, werewolf.
std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view name);

// "villager" / "werewolf".
std::string_view side_name(Side side);
std::optional<Side> parse_side(std::string_view name);

// A seat number in 1..5. Construction outside that range throws
// InvalidPlayer, so every PlayerId in circulation is valid.
class PlayerId {
 public:
  explicit PlayerId(int number);

  int number() const { return number_; }
  // Zero-based slot for per-player arrays.
  std::size_t index() const { return static_cast<std::size_t>(number_ - 1); }

  static PlayerId from_index(std::size_t index) {
    return PlayerId(static_cast<int>(index) + 1);
  }

  // "#<n>"
  std::string str() const;

  friend auto operator<=>(PlayerId, PlayerId) = default;

 private:
  int number_;
};

std::vector<PlayerId> all_players();

enum class Phase : std::uint8_t {
  kDay0Divine,
  kNight0,
  kDay1Talk,
  kDay1Vote,
  kNight1,
  kDay2Talk,
  kDay2Vote,
  kFinished,
};

std::string_view phase_name(Phase phase);
std::optional<Phase> parse_phase(std::string_view name);

constexpr bool is_talk_phase(Phase p) {
  return p == Phase::kDay1Talk || p == Phase::kDay2Talk;
}
constexpr bool is_vote_phase(Phase p) {
  return p == Phase::kDay1Vote || p == Phase::kDay2Vote;
}

using RoleMap = std::array<Role, kNumPlayers>;

// Exactly two villagers, one seer, one betrayer, one werewolf.
bool is_valid_role_multiset(const RoleMap& roles);

struct GameConfig {
  std::uint64_t seed = 0;
  std::optional<RoleMap> role_assignment;

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

// ---------------------------------------------------------------------------
// Events

namespace ev {

struct Talk {
  PlayerId speaker;
  std::string text;
  friend bool operator==(const Talk&, const Talk&) = default;
};
struct Over {
  PlayerId speaker;
  friend bool operator==(const Over&, const Over&) = default;
};
struct Vote {
  PlayerId voter;
  PlayerId target;
  friend bool operator==(const Vote&, const Vote&) = default;
};
struct Expel {
  PlayerId target;
  friend bool operator==(const Expel&, const Expel&) = default;
};
struct Attack {
  PlayerId target;
  friend bool operator==(const Attack&, const Attack&) = default;
};
struct DivineChoice {
  PlayerId seer;
  PlayerId target;
  friend bool operator==(const DivineChoice&, const DivineChoice&) = default;
};
struct DivineResult {
  PlayerId seer;
  PlayerId target;
  bool is_werewolf;
  friend bool operator==(const DivineResult&, const DivineResult&) = default;
};
struct GameEnd {
  Side winner;
  friend bool operator==(const GameEnd&, const GameEnd&) = default;
};

}  // namespace ev

using EventBody = std::variant<ev::Talk, ev::Over, ev::Vote, ev::Expel,
                               ev::Attack, ev::DivineChoice, ev::DivineResult,
                               ev::GameEnd>;

struct Event {
  int day = 0;
  EventBody body;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&body);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(body);
  }

  friend bool operator==(const Event&, const Event&) = default;
};

// Events only the engine may produce (callers submit the rest).
bool is_derived_event(const Event& e);

// Short debugging form, e.g. "Vote(#2,#4)@1".
std::string describe(const Event& e);

}  // namespace deepwolf

#endif  // DEEPWOLF_TYPES_HPP_
