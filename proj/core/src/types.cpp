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

#include "deepwolf/types.hpp"

#include <algorithm>

namespace deepwolf {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kVillager: return "villager";
    case Role::kSeer: return "seer";
    case Role::kBetrayer: return "betrayer";
    case Role::kWerewolf: return "werewolf";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view name) {
  for (Role r : kAllRoles) {
    if (role_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view side_name(Side side) {
  return side == Side::kVillager ? "villager" : "werewolf";
}

std::optional<Side> parse_side(std::string_view name) {
  if (name == "villager") return Side::kVillager;
  if (name == "werewolf") return Side::kWerewolf;
  return std::nullopt;
}

PlayerId::PlayerId(int number) : number_(number) {
  if (number < 1 || number > kNumPlayers) {
    throw InvalidPlayer("player number out of range: " +
                        std::to_string(number));
  }
}

std::string PlayerId::str() const { return "#" + std::to_string(number_); }

std::vector<PlayerId> all_players() {
  std::vector<PlayerId> out;
  out.reserve(kNumPlayers);
  for (int n = 1; n <= kNumPlayers; ++n) out.emplace_back(n);
  return out;
}

namespace {
constexpr std::array<std::pair<Phase, std::string_view>, 8> kPhaseNames = {{
    {Phase::kDay0Divine, "day0_divine"},
    {Phase::kNight0, "night0"},
    {Phase::kDay1Talk, "day1_talk"},
    {Phase::kDay1Vote, "day1_vote"},
    {Phase::kNight1, "night1"},
    {Phase::kDay2Talk, "day2_talk"},
    {Phase::kDay2Vote, "day2_vote"},
    {Phase::kFinished, "finished"},
}};
}  // namespace

std::string_view phase_name(Phase phase) {
  for (const auto& [p, name] : kPhaseNames) {
    if (p == phase) return name;
  }
  return "?";
}

std::optional<Phase> parse_phase(std::string_view name) {
  for (const auto& [p, n] : kPhaseNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

bool is_valid_role_multiset(const RoleMap& roles) {
  auto count = [&](Role r) { return std::count(roles.begin(), roles.end(), r); };
  return count(Role::kVillager) == 2 && count(Role::kSeer) == 1 &&
         count(Role::kBetrayer) == 1 && count(Role::kWerewolf) == 1;
}

bool is_derived_event(const Event& e) {
  return e.is<ev::Expel>() || e.is<ev::DivineResult>() || e.is<ev::GameEnd>();
}

std::string describe(const Event& e) {
  struct Visitor {
    std::string operator()(const ev::Talk& t) const {
      return "Talk(" + t.speaker.str() + ",\"" + t.text + "\")";
    }
    std::string operator()(const ev::Over& o) const {
      return "Over(" + o.speaker.str() + ")";
    }
    std::string operator()(const ev::Vote& v) const {
      return "Vote(" + v.voter.str() + "," + v.target.str() + ")";
    }
    std::string operator()(const ev::Expel& x) const {
      return "Expel(" + x.target.str() + ")";
    }
    std::string operator()(const ev::Attack& a) const {
      return "Attack(" + a.target.str() + ")";
    }
    std::string operator()(const ev::DivineChoice& d) const {
      return "DivineChoice(" + d.seer.str() + "," + d.target.str() + ")";
    }
    std::string operator()(const ev::DivineResult& d) const {
      return "DivineResult(" + d.seer.str() + "," + d.target.str() + "," +
             (d.is_werewolf ? "true" : "false") + ")";
    }
    std::string operator()(const ev::GameEnd& g) const {
      return "GameEnd(" + std::string(side_name(g.winner)) + ")";
    }
  };
  return std::visit(Visitor{}, e.body) + "@" + std::to_string(e.day);
}

}  // namespace deepwolf
