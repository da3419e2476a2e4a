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

#ifndef DEEPWOLF_ACTION_HPP_
#define DEEPWOLF_ACTION_HPP_

#include <optional>
#include <string>
#include <variant>

#include "deepwolf/types.hpp"

namespace deepwolf {

namespace act {
struct Utterance {
  std::string text;
  friend bool operator==(const Utterance&, const Utterance&) = default;
};
struct VoteTarget {
  PlayerId target;
  friend bool operator==(const VoteTarget&, const VoteTarget&) = default;
};
struct DivineTarget {
  PlayerId target;
  friend bool operator==(const DivineTarget&, const DivineTarget&) = default;
};
struct AttackTarget {
  PlayerId target;
  friend bool operator==(const AttackTarget&, const AttackTarget&) = default;
};
struct OverSignal {
  friend bool operator==(const OverSignal&, const OverSignal&) = default;
};
}  // namespace act

// Something a seat can do next: say a line, end its talk for the day, or
// pick a vote / divination / attack target.
using CandidateAction =
    std::variant<act::Utterance, act::VoteTarget, act::DivineTarget,
                 act::AttackTarget, act::OverSignal>;

enum class ActionKind { kTalk, kOver, kVote, kDivine, kAttack };

// One entry of legal_actions(): a kind plus, for targeted kinds, the target.
struct LegalMove {
  ActionKind kind;
  std::optional<PlayerId> target;
  friend bool operator==(const LegalMove&, const LegalMove&) = default;
};

ActionKind kind_of(const CandidateAction& action);
std::optional<PlayerId> target_of(const CandidateAction& action);

std::string describe(const CandidateAction& action);

}  // namespace deepwolf

#endif  // DEEPWOLF_ACTION_HPP_
