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

#include "deepwolf/action.hpp"

namespace deepwolf {

ActionKind kind_of(const CandidateAction& action) {
  struct Visitor {
    ActionKind operator()(const act::Utterance&) const {
      return ActionKind::kTalk;
    }
    ActionKind operator()(const act::OverSignal&) const {
      return ActionKind::kOver;
    }
    ActionKind operator()(const act::VoteTarget&) const {
      return ActionKind::kVote;
    }
    ActionKind operator()(const act::DivineTarget&) const {
      return ActionKind::kDivine;
    }
    ActionKind operator()(const act::AttackTarget&) const {
      return ActionKind::kAttack;
    }
  };
  return std::visit(Visitor{}, action);
}

std::optional<PlayerId> target_of(const CandidateAction& action) {
  if (const auto* v = std::get_if<act::VoteTarget>(&action)) return v->target;
  if (const auto* d = std::get_if<act::DivineTarget>(&action)) return d->target;
  if (const auto* a = std::get_if<act::AttackTarget>(&action)) return a->target;
  return std::nullopt;
}

std::string describe(const CandidateAction& action) {
  if (const auto* u = std::get_if<act::Utterance>(&action)) {
    return "Utterance(\"" + u->text + "\")";
  }
  if (std::holds_alternative<act::OverSignal>(action)) return "Over";
  const std::string t = target_of(action)->str();
  switch (kind_of(action)) {
    case ActionKind::kVote: return "Vote(" + t + ")";
    case ActionKind::kDivine: return "Divine(" + t + ")";
    default: return "Attack(" + t + ")";
  }
}

}  // namespace deepwolf
