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

#include "deepwolf/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace deepwolf {

namespace {

constexpr std::string_view kOverText = "Over.";

RoleMap random_roles(Rng& rng) {
  RoleMap roles = {Role::kVillager, Role::kVillager, Role::kSeer,
                   Role::kBetrayer, Role::kWerewolf};
  for (std::size_t i = roles.size() - 1; i > 0; --i) {
    std::swap(roles[i], roles[uniform_index(rng, i + 1)]);
  }
  return roles;
}

bool seer_can_divine(const GameState& s, PlayerId seer) {
  if (s.role_of(seer) != Role::kSeer || !s.is_alive(seer)) return false;
  if (s.pending_divine) return false;
  return s.phase == Phase::kDay0Divine || s.phase == Phase::kDay1Talk ||
         s.phase == Phase::kDay1Vote;
}

void push(GameState& s, EventBody body) {
  s.events.push_back(Event{s.day, std::move(body)});
}

void finish(GameState& s, Side winner) {
  push(s, ev::GameEnd{winner});
  s.winner = winner;
  s.phase = Phase::kFinished;
}

void start_talk(GameState& s, Phase talk_phase) {
  s.phase = talk_phase;
  s.said_over.fill(false);
}

void eliminate(GameState& s, PlayerId p) { s.alive[p.index()] = false; }

// Called once every alive player has voted.
void close_vote(GameState& s) {
  const PlayerId expelled = tally_votes(s.pending_votes, s.rng);
  s.pending_votes.clear();
  push(s, ev::Expel{expelled});
  eliminate(s, expelled);
  if (auto w = check_win(s)) {
    finish(s, *w);
    return;
  }
  if (s.phase == Phase::kDay1Vote) {
    s.phase = Phase::kNight1;
    return;
  }
  // One wolf against at most two humans after a non-wolf expulsion on day 2
  // always meets the parity condition, so the game cannot continue.
  throw std::logic_error("day 2 vote ended without a winner");
}

void require(bool cond, const char* reason) {
  if (!cond) throw IllegalEvent(reason);
}

void require_alive_target(const GameState& s, PlayerId actor,
                          PlayerId target) {
  require(target != actor, "self-target");
  require(s.is_alive(target), "target not alive");
}

}  // namespace

std::vector<PlayerId> GameState::alive_players() const {
  std::vector<PlayerId> out;
  for (std::size_t i = 0; i < alive.size(); ++i) {
    if (alive[i]) out.push_back(PlayerId::from_index(i));
  }
  return out;
}

std::size_t GameState::alive_count() const {
  return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
}

PlayerId GameState::holder_of(Role role) const {
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == role) return PlayerId::from_index(i);
  }
  throw std::logic_error("role not assigned");
}

GameState new_game(const GameConfig& config) {
  GameState s;
  s.config = config;
  s.rng = make_rng(config.seed);
  s.timeout_rng = make_rng(derive_seed(config.seed, 2));
  if (config.role_assignment) {
    if (!is_valid_role_multiset(*config.role_assignment)) {
      throw ConfigError(
          "role assignment must hold 2 villagers, 1 seer, 1 betrayer and "
          "1 werewolf");
    }
    s.roles = *config.role_assignment;
  } else {
    Rng deal = make_rng(derive_seed(config.seed, 1));
    s.roles = random_roles(deal);
  }
  s.alive.fill(true);
  s.phase = Phase::kDay0Divine;
  s.day = 0;
  return s;
}

std::vector<LegalMove> legal_actions(const GameState& s, PlayerId player) {
  std::vector<LegalMove> out;
  if (s.finished() || !s.is_alive(player)) return out;

  auto each_target = [&](ActionKind kind, auto&& keep) {
    for (PlayerId t : s.alive_players()) {
      if (t != player && keep(t)) out.push_back({kind, t});
    }
  };
  auto any = [](PlayerId) { return true; };

  if (is_talk_phase(s.phase) && !s.has_said_over(player)) {
    out.push_back({ActionKind::kTalk, std::nullopt});
    out.push_back({ActionKind::kOver, std::nullopt});
  }
  if (is_vote_phase(s.phase) && !s.has_voted(player)) {
    each_target(ActionKind::kVote, any);
  }
  if (seer_can_divine(s, player)) {
    each_target(ActionKind::kDivine, any);
  }
  if (s.phase == Phase::kNight1 && s.role_of(player) == Role::kWerewolf &&
      !s.pending_attack) {
    each_target(ActionKind::kAttack, any);
  }
  return out;
}

bool is_legal(const GameState& s, PlayerId actor, const CandidateAction& a) {
  const LegalMove want{kind_of(a), target_of(a)};
  const auto moves = legal_actions(s, actor);
  if (std::find(moves.begin(), moves.end(), want) == moves.end()) return false;
  if (const auto* u = std::get_if<act::Utterance>(&a)) {
    return !u->text.empty() && u->text != kOverText &&
           u->text.find('\n') == std::string::npos;
  }
  return true;
}

Event to_event(const GameState& s, PlayerId actor, const CandidateAction& a) {
  struct Visitor {
    PlayerId actor;
    EventBody operator()(const act::Utterance& u) const {
      return ev::Talk{actor, u.text};
    }
    EventBody operator()(const act::OverSignal&) const {
      return ev::Over{actor};
    }
    EventBody operator()(const act::VoteTarget& v) const {
      return ev::Vote{actor, v.target};
    }
    EventBody operator()(const act::DivineTarget& d) const {
      return ev::DivineChoice{actor, d.target};
    }
    EventBody operator()(const act::AttackTarget& t) const {
      return ev::Attack{t.target};
    }
  };
  return Event{s.day, std::visit(Visitor{actor}, a)};
}

void apply(GameState& s, const Event& e) {
  require(!s.finished(), "game is over");
  require(!is_derived_event(e), "event kind is produced by the engine");

  if (const auto* t = e.as<ev::Talk>()) {
    require(is_talk_phase(s.phase), "wrong phase");
    require(s.is_alive(t->speaker), "not alive");
    require(!s.has_said_over(t->speaker), "already said Over");
    require(!t->text.empty(), "empty talk");
    require(t->text != kOverText, "reserved text");
    require(t->text.find('\n') == std::string::npos, "newline in talk");
    push(s, *t);
    return;
  }

  if (const auto* o = e.as<ev::Over>()) {
    require(is_talk_phase(s.phase), "wrong phase");
    require(s.is_alive(o->speaker), "not alive");
    require(!s.has_said_over(o->speaker), "already said Over");
    push(s, *o);
    s.said_over[o->speaker.index()] = true;
    bool all_over = true;
    for (PlayerId p : s.alive_players()) all_over &= s.has_said_over(p);
    if (all_over) {
      s.phase = s.phase == Phase::kDay1Talk ? Phase::kDay1Vote
                                            : Phase::kDay2Vote;
    }
    return;
  }

  if (const auto* v = e.as<ev::Vote>()) {
    require(is_vote_phase(s.phase), "wrong phase");
    require(s.is_alive(v->voter), "not alive");
    require(!s.has_voted(v->voter), "duplicate vote");
    require_alive_target(s, v->voter, v->target);
    push(s, *v);
    s.pending_votes.emplace(v->voter, v->target);
    if (s.pending_votes.size() == s.alive_count()) close_vote(s);
    return;
  }

  if (const auto* d = e.as<ev::DivineChoice>()) {
    require(s.role_of(d->seer) == Role::kSeer, "not the seer");
    require(s.is_alive(d->seer), "not alive");
    require(s.phase == Phase::kDay0Divine || s.phase == Phase::kDay1Talk ||
                s.phase == Phase::kDay1Vote,
            "wrong phase");
    require(!s.pending_divine, "already divined today");
    require_alive_target(s, d->seer, d->target);
    push(s, *d);
    s.pending_divine = d->target;
    if (s.phase == Phase::kDay0Divine) {
      s.phase = Phase::kNight0;
      resolve_night_in_place(s);
    }
    return;
  }

  if (const auto* a = e.as<ev::Attack>()) {
    require(s.phase == Phase::kNight1, "wrong phase");
    require(!s.pending_attack, "attack already chosen");
    require_alive_target(s, s.holder_of(Role::kWerewolf), a->target);
    s.pending_attack = a->target;
    resolve_night_in_place(s);
    return;
  }

  throw IllegalEvent("unsupported event");
}

GameState apply_event(GameState state, const Event& event) {
  apply(state, event);
  return state;
}

PlayerId tally_votes(const std::map<PlayerId, PlayerId>& votes, Rng& rng) {
  if (votes.empty()) throw EmptyVotes();
  std::array<int, kNumPlayers> counts{};
  for (const auto& [voter, target] : votes) ++counts[target.index()];
  const int best = *std::max_element(counts.begin(), counts.end());
  std::vector<PlayerId> leaders;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == best) leaders.push_back(PlayerId::from_index(i));
  }
  if (leaders.size() == 1) return leaders.front();
  return leaders[uniform_index(rng, leaders.size())];
}

void resolve_night_in_place(GameState& s) {
  if (s.phase == Phase::kNight0) {
    if (!s.pending_divine) {
      throw MissingNightAction("day-0 divination not submitted");
    }
    s.day = 1;
    const PlayerId seer = s.holder_of(Role::kSeer);
    const PlayerId target = *s.pending_divine;
    push(s, ev::DivineResult{seer, target,
                             s.role_of(target) == Role::kWerewolf});
    s.divined_targets.insert(target);
    s.pending_divine.reset();
    start_talk(s, Phase::kDay1Talk);
    return;
  }
  if (s.phase == Phase::kNight1) {
    if (!s.pending_attack) {
      throw MissingNightAction("werewolf attack not submitted");
    }
    const PlayerId victim = *s.pending_attack;
    push(s, ev::Attack{victim});
    eliminate(s, victim);
    s.pending_attack.reset();
    s.day = 2;
    const PlayerId seer = s.holder_of(Role::kSeer);
    if (s.pending_divine && s.is_alive(seer)) {
      const PlayerId target = *s.pending_divine;
      push(s, ev::DivineResult{seer, target,
                               s.role_of(target) == Role::kWerewolf});
      s.divined_targets.insert(target);
    }
    s.pending_divine.reset();
    if (auto w = check_win(s)) {
      finish(s, *w);
      return;
    }
    start_talk(s, Phase::kDay2Talk);
    return;
  }
  throw IllegalEvent("not a night phase");
}

GameState resolve_night(GameState state) {
  resolve_night_in_place(state);
  return state;
}

std::optional<Side> check_win(const GameState& s) {
  int wolves = 0;
  int humans = 0;
  for (PlayerId p : s.alive_players()) {
    (s.role_of(p) == Role::kWerewolf ? wolves : humans) += 1;
  }
  if (wolves == 0) return Side::kVillager;
  if (wolves >= humans) return Side::kWerewolf;
  return std::nullopt;
}

void expire_phase(GameState& s) {
  auto random_target = [&](PlayerId actor) {
    std::vector<PlayerId> targets;
    for (PlayerId p : s.alive_players()) {
      if (p != actor) targets.push_back(p);
    }
    return targets[uniform_index(s.timeout_rng, targets.size())];
  };

  switch (s.phase) {
    case Phase::kDay0Divine: {
      const PlayerId seer = s.holder_of(Role::kSeer);
      apply(s, Event{s.day, ev::DivineChoice{seer, random_target(seer)}});
      break;
    }
    case Phase::kNight0:
      resolve_night_in_place(s);
      break;
    case Phase::kDay1Talk:
    case Phase::kDay2Talk:
      for (PlayerId p : s.alive_players()) {
        if (!s.has_said_over(p)) apply(s, Event{s.day, ev::Over{p}});
      }
      break;
    case Phase::kDay1Vote:
    case Phase::kDay2Vote:
      for (PlayerId p : s.alive_players()) {
        if (!s.finished() && is_vote_phase(s.phase) && !s.has_voted(p)) {
          apply(s, Event{s.day, ev::Vote{p, random_target(p)}});
        }
      }
      break;
    case Phase::kNight1: {
      const PlayerId wolf = s.holder_of(Role::kWerewolf);
      apply(s, Event{s.day, ev::Attack{random_target(wolf)}});
      break;
    }
    case Phase::kFinished:
      break;
  }
}

}  // namespace deepwolf
