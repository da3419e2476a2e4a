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

#include "deepwolf/agent.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace deepwolf {

namespace {

std::set<std::string> trigrams(std::string_view raw) {
  const std::string s = normalize_utterance(raw);
  std::set<std::string> out;
  if (s.empty()) return out;
  if (s.size() < 3) {
    out.insert(s);
    return out;
  }
  for (std::size_t i = 0; i + 3 <= s.size(); ++i) out.insert(s.substr(i, 3));
  return out;
}

std::vector<std::string> unique_in_order(std::vector<std::string> items) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (auto& s : items) {
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

CandidatePool load_pool_file(const std::filesystem::path& path, Role role) {
  std::ifstream in(path);
  if (!in) throw StorageError("cannot open pool file " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    // "#3 is suspicious." is an utterance, "# note" a comment.
    if (line.front() == '#' &&
        (line.size() == 1 || !std::isdigit(static_cast<unsigned char>(line[1])))) {
      continue;
    }
    lines.push_back(line);
  }
  return CandidatePool{role, unique_in_order(std::move(lines))};
}

std::map<Role, CandidatePool> load_pools(const std::filesystem::path& dir) {
  std::map<Role, CandidatePool> out;
  for (Role r : kAllRoles) {
    const auto path = dir / (std::string(role_name(r)) + ".txt");
    if (std::filesystem::exists(path)) out.emplace(r, load_pool_file(path, r));
  }
  return out;
}

std::string normalize_utterance(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (space) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

double trigram_jaccard(std::string_view a, std::string_view b) {
  const auto ga = trigrams(a);
  const auto gb = trigrams(b);
  if (ga.empty() && gb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& g : ga) common += gb.count(g);
  const std::size_t uni = ga.size() + gb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<std::string> dedup_candidates(std::span<const std::string> utterances,
                                          double threshold) {
  std::vector<std::string> kept;
  for (const auto& u : utterances) {
    const bool similar = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return trigram_jaccard(u, k) >= threshold;
    });
    if (!similar) kept.push_back(u);
  }
  return kept;
}

CandidatePool build_candidate_pool(const std::vector<GameRecord>& human_logs,
                                   Role role, double threshold) {
  std::vector<std::string> raw;
  bool role_present = false;
  for (const auto& record : human_logs) {
    for (const Event& e : record.events) {
      const auto* t = e.as<ev::Talk>();
      if (t && record.roles[t->speaker.index()] == role) {
        role_present = true;
        raw.push_back(t->text);
      }
    }
  }
  if (!role_present) {
    throw NoSuchRoleInLogs("no utterances by a " + std::string(role_name(role)));
  }
  const auto exact = unique_in_order(std::move(raw));
  return CandidatePool{role, dedup_candidates(exact, threshold)};
}

void TurnPolicyParams::validate() const {
  if (k_day1 < 1 || k_day2 < 1) throw ConfigError("turn k must be >= 1");
}

AgentState::AgentState(PlayerId me, Role role, TurnPolicyParams params)
    : me(me),
      role(role),
      key{role, me},
      viewpoint{me, role, viewpoint_header(me, role), std::nullopt},
      params(params) {
  params.validate();
}

TurnDecision should_act(const AgentState& agent, Phase phase,
                        std::span<const Event> events) {
  if (!is_talk_phase(phase)) return TurnDecision::kWait;
  const int day = phase == Phase::kDay1Talk ? 1 : 2;

  std::array<bool, kNumPlayers> alive{};
  alive.fill(true);
  for (const Event& e : events) {
    if (const auto* x = e.as<ev::Expel>()) alive[x->target.index()] = false;
    if (const auto* a = e.as<ev::Attack>()) alive[a->target.index()] = false;
  }
  if (!alive[agent.me.index()]) return TurnDecision::kWait;

  std::array<bool, kNumPlayers> over{};
  std::size_t since = 0;  // first event after the agent's last line today
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.day != day) continue;
    if (const auto* o = e.as<ev::Over>()) over[o->speaker.index()] = true;
    if (const auto* t = e.as<ev::Talk>(); t && t->speaker == agent.me) since = i + 1;
  }
  if (over[agent.me.index()]) return TurnDecision::kWait;

  bool others_done = true;
  for (PlayerId p : all_players()) {
    if (p != agent.me && alive[p.index()] && !over[p.index()]) others_done = false;
  }
  if (others_done) return TurnDecision::kSayOver;

  std::set<PlayerId> talkers;
  for (std::size_t i = since; i < events.size(); ++i) {
    const Event& e = events[i];
    if (e.day != day) continue;
    if (const auto* t = e.as<ev::Talk>(); t && t->speaker != agent.me) {
      talkers.insert(t->speaker);
    }
  }
  const auto k = static_cast<std::size_t>(agent.params.k_for(phase));
  return talkers.size() >= k ? TurnDecision::kSpeak : TurnDecision::kWait;
}

CandidateAction choose_action(AgentState& agent,
                              std::span<const CandidateAction> candidates,
                              const Oracle& oracle) {
  std::vector<const CandidateAction*> open;
  for (const auto& c : candidates) {
    const auto* u = std::get_if<act::Utterance>(&c);
    if (u && agent.said.contains(u->text)) continue;
    open.push_back(&c);
  }
  if (open.empty()) throw NoCandidates("every candidate was filtered out");

  std::vector<std::string> lines;
  lines.reserve(open.size());
  for (const auto* c : open) lines.push_back(render_candidate(agent.me, *c));
  const std::vector<double> scores = oracle.score_batch(agent.viewpoint.text(), lines);
  if (scores.size() != open.size()) {
    throw ProtocolError("oracle returned the wrong number of scores");
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  CandidateAction chosen = *open[best];
  if (const auto* u = std::get_if<act::Utterance>(&chosen)) agent.said.insert(u->text);
  return chosen;
}

std::vector<CandidateAction> phase_candidates(const AgentState& agent,
                                              const GameState& state,
                                              const CandidatePool& pool) {
  std::vector<CandidateAction> out;
  const auto moves = legal_actions(state, agent.me);
  auto targets_of = [&](ActionKind kind) {
    std::vector<PlayerId> t;
    for (const auto& m : moves) {
      if (m.kind == kind) t.push_back(*m.target);
    }
    return t;
  };

  if (auto divine = targets_of(ActionKind::kDivine); !divine.empty()) {
    for (PlayerId t : divine) out.push_back(act::DivineTarget{t});
    return out;
  }
  if (auto votes = targets_of(ActionKind::kVote); !votes.empty()) {
    for (PlayerId t : votes) out.push_back(act::VoteTarget{t});
    return out;
  }
  if (auto attacks = targets_of(ActionKind::kAttack); !attacks.empty()) {
    for (PlayerId t : attacks) out.push_back(act::AttackTarget{t});
    return out;
  }
  const bool can_talk = std::any_of(moves.begin(), moves.end(), [](const auto& m) {
    return m.kind == ActionKind::kTalk;
  });
  if (can_talk) {
    for (const auto& u : pool.utterances) {
      if (!agent.said.contains(u)) out.push_back(act::Utterance{u});
    }
  }
  return out;
}

std::optional<CandidateAction> decision_for_phase(AgentState& agent,
                                                  const GameState& state,
                                                  const CandidatePool& pool,
                                                  const Oracle& oracle) {
  const GameRecord record = record_of(state);
  agent.viewpoint = project(record, agent.me);

  const auto moves = legal_actions(state, agent.me);
  const bool owes_divination =
      std::any_of(moves.begin(), moves.end(),
                  [](const auto& m) { return m.kind == ActionKind::kDivine; });
  if (owes_divination) {
    return choose_action(agent, phase_candidates(agent, state, pool), oracle);
  }

  if (is_talk_phase(state.phase)) {
    std::vector<Event> visible;
    for (const Event& e : record.events) {
      if (visible_to(e, agent.me)) visible.push_back(e);
    }
    switch (should_act(agent, state.phase, visible)) {
      case TurnDecision::kWait:
        return std::nullopt;
      case TurnDecision::kSayOver:
        return act::OverSignal{};
      case TurnDecision::kSpeak:
        break;
    }
    const auto candidates = phase_candidates(agent, state, pool);
    if (candidates.empty()) return act::OverSignal{};
    try {
      return choose_action(agent, candidates, oracle);
    } catch (const NoCandidates&) {
      return act::OverSignal{};
    }
  }

  const auto candidates = phase_candidates(agent, state, pool);
  if (candidates.empty()) return std::nullopt;
  return choose_action(agent, candidates, oracle);
}

}  // namespace deepwolf
