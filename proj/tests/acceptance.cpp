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

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures (capped), so ctest fails when any criterion does.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "deepwolf/eval.hpp"
#include "support.hpp"

using namespace deepwolf;
namespace t = deepwolf::testing;

namespace {

PlayerId P(int n) { return PlayerId(n); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    out.ok = false;
    out.detail += " over time limit";
  }
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::printf("%s %-22s %s  %s\n", out.ok ? "PASS" : "FAIL", name, timing, out.detail.c_str());
  std::fflush(stdout);
  failures += !out.ok;
}

std::vector<GameRecord> random_records(std::size_t n, std::uint64_t seed) {
  MatchSpec spec;
  spec.n_games = static_cast<int>(n);
  spec.seed = seed;
  spec.pools_dir = t::pools_dir();
  return run_matches(spec);
}

Outcome golden_replay() {
  const ReplayReport report = t::replay_sample_game();
  std::vector<std::string> got;
  for (const auto& e : report.state.events) {
    if (e.is<ev::Expel>() || e.is<ev::Attack>() || e.is<ev::DivineResult>() ||
        e.is<ev::GameEnd>()) {
      got.push_back(describe(e));
    }
  }
  const std::vector<std::string> want = {"DivineResult(#1,#2,false)@1", "Expel(#4)@1",
                                         "Attack(#2)@1", "DivineResult(#1,#3,true)@2",
                                         "Expel(#1)@2", "GameEnd(werewolf)@2"};
  const bool ok = got == want && report.state.winner == Side::kWerewolf;
  return {ok, ok ? "Expel(#4) Attack(#2) DivineResult(#1,#3,true) Expel(#1) werewolf side"
                 : "derived events differ"};
}

Outcome termination() {
  const auto records = random_records(10000, 20240101);
  std::size_t finished = 0;
  for (const auto& r : records) {
    const bool by_day2 = !r.events.empty() && r.events.back().day <= 2 &&
                         r.events.back().is<ev::GameEnd>();
    finished += r.winner.has_value() && by_day2;
  }
  return {finished == records.size(),
          std::to_string(finished) + "/" + std::to_string(records.size()) +
              " finished by day 2"};
}

Outcome augmentation() {
  std::vector<GameRecord> villager;
  std::vector<GameRecord> wolf;
  const auto ctx = t::pool_context();
  for (std::uint64_t seed = 0; villager.size() < 16 || wolf.size() < 16; ++seed) {
    GameRecord r = t::random_game(seed, ctx);
    auto& bucket = r.winner == Side::kVillager ? villager : wolf;
    if (bucket.size() < 16) bucket.push_back(std::move(r));
  }
  std::vector<GameRecord> records = villager;
  records.insert(records.end(), wolf.begin(), wolf.end());
  const auto balanced = balance_sides(records);
  const auto examples = augment_dataset(balanced);
  std::size_t pos = 0;
  for (const auto& e : examples) pos += e.label;
  const bool ok = balanced.size() == 32 && examples.size() == 3840 && pos * 2 == examples.size();
  return {ok, std::to_string(examples.size()) + " examples, " + std::to_string(pos) +
                  " positive"};
}

Outcome masking(const std::vector<GameRecord>& records) {
  std::size_t violations = 0;
  std::size_t views = 0;
  for (const auto& r : records) {
    for (PlayerId v : all_players()) {
      violations += t::masking_violations(project(r, v), v, r.roles[v.index()]).size();
      ++views;
    }
  }
  // The scanner must see a planted leak.
  ViewpointLog leaked{P(4), Role::kVillager, viewpoint_header(P(4), Role::kVillager), {}};
  leaked.lines.push_back("#1 divined #2 and #2 is not a werewolf.");
  leaked.lines.push_back("Your role is villager.");
  const bool control = t::masking_violations(leaked, P(4), Role::kVillager).size() == 2;
  return {violations == 0 && control,
          std::to_string(views) + " viewpoints, " + std::to_string(violations) +
              " violations" + (control ? "" : ", scanner missed a planted leak")};
}

Outcome permutation_group(const std::vector<GameRecord>& records) {
  std::size_t bad = 0;
  std::vector<GameRecord> sample = {record_of(t::replay_sample_game().state)};
  sample.insert(sample.end(), records.begin(), records.begin() + 20);
  for (PlayerId v : all_players()) {
    const auto perms = all_permutations(v);
    bad += perms.size() != 24;
    std::set<std::array<int, 5>> images;
    for (const auto& p : perms) {
      std::array<int, 5> img{};
      for (PlayerId q : all_players()) img[q.index()] = p(q).number();
      images.insert(img);
    }
    bad += images.size() != 24;
    for (const auto& r : sample) {
      const ViewpointLog view = project(r, v);
      for (const auto& p : perms) {
        const ViewpointLog moved = apply_permutation(view, p);
        if (p.is_identity()) bad += moved.text() != view.text();
        bad += apply_permutation(moved, p.inverse()).text() != view.text();
      }
    }
  }
  const auto ex = augment_dataset(sample);
  for (std::size_t base = 0; base < ex.size(); base += 24) {
    for (std::size_t i = 1; i < 24; ++i) bad += ex[base + i].label != ex[base].label;
  }
  return {bad == 0, std::to_string(bad) + " violations over " +
                        std::to_string(sample.size()) + " records x 5 viewers x 24"};
}

Outcome gradient_check() {
  const double worst = t::gradient_check_worst(100, 2024);
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative error %.2e over 100 instances", worst);
  return {worst <= 1e-4, buf};
}

Outcome calibration() {
  const OracleKey key{Role::kVillager, P(2)};
  const auto corpus = t::calibration_corpus(key, 1000, 0.3, 77);
  double base = 0;
  for (const auto& ex : corpus) base += ex.label;
  base /= corpus.size();
  const auto res = train_baseline(corpus, key, TrainOptions{});
  double mean = 0;
  for (const auto& ex : corpus) mean += score(res.model, ex.text).value();
  mean /= corpus.size();
  char buf[96];
  std::snprintf(buf, sizeof buf, "mean prediction %.4f vs base rate %.4f", mean, base);
  return {std::abs(mean - base) <= 0.05, buf};
}

Outcome agent_invariants() {
  const auto pools = t::pool_context();
  PolicyContext plain = pools;
  plain.registry = t::hash_registry(1);
  auto shifted_reg = std::make_shared<OracleRegistry>();
  for (const auto& key : all_oracle_keys()) {
    shifted_reg->add(key, std::make_shared<t::AffineOracle>(plain.registry->lookup(key), 2.0, 1.0));
  }
  PolicyContext shifted = pools;
  shifted.registry = shifted_reg;

  std::size_t repeats = 0;
  std::size_t illegal = 0;
  std::size_t diverged = 0;
  for (std::uint64_t g = 0; g < 500; ++g) {
    const std::size_t agent_seat = g % kNumPlayers;
    auto seats_for = [&](const PolicyContext& ctx) {
      std::array<PolicyFactory, kNumPlayers> seats;
      for (std::size_t i = 0; i < kNumPlayers; ++i) {
        const auto name = i == agent_seat ? kAgentPolicy : kRandomPolicy;
        seats[i] = [&ctx, name, g, i](PlayerId p, Role role) {
          return make_policy(name, p, role, derive_seed(g, 100 + i), ctx);
        };
      }
      return seats;
    };
    GameRecord a;
    GameRecord b;
    try {
      a = play_game(GameConfig{g, std::nullopt}, seats_for(plain));
      b = play_game(GameConfig{g, std::nullopt}, seats_for(shifted));
      // Independent legality check: a strict replay re-applies every event.
      replay(a);
    } catch (const IllegalEvent&) {
      ++illegal;
      continue;
    } catch (const InconsistentRecord&) {
      ++illegal;
      continue;
    }
    diverged += a.events != b.events;
    std::set<std::string> said;
    for (const auto& e : a.events) {
      const auto* x = e.as<ev::Talk>();
      if (x && x->speaker.index() == agent_seat && !said.insert(x->text).second) ++repeats;
    }
  }
  return {repeats + illegal + diverged == 0,
          "500 games: " + std::to_string(repeats) + " repeats, " + std::to_string(illegal) +
              " illegal, " + std::to_string(diverged) + " changed under 2x+1"};
}

Outcome turn_policy() {
  const AgentState me(P(3), Role::kWerewolf);
  auto talk = [](int day, int p) { return Event{day, ev::Talk{P(p), "hi"}}; };
  auto over = [](int day, int p) { return Event{day, ev::Over{P(p)}}; };
  std::vector<std::string> bad;

  // Day 1: Wait through the 2nd distinct speaker, Speak at the 3rd.
  std::vector<Event> d1 = {talk(1, 1), talk(1, 1), talk(1, 2)};
  if (should_act(me, Phase::kDay1Talk, d1) != TurnDecision::kWait) bad.push_back("day1 k-1");
  d1.push_back(talk(1, 4));
  if (should_act(me, Phase::kDay1Talk, d1) != TurnDecision::kSpeak) bad.push_back("day1 k");
  d1.push_back(talk(1, 3));
  if (should_act(me, Phase::kDay1Talk, d1) != TurnDecision::kWait) bad.push_back("day1 reset");

  // Day 2: the first other speaker.
  std::vector<Event> d2 = {Event{1, ev::Expel{P(4)}}, Event{1, ev::Attack{P(2)}}};
  if (should_act(me, Phase::kDay2Talk, d2) != TurnDecision::kWait) bad.push_back("day2 k-1");
  d2.push_back(talk(2, 5));
  if (should_act(me, Phase::kDay2Talk, d2) != TurnDecision::kSpeak) bad.push_back("day2 k");

  // SayOver once every other alive seat is done.
  std::vector<Event> o1 = {over(1, 1), over(1, 2), over(1, 4)};
  if (should_act(me, Phase::kDay1Talk, o1) != TurnDecision::kWait) bad.push_back("over early");
  o1.push_back(over(1, 5));
  if (should_act(me, Phase::kDay1Talk, o1) != TurnDecision::kSayOver) bad.push_back("over");
  std::vector<Event> o2 = d2;
  o2.push_back(over(2, 1));
  o2.push_back(over(2, 5));
  if (should_act(me, Phase::kDay2Talk, o2) != TurnDecision::kSayOver) bad.push_back("over day2");

  std::string detail = bad.empty() ? "k=3 day 1, k=1 day 2, SayOver" : "";
  for (const auto& b : bad) detail += b + "; ";
  return {bad.empty(), detail};
}

Outcome round_trip(const std::vector<GameRecord>& records) {
  std::size_t bad = 0;
  for (const auto& r : records) bad += parse(render_full(r)) != r.events;
  return {bad == 0, std::to_string(records.size()) + " records, " + std::to_string(bad) +
                        " mismatches"};
}

Outcome win_table() {
  std::vector<GameRecord> records;
  auto rec = [](RoleMap roles, Side winner) {
    GameRecord r;
    r.roles = roles;
    r.winner = winner;
    return r;
  };
  const RoleMap a = {Role::kWerewolf, Role::kSeer, Role::kBetrayer, Role::kVillager,
                     Role::kVillager};
  for (int i = 0; i < 9; ++i) records.push_back(rec(a, i < 5 ? Side::kWerewolf : Side::kVillager));
  const std::array<std::string, kNumPlayers> ids = {"A", "B", "C", "D", "E"};
  const std::string csv = export_table(compute_win_rates(records, ids), TableFormat::kCsv);
  const std::string want =
      "Player,Werewolf,Seer,Betrayer,Villager\n"
      "A,0.56,N/A,N/A,N/A\n"
      "B,N/A,0.44,N/A,N/A\n"
      "C,N/A,N/A,0.56,N/A\n"
      "D,N/A,N/A,N/A,0.44\n"
      "E,N/A,N/A,N/A,0.44\n"
      "Average,0.56,0.44,0.56,0.44\n";
  const bool empty_ok = export_table(WinRateTable{}, TableFormat::kCsv) ==
                        "Player,Werewolf,Seer,Betrayer,Villager\n";
  return {csv == want && empty_ok, csv == want ? "N/A cells, 2 decimals, fixed column order"
                                               : "table differs:\n" + csv};
}

}  // namespace

int main() {
  std::vector<GameRecord> thousand;
  criterion("golden_replay", 1.0, golden_replay);
  criterion("termination_10k", 30.0, termination);
  criterion("augmentation_count", 10.0, augmentation);
  thousand = random_records(1000, 99);
  criterion("masking_soundness", 0, [&] { return masking(thousand); });
  criterion("permutation_group", 0, [&] { return permutation_group(thousand); });
  criterion("oracle_gradient", 0, gradient_check);
  criterion("oracle_calibration", 0, calibration);
  criterion("agent_invariants", 0, agent_invariants);
  criterion("turn_policy", 0, turn_policy);
  criterion("round_trip_1000", 0, [&] { return round_trip(thousand); });
  criterion("win_rate_table", 0, win_table);
  return failures > 100 ? 100 : failures;
}
