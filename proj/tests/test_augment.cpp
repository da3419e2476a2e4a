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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "deepwolf/augment.hpp"
#include "support.hpp"

using namespace deepwolf;
namespace t = deepwolf::testing;

namespace {

PlayerId P(int n) { return PlayerId(n); }

// Games won by each side, in seed order.
std::vector<GameRecord> games_by_side(Side side, std::size_t n) {
  const auto ctx = t::pool_context();
  std::vector<GameRecord> out;
  for (std::uint64_t seed = 0; out.size() < n; ++seed) {
    GameRecord r = t::random_game(seed, ctx);
    if (r.winner == side) out.push_back(std::move(r));
  }
  return out;
}

// The viewer's own decision events, counted straight from the record.
std::size_t decisions_of(const GameRecord& r, PlayerId v) {
  std::size_t n = 0;
  for (const auto& e : r.events) {
    if (const auto* x = e.as<ev::Talk>()) n += x->speaker == v;
    if (const auto* x = e.as<ev::Over>()) n += x->speaker == v;
    if (const auto* x = e.as<ev::Vote>()) n += x->voter == v;
    if (const auto* x = e.as<ev::DivineChoice>()) n += x->seer == v;
    if (e.is<ev::Attack>()) n += r.roles[v.index()] == Role::kWerewolf;
  }
  return n;
}

}  // namespace

TEST_CASE("24 permutations per viewer, identity first") {
  for (PlayerId v : all_players()) {
    const auto perms = all_permutations(v);
    CHECK(perms.size() == 24);
    CHECK(perms.front().is_identity());
    std::set<std::array<int, 5>> images;
    for (const auto& p : perms) {
      CHECK(p(v) == v);
      std::array<int, 5> img{};
      for (PlayerId q : all_players()) img[q.index()] = p(q).number();
      images.insert(img);
    }
    CHECK(images.size() == 24);
  }
}

TEST_CASE("permutations form a group") {
  for (PlayerId v : all_players()) {
    const auto perms = all_permutations(v);
    for (const auto& a : perms) {
      CHECK(a.then(a.inverse()).is_identity());
      for (const auto& b : perms) {
        const auto c = a.then(b);
        CHECK(std::find(perms.begin(), perms.end(), c) != perms.end());
      }
    }
  }
}

TEST_CASE("permutation must fix the viewer and be a bijection") {
  CHECK_THROWS_AS(Permutation(P(1), {2, 1, 3, 4, 5}), ConfigError);
  CHECK_THROWS_AS(Permutation(P(1), {1, 2, 2, 4, 5}), ConfigError);
  CHECK_NOTHROW(Permutation(P(1), {1, 3, 2, 4, 5}));
}

TEST_CASE("permute_text rewrites #n tokens only") {
  const Permutation swap23(P(1), {1, 3, 2, 4, 5});
  CHECK(permute_text("#2) Hi, I am a villager!", swap23) == "#3) Hi, I am a villager!");
  CHECK(permute_text("#2 voted for #3.", swap23) == "#3 voted for #2.");
  CHECK(permute_text("#23 and #7 and #1", swap23) == "#23 and #7 and #1");
  CHECK(permute_text(">#2, ok", swap23) == ">#3, ok");
}

TEST_CASE("apply_permutation on viewpoints") {
  const GameRecord r = record_of(t::replay_sample_game().state);
  for (PlayerId v : all_players()) {
    const ViewpointLog view = project(r, v);
    for (const auto& perm : all_permutations(v)) {
      const ViewpointLog moved = apply_permutation(view, perm);
      CHECK(moved.lines.size() == view.lines.size());
      CHECK(moved.lines[0] == view.lines[0]);  // the viewer keeps its number
      CHECK(apply_permutation(moved, perm.inverse()) == view);
      if (perm.is_identity()) CHECK(moved == view);
    }
  }
  CHECK_THROWS_AS(apply_permutation(project(r, P(1)), Permutation::identity(P(2))),
                  ViewerMismatch);
}

TEST_CASE("augment_dataset counts and labels") {
  const auto villager_wins = games_by_side(Side::kVillager, 1);
  const auto one = augment_dataset(villager_wins);
  CHECK(one.size() == 120);
  std::size_t positives = 0;
  for (const auto& ex : one) {
    CHECK((ex.label == 0 || ex.label == 1));
    CHECK_FALSE(ex.text.empty());
    positives += ex.label;
  }
  // Brute-force count: viewers on the villager side times 24.
  std::size_t villager_side = 0;
  for (Role r : villager_wins[0].roles) villager_side += side_of(r) == Side::kVillager;
  CHECK(positives == villager_side * 24);
  CHECK(positives == 72);

  auto records = games_by_side(Side::kVillager, 16);
  const auto wolves = games_by_side(Side::kWerewolf, 16);
  records.insert(records.end(), wolves.begin(), wolves.end());
  const auto all = augment_dataset(records);
  CHECK(all.size() == 3840);
  CHECK(augment_dataset(records) == all);
}

TEST_CASE("labels are invariant under permutation") {
  const auto records = games_by_side(Side::kWerewolf, 2);
  const auto ex = augment_dataset(records);
  for (std::size_t base = 0; base < ex.size(); base += 24) {
    for (std::size_t i = 1; i < 24; ++i) {
      CHECK(ex[base + i].label == ex[base].label);
      CHECK(ex[base + i].key == ex[base].key);
    }
  }
}

TEST_CASE("unfinished records are rejected") {
  GameRecord r;
  r.roles = t::sample_game_roles();
  CHECK_THROWS_AS(augment_dataset({r}), UnfinishedRecord);
}

TEST_CASE("slices of the sample game") {
  const GameRecord r = record_of(t::replay_sample_game().state);
  const auto slices = slice_prefixes(r, P(3));
  bool saw_vote5 = false;
  for (const auto& s : slices) {
    if (const auto* v = std::get_if<act::VoteTarget>(&s.action)) saw_vote5 |= v->target == P(5);
  }
  CHECK(saw_vote5);
  for (PlayerId v : all_players()) {
    CHECK(slice_prefixes(r, v).size() == decisions_of(r, v));
    CHECK(slice_prefixes(r, v).size() >= 1);
  }
}

TEST_CASE("slice count equals the recount of decision events") {
  const auto ctx = t::pool_context();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GameRecord r = t::random_game(seed, ctx);
    std::size_t total = 0;
    std::size_t expected = 0;
    for (PlayerId v : all_players()) {
      total += slice_prefixes(r, v).size();
      expected += decisions_of(r, v);
    }
    CHECK(total == expected);
    CHECK(augment_slices({r}).size() == expected * 24);
  }
}

TEST_CASE("balance_sides equalizes wins") {
  auto records = games_by_side(Side::kVillager, 20);
  const auto wolves = games_by_side(Side::kWerewolf, 12);
  records.insert(records.end(), wolves.begin(), wolves.end());
  const auto balanced = balance_sides(records);
  CHECK(balanced.size() == 24);
  const auto ex = augment_dataset(balanced);
  std::size_t pos = 0;
  for (const auto& e : ex) pos += e.label;
  // Per record 3 of 5 viewers share the winner's side when the villagers
  // win, 2 of 5 when the werewolves do, so equal record counts give 1:1.
  CHECK(pos * 2 == ex.size());
}

TEST_CASE("jsonl export round trip") {
  const auto ex = augment_dataset(games_by_side(Side::kVillager, 1));
  const std::string text = export_jsonl(ex);
  CHECK(std::count(text.begin(), text.end(), '\n') == 120);
  CHECK(read_jsonl(text) == ex);
  const auto j = nlohmann::json::parse(text.substr(0, text.find('\n')));
  CHECK(j.contains("role"));
  CHECK(j.contains("player"));
  CHECK(j.contains("text"));
  CHECK(j.contains("label"));
  CHECK(export_jsonl({}).empty());
}
