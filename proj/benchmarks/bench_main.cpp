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

#include <benchmark/benchmark.h>

#include "deepwolf/augment.hpp"
#include "deepwolf/baseline.hpp"
#include "deepwolf/eval.hpp"

using namespace deepwolf;

namespace {

PolicyContext pools() {
  PolicyContext ctx;
  ctx.pools = load_pools(DEEPWOLF_POOLS_DIR);
  return ctx;
}

GameRecord one_game(std::uint64_t seed, const PolicyContext& ctx) {
  std::array<PolicyFactory, kNumPlayers> seats;
  for (std::size_t i = 0; i < kNumPlayers; ++i) {
    seats[i] = [&ctx, seed, i](PlayerId p, Role role) {
      return make_policy(kRandomPolicy, p, role, derive_seed(seed, 100 + i), ctx);
    };
  }
  return play_game(GameConfig{seed, std::nullopt}, seats);
}

void BM_PlayRandomGame(benchmark::State& state) {
  const auto ctx = pools();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(one_game(seed++, ctx));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PlayRandomGame);

void BM_Project(benchmark::State& state) {
  const GameRecord r = one_game(7, pools());
  for (auto _ : state) {
    for (PlayerId v : all_players()) benchmark::DoNotOptimize(project(r, v));
  }
  state.SetItemsProcessed(state.iterations() * kNumPlayers);
}
BENCHMARK(BM_Project);

void BM_RenderParse(benchmark::State& state) {
  const GameRecord r = one_game(7, pools());
  for (auto _ : state) benchmark::DoNotOptimize(parse(render_full(r)));
}
BENCHMARK(BM_RenderParse);

void BM_AugmentRecord(benchmark::State& state) {
  const std::vector<GameRecord> records = {one_game(7, pools())};
  for (auto _ : state) benchmark::DoNotOptimize(augment_dataset(records));
  state.SetItemsProcessed(state.iterations() * 120);
}
BENCHMARK(BM_AugmentRecord);

void BM_Featurize(benchmark::State& state) {
  const GameRecord r = one_game(7, pools());
  const std::string text = project(r, PlayerId(1)).text();
  const FeatureSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(featurize(text, spec));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Featurize);

// A full pool scored through the native oracle, as the agent does per turn.
void BM_ChooseUtterance(benchmark::State& state) {
  const auto ctx = pools();
  const auto& pool = ctx.pools.at(Role::kVillager);
  BaselineModel model;
  model.key = OracleKey{Role::kVillager, PlayerId(2)};
  model.dim = 1u << 16;
  model.ngram_orders = {1, 2};
  model.weights.assign(model.dim, 0.01);
  const BaselineOracle oracle(model);
  std::vector<CandidateAction> cands;
  for (const auto& u : pool.utterances) cands.push_back(act::Utterance{u});
  const GameRecord r = one_game(7, ctx);
  for (auto _ : state) {
    AgentState agent(PlayerId(2), Role::kVillager);
    agent.viewpoint = project(r, PlayerId(2));
    benchmark::DoNotOptimize(choose_action(agent, cands, oracle));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cands.size()));
}
BENCHMARK(BM_ChooseUtterance);

}  // namespace

BENCHMARK_MAIN();
