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

#ifndef DEEPWOLF_EVAL_HPP_
#define DEEPWOLF_EVAL_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deepwolf/logfmt.hpp"
#include "deepwolf/sim.hpp"

namespace deepwolf {

struct MatchSpec {
  int n_games = 1;
  std::uint64_t seed = 0;
  std::array<std::string, kNumPlayers> policies{
      "random-legal", "random-legal", "random-legal", "random-legal",
      "random-legal"};
  // Row labels for the win-rate table; defaults to "<policy>@#n".
  std::array<std::string, kNumPlayers> identities{};
  std::filesystem::path pools_dir;
  std::filesystem::path models_dir;
  // host:port of a remote oracle; takes precedence over models_dir.
  std::string oracle_endpoint;
  SimOptions sim;
  // 0 = hardware concurrency.
  unsigned threads = 0;

  // Throws ConfigError.
  void validate() const;
  std::string identity_of(PlayerId seat) const;
};

// Reads the JSON spec document. Relative paths resolve against the
// spec file's directory. Throws ConfigError / StorageError.
MatchSpec load_match_spec(const std::filesystem::path& path);
MatchSpec match_spec_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});

// Loads pools and the oracle registry the spec's policies need. Throws
// PolicyLoadError.
PolicyContext build_policy_context(const MatchSpec& spec);

// Game i uses seed derive_seed(spec.seed, i); roles are dealt from that
// seed. Output order is by game index regardless of thread count.
std::vector<GameRecord> run_matches(const MatchSpec& spec);
std::vector<GameRecord> run_matches(const MatchSpec& spec,
                                    const PolicyContext& context);

// Column order of the win-rate table.
inline constexpr std::array<Role, 4> kTableColumns = {
    Role::kWerewolf, Role::kSeer, Role::kBetrayer, Role::kVillager};

struct WinCell {
  int wins = 0;
  int games = 0;
  // wins/games rounded to 2 decimals; nullopt when games == 0.
  std::optional<double> rate() const;
};

struct WinRateRow {
  std::string identity;
  std::array<WinCell, 4> cells{};  // indexed like kTableColumns
  int total_games() const;
};

struct WinRateTable {
  std::vector<WinRateRow> rows;
  // Per column, the mean of the defined row rates (rows weigh equally).
  std::array<std::optional<double>, 4> average{};
};

// `attribution[seat]` names who sat in that seat; rows appear in first-seen
// seat order. Unfinished records are skipped.
WinRateTable compute_win_rates(const std::vector<GameRecord>& records,
                               const std::array<std::string, kNumPlayers>& attribution);

// "N/A" or the rate with exactly two decimals.
std::string format_rate(std::optional<double> rate);

enum class TableFormat { kText, kCsv };

// Header row, one row per identity, then an "Average" row (omitted for an
// empty table).
std::string export_table(const WinRateTable& table, TableFormat format);

}  // namespace deepwolf

#endif  // DEEPWOLF_EVAL_HPP_
