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

#include "deepwolf/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "deepwolf/manifest.hpp"
#include "deepwolf/remote_oracle.hpp"

namespace deepwolf {

using nlohmann::json;

namespace {

std::string column_name(Role r) {
  std::string s(role_name(r));
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool needs_agent(const MatchSpec& spec) {
  return std::any_of(spec.policies.begin(), spec.policies.end(),
                     [](const auto& p) { return p == kAgentPolicy; });
}

}  // namespace

void MatchSpec::validate() const {
  if (n_games < 1) throw ConfigError("n_games must be >= 1");
  for (const auto& p : policies) {
    if (!is_known_policy(p)) throw ConfigError("unknown policy '" + p + "'");
  }
}

std::string MatchSpec::identity_of(PlayerId seat) const {
  const auto& id = identities[seat.index()];
  return id.empty() ? policies[seat.index()] + "@" + seat.str() : id;
}

MatchSpec match_spec_from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ConfigError("match spec must be an object");
  MatchSpec spec;
  try {
    spec.n_games = j.at("n_games").get<int>();
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("policies")) {
      const auto& ps = j.at("policies");
      if (!ps.is_array() || ps.size() != kNumPlayers) {
        throw ConfigError("policies must list 5 seats");
      }
      for (std::size_t i = 0; i < kNumPlayers; ++i) {
        spec.policies[i] = ps[i].get<std::string>();
      }
    }
    if (j.contains("identities")) {
      const auto& ids = j.at("identities");
      if (!ids.is_array() || ids.size() != kNumPlayers) {
        throw ConfigError("identities must list 5 seats");
      }
      for (std::size_t i = 0; i < kNumPlayers; ++i) {
        spec.identities[i] = ids[i].get<std::string>();
      }
    }
    auto path_field = [&](const char* name) -> std::filesystem::path {
      if (!j.contains(name)) return {};
      std::filesystem::path p = j.at(name).get<std::string>();
      return p.is_relative() && !base.empty() ? base / p : p;
    };
    spec.pools_dir = path_field("pools_dir");
    spec.models_dir = path_field("models_dir");
    spec.oracle_endpoint = j.value("oracle_endpoint", std::string{});
    spec.sim.max_talk_per_phase =
        j.value("max_talk_per_phase", spec.sim.max_talk_per_phase);
    spec.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad match spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

MatchSpec load_match_spec(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("match spec is not JSON: " + std::string(e.what()));
  }
  return match_spec_from_json(j, path.parent_path());
}

PolicyContext build_policy_context(const MatchSpec& spec) {
  PolicyContext ctx;
  if (!spec.pools_dir.empty()) ctx.pools = load_pools(spec.pools_dir);
  if (!needs_agent(spec)) return ctx;

  auto registry = std::make_shared<OracleRegistry>();
  if (!spec.oracle_endpoint.empty()) {
    register_remote(*registry, Endpoint::parse(spec.oracle_endpoint));
  } else if (!spec.models_dir.empty()) {
    registry->load_baseline_dir(spec.models_dir);
  }
  // Roles are re-dealt per game, so an agent seat may need any role.
  for (std::size_t i = 0; i < kNumPlayers; ++i) {
    if (spec.policies[i] != kAgentPolicy) continue;
    for (Role r : kAllRoles) {
      const OracleKey key{r, PlayerId::from_index(i)};
      if (!registry->contains(key)) {
        throw PolicyLoadError("no value model for " + key.str());
      }
    }
  }
  ctx.registry = std::move(registry);
  return ctx;
}

std::vector<GameRecord> run_matches(const MatchSpec& spec) {
  spec.validate();
  return run_matches(spec, build_policy_context(spec));
}

std::vector<GameRecord> run_matches(const MatchSpec& spec,
                                    const PolicyContext& ctx) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n_games);
  std::vector<std::optional<GameRecord>> out(n);

  auto play = [&](std::size_t i) {
    const std::uint64_t game_seed = derive_seed(spec.seed, i);
    std::array<PolicyFactory, kNumPlayers> seats;
    for (std::size_t s = 0; s < kNumPlayers; ++s) {
      seats[s] = [&, s, game_seed](PlayerId seat, Role role) {
        return make_policy(spec.policies[s], seat, role,
                           derive_seed(game_seed, 100 + s), ctx);
      };
    }
    out[i] = play_game(GameConfig{game_seed, std::nullopt}, seats, spec.sim);
  };

  unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) play(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            play(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<GameRecord> records;
  records.reserve(n);
  for (auto& r : out) records.push_back(std::move(*r));
  return records;
}

std::optional<double> WinCell::rate() const {
  if (games == 0) return std::nullopt;
  return std::round(100.0 * wins / games) / 100.0;
}

int WinRateRow::total_games() const {
  int n = 0;
  for (const auto& c : cells) n += c.games;
  return n;
}

WinRateTable compute_win_rates(const std::vector<GameRecord>& records,
                               const std::array<std::string, kNumPlayers>& attribution) {
  WinRateTable table;
  auto row_for = [&](const std::string& id) -> WinRateRow& {
    for (auto& r : table.rows) {
      if (r.identity == id) return r;
    }
    table.rows.push_back(WinRateRow{id, {}});
    return table.rows.back();
  };
  for (const auto& id : attribution) row_for(id);

  for (const auto& record : records) {
    if (!record.winner) continue;
    for (PlayerId p : all_players()) {
      const Role role = record.roles[p.index()];
      const auto col = static_cast<std::size_t>(
          std::find(kTableColumns.begin(), kTableColumns.end(), role) -
          kTableColumns.begin());
      WinCell& cell = row_for(attribution[p.index()]).cells[col];
      ++cell.games;
      if (side_of(role) == *record.winner) ++cell.wins;
    }
  }

  for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
    double sum = 0;
    int defined = 0;
    for (const auto& r : table.rows) {
      if (auto rate = r.cells[c].rate()) {
        sum += *rate;
        ++defined;
      }
    }
    if (defined > 0) table.average[c] = sum / defined;
  }
  return table;
}

std::string format_rate(std::optional<double> rate) {
  if (!rate) return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *rate);
  return buf;
}

std::string export_table(const WinRateTable& table, TableFormat format) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Player"};
  for (Role r : kTableColumns) header.push_back(column_name(r));
  grid.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line{row.identity};
    for (const auto& c : row.cells) line.push_back(format_rate(c.rate()));
    grid.push_back(std::move(line));
  }
  if (!table.rows.empty()) {
    std::vector<std::string> line{"Average"};
    for (const auto& a : table.average) line.push_back(format_rate(a));
    grid.push_back(std::move(line));
  }

  std::string out;
  if (format == TableFormat::kCsv) {
    for (const auto& line : grid) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (i) out += ',';
        out += csv_field(line[i]);
      }
      out += '\n';
    }
    return out;
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) text += "  ";
      const std::size_t pad = width[i] - line[i].size();
      // identities left-aligned, numbers right-aligned
      if (i == 0) {
        text += line[i] + std::string(pad, ' ');
      } else {
        text += std::string(pad, ' ') + line[i];
      }
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + '\n';
  }
  return out;
}

}  // namespace deepwolf
