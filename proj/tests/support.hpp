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

#ifndef DEEPWOLF_TESTS_SUPPORT_HPP_
#define DEEPWOLF_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <regex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "deepwolf/agent.hpp"
#include "deepwolf/augment.hpp"
#include "deepwolf/baseline.hpp"
#include "deepwolf/logfmt.hpp"
#include "deepwolf/manifest.hpp"
#include "deepwolf/oracle.hpp"
#include "deepwolf/replay.hpp"
#include "deepwolf/sim.hpp"

namespace deepwolf::testing {

inline std::filesystem::path fixture_dir() { return DEEPWOLF_FIXTURE_DIR; }
inline std::filesystem::path pools_dir() { return DEEPWOLF_POOLS_DIR; }

// 1 seer, 2 villager, 3 werewolf, 4 villager, 5 betrayer.
inline RoleMap sample_game_roles() {
  return {Role::kSeer, Role::kVillager, Role::kWerewolf, Role::kVillager,
          Role::kBetrayer};
}

inline std::string sample_game_text() {
  return read_file(fixture_dir() / "sample_game.log");
}

// The sample transcript, reconstructed through lenient replay.
inline ReplayReport replay_sample_game() {
  GameRecord r;
  r.config = GameConfig{0, sample_game_roles()};
  r.roles = sample_game_roles();
  r.events = parse(sample_game_text());
  return replay(r, ReplayOptions{true});
}

inline PolicyContext pool_context() {
  PolicyContext ctx;
  ctx.pools = load_pools(pools_dir());
  return ctx;
}

// A finished game between five random-legal seats.
inline GameRecord random_game(std::uint64_t seed, const PolicyContext& ctx,
                              const SimOptions& options = {}) {
  std::array<PolicyFactory, kNumPlayers> seats;
  for (std::size_t i = 0; i < kNumPlayers; ++i) {
    seats[i] = [&ctx, seed, i](PlayerId p, Role role) {
      return make_policy(kRandomPolicy, p, role, derive_seed(seed, 100 + i), ctx);
    };
  }
  return play_game(GameConfig{seed, std::nullopt}, seats, options);
}

// Deterministic pseudo-scores in [0, 1] from a hash of the input.
class HashOracle : public Oracle {
 public:
  explicit HashOracle(std::uint64_t salt = 0) : salt_(salt) {}
  double score(std::string_view log_text, std::string_view candidate) const override {
    std::uint64_t h = 1469598103934665603ULL ^ salt_;
    for (char c : oracle_input(log_text, candidate)) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
  }

 private:
  std::uint64_t salt_;
};

// x -> a*x + b applied to another oracle's scores.
class AffineOracle : public Oracle {
 public:
  AffineOracle(OracleHandle inner, double a, double b)
      : inner_(std::move(inner)), a_(a), b_(b) {}
  double score(std::string_view log_text, std::string_view candidate) const override {
    return a_ * inner_->score(log_text, candidate) + b_;
  }

 private:
  OracleHandle inner_;
  double a_;
  double b_;
};

// Scores from a fixed table keyed by candidate line; anything else 0.
class TableOracle : public Oracle {
 public:
  explicit TableOracle(std::vector<std::pair<std::string, double>> table)
      : table_(std::move(table)) {}
  double score(std::string_view, std::string_view candidate) const override {
    for (const auto& [line, s] : table_) {
      if (line == candidate) return s;
    }
    return 0.0;
  }

 private:
  std::vector<std::pair<std::string, double>> table_;
};

inline std::shared_ptr<OracleRegistry> hash_registry(std::uint64_t salt = 0) {
  auto reg = std::make_shared<OracleRegistry>();
  for (const auto& key : all_oracle_keys()) {
    reg->add(key, std::make_shared<HashOracle>(salt));
  }
  return reg;
}

// Viewpoint-rule violations found from the text alone, without the
// projector: a two-line header, then only public lines and the viewer's own
// seer lines.
inline std::vector<std::string> masking_violations(const ViewpointLog& view,
                                                   PlayerId viewer, Role role) {
  static const std::regex talk(R"(^#[1-5]\) .*)");
  static const std::regex pub(
      R"(^(#[1-5] voted for #[1-5]\.|#[1-5] has been erased\.|The werewolf erased #[1-5]\.|The villager side won\.|The werewolf side won\.)$)");
  static const std::regex seer(
      R"(^#([1-5]) (divined #[1-5] and #[1-5] is (the|not a) werewolf\.|chose to divine #[1-5]\.)$)");
  std::vector<std::string> bad;
  if (view.lines.size() < 2 || view.lines[0] != "You are " + viewer.str() + "." ||
      view.lines[1] != "Your role is " + std::string(role_name(role)) + ".") {
    bad.push_back("header");
    return bad;
  }
  for (std::size_t i = 2; i < view.lines.size(); ++i) {
    const std::string& line = view.lines[i];
    if (line.rfind("Your role is", 0) == 0) {
      bad.push_back(line);
      continue;
    }
    if (std::regex_match(line, talk) || std::regex_match(line, pub)) continue;
    std::smatch m;
    if (std::regex_match(line, m, seer) && role == Role::kSeer &&
        m[1].str() == std::to_string(viewer.number())) {
      continue;
    }
    bad.push_back(line);
  }
  return bad;
}

// Worst relative error between loss_gradient and central differences of
// mean_loss over random small instances.
inline double gradient_check_worst(int instances, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  double worst = 0;
  auto rel = [](double a, double n) {
    return std::abs(a - n) / std::max(std::abs(a) + std::abs(n), 1e-8);
  };
  for (int instance = 0; instance < instances; ++instance) {
    const std::uint32_t dim = 8 + static_cast<std::uint32_t>(uniform_index(rng, 57));
    std::vector<double> w(dim);
    for (auto& x : w) x = uniform_unit(rng) * 2 - 1;
    double b = uniform_unit(rng) - 0.5;
    std::vector<LabeledFeatures> batch(1 + uniform_index(rng, 8));
    for (auto& ex : batch) {
      std::map<std::uint32_t, double> xs;
      for (int k = 0; k < 6; ++k) {
        xs[static_cast<std::uint32_t>(uniform_index(rng, dim))] += 1 + uniform_index(rng, 3);
      }
      ex.x.assign(xs.begin(), xs.end());
      ex.y = static_cast<double>(uniform_index(rng, 2));
    }

    std::vector<double> gw(dim);
    double gb = 0;
    loss_gradient(w, b, batch, gw, gb);

    const double h = 1e-6;
    for (std::uint32_t i = 0; i < dim; ++i) {
      const double keep = w[i];
      w[i] = keep + h;
      const double up = mean_loss(w, b, batch);
      w[i] = keep - h;
      const double down = mean_loss(w, b, batch);
      w[i] = keep;
      const double numeric = (up - down) / (2 * h);
      if (std::abs(gw[i]) < 1e-10 && std::abs(numeric) < 1e-10) continue;
      worst = std::max(worst, rel(gw[i], numeric));
    }
    const double numeric_b =
        (mean_loss(w, b + h, batch) - mean_loss(w, b - h, batch)) / (2 * h);
    worst = std::max(worst, rel(gb, numeric_b));
  }
  return worst;
}

// Synthetic corpus with the given positive rate and weakly informative
// tokens.
inline std::vector<TrainingExample> calibration_corpus(const OracleKey& key, int n,
                                                       double base_rate,
                                                       std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<TrainingExample> corpus;
  for (int i = 0; i < n; ++i) {
    const int label = uniform_unit(rng) < base_rate ? 1 : 0;
    std::string text = "#" + std::to_string(1 + uniform_index(rng, 5)) + ") hello ";
    if (uniform_unit(rng) < (label ? 0.7 : 0.3)) text += "suspicious ";
    text += "token" + std::to_string(uniform_index(rng, 20));
    corpus.push_back({key, text, label});
  }
  return corpus;
}

// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("deepwolf_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace deepwolf::testing

#endif  // DEEPWOLF_TESTS_SUPPORT_HPP_
