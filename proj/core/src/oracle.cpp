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

#include "deepwolf/oracle.hpp"

#include <cmath>

#include "deepwolf/baseline.hpp"

namespace deepwolf {

std::string OracleKey::str() const {
  return std::string(role_name(role)) + "_" + std::to_string(player.number());
}

std::vector<OracleKey> all_oracle_keys() {
  std::vector<OracleKey> out;
  for (Role r : kAllRoles) {
    for (PlayerId p : all_players()) out.push_back({r, p});
  }
  return out;
}

Score::Score(double win_probability) : p_(win_probability) {
  if (!(win_probability >= 0.0 && win_probability <= 1.0)) {
    throw ProtocolError("win probability outside [0,1]: " +
                        std::to_string(win_probability));
  }
}

std::vector<double> Oracle::score_batch(
    std::string_view log_text,
    std::span<const std::string> candidate_lines) const {
  std::vector<double> out;
  out.reserve(candidate_lines.size());
  for (const auto& c : candidate_lines) out.push_back(score(log_text, c));
  return out;
}

void OracleRegistry::add(const OracleKey& key, OracleHandle oracle) {
  models_[key] = std::move(oracle);
}

OracleHandle OracleRegistry::lookup(const OracleKey& key) const {
  auto it = models_.find(key);
  if (it == models_.end()) throw ModelMissing("no model for " + key.str());
  return it->second;
}

std::size_t OracleRegistry::load_baseline_dir(const std::filesystem::path& dir) {
  std::size_t loaded = 0;
  for (const OracleKey& key : all_oracle_keys()) {
    const auto path = dir / (key.str() + ".bin");
    if (!std::filesystem::exists(path)) continue;
    BaselineModel model = load_model(path);
    if (model.key != key) {
      throw ModelFormatError(path.string() + " holds the model for " +
                             model.key.str());
    }
    add(key, std::make_shared<BaselineOracle>(std::move(model)));
    ++loaded;
  }
  return loaded;
}

}  // namespace deepwolf
