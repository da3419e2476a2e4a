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

#ifndef DEEPWOLF_ORACLE_HPP_
#define DEEPWOLF_ORACLE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepwolf/types.hpp"

namespace deepwolf {

// Selects one of the 20 value models: the agent's role and seat number.
struct OracleKey {
  Role role;
  PlayerId player;

  // "<role>_<n>", e.g. "werewolf_3". Used for model file names.
  std::string str() const;

  friend auto operator<=>(const OracleKey&, const OracleKey&) = default;
};

// All 4 x 5 keys, role-major.
std::vector<OracleKey> all_oracle_keys();

// A win probability. Construction outside [0, 1] (or NaN) throws
// ProtocolError.
class Score {
 public:
  explicit Score(double win_probability);
  double value() const { return p_; }

 private:
  double p_;
};

// p(win | log, candidate) for one key. Implementations are immutable after
// construction and safe to call concurrently.
class Oracle {
 public:
  virtual ~Oracle() = default;

  // `log_text` is a rendered viewpoint; `candidate_line` the candidate as
  // the viewer's next line (see render_candidate).
  virtual double score(std::string_view log_text,
                       std::string_view candidate_line) const = 0;

  // One score per candidate, in order. The default loops over score().
  virtual std::vector<double> score_batch(
      std::string_view log_text,
      std::span<const std::string> candidate_lines) const;
};

using OracleHandle = std::shared_ptr<const Oracle>;

// Maps every key to exactly one oracle; lookups never fall back to another
// key.
class OracleRegistry {
 public:
  void add(const OracleKey& key, OracleHandle oracle);

  // Throws ModelMissing.
  OracleHandle lookup(const OracleKey& key) const;
  bool contains(const OracleKey& key) const { return models_.contains(key); }
  std::size_t size() const { return models_.size(); }

  // Registers every "<role>_<n>.bin" baseline model found in `dir`.
  // Returns the number loaded.
  std::size_t load_baseline_dir(const std::filesystem::path& dir);

 private:
  std::map<OracleKey, OracleHandle> models_;
};

}  // namespace deepwolf

#endif  // DEEPWOLF_ORACLE_HPP_
