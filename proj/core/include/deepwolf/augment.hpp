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

#ifndef DEEPWOLF_AUGMENT_HPP_
#define DEEPWOLF_AUGMENT_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deepwolf/action.hpp"
#include "deepwolf/logfmt.hpp"
#include "deepwolf/oracle.hpp"

namespace deepwolf {

// A relabelling of the four coplayers of `viewer`; the viewer keeps its
// own number.
class Permutation {
 public:
  static Permutation identity(PlayerId viewer);

  // images[i] is the new number of player i+1. Throws ConfigError unless
  // it is a bijection on 1..5 that fixes the viewer.
  Permutation(PlayerId viewer, const std::array<int, kNumPlayers>& images);

  PlayerId viewer() const { return viewer_; }
  PlayerId operator()(PlayerId p) const { return PlayerId(images_[p.index()]); }
  Permutation inverse() const;
  // x -> next(this(x)).
  Permutation then(const Permutation& next) const;
  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  PlayerId viewer_;
  std::array<int, kNumPlayers> images_;
};

// The 24 permutations fixing `viewer`, identity first, lexicographic on the
// images of the coplayers.
std::vector<Permutation> all_permutations(PlayerId viewer);

// Rewrites every "#<d>" token (a single digit 1-5 not followed by another
// digit) through `perm`, in one left-to-right pass.
std::string permute_text(std::string_view text, const Permutation& perm);

// Throws ViewerMismatch if perm.viewer() != viewpoint.viewer.
ViewpointLog apply_permutation(const ViewpointLog& viewpoint,
                               const Permutation& perm);

struct TrainingExample {
  OracleKey key;
  std::string text;
  int label = 0;

  friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

int win_label(const GameRecord& record, PlayerId viewer);

// Five full viewpoints x 24 permutations per record, ordered by (record,
// viewer, permutation). Throws UnfinishedRecord.
std::vector<TrainingExample> augment_dataset(const std::vector<GameRecord>& records);

// One decision point of a viewer: the masked log before it and the action
// actually taken.
struct Slice {
  ViewpointLog prefix;
  CandidateAction action;
  std::size_t event_index;
};

// Decision points are the viewer's own Talk, Over, Vote and DivineChoice
// events, plus every Attack when the viewer is the werewolf.
std::vector<Slice> slice_prefixes(const GameRecord& record, PlayerId viewer);

// Like augment_dataset but one example per (slice, permutation), the text
// being render_prefix(prefix, action) under the permutation.
std::vector<TrainingExample> augment_slices(const std::vector<GameRecord>& records);

// Keeps the first min(v, w) villager-side wins and the first min(v, w)
// werewolf-side wins, preserving input order. Unfinished records dropped.
std::vector<GameRecord> balance_sides(const std::vector<GameRecord>& records);

// Export: one JSON object per line with "role", "player", "text", "label".
nlohmann::json example_to_json(const TrainingExample& ex);
TrainingExample example_from_json(const nlohmann::json& j);
std::string export_jsonl(const std::vector<TrainingExample>& examples);
std::vector<TrainingExample> read_jsonl(std::string_view text);

}  // namespace deepwolf

#endif  // DEEPWOLF_AUGMENT_HPP_
