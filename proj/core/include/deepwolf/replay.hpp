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

#ifndef DEEPWOLF_REPLAY_HPP_
#define DEEPWOLF_REPLAY_HPP_

#include <cstddef>
#include <vector>

#include "deepwolf/engine.hpp"
#include "deepwolf/logfmt.hpp"

namespace deepwolf {

struct ReplayOptions {
  // Accept public-only transcripts: divination choices missing before
  // their result are reconstructed, a missing GameEnd line is tolerated and
  // lines after the game ended are counted instead of rejected.
  bool lenient = false;
};

struct ReplayReport {
  GameState state;
  // Event indices (into state.events) that were reconstructed.
  std::vector<std::size_t> synthesized;
  // Record lines after the engine declared the game over.
  std::size_t ignored_trailing = 0;
};

// Feeds the submitted events of `record` through a fresh engine seeded from
// record.config with record.roles and checks that every engine-derived
// event matches the record. Throws InconsistentRecord naming the first
// offending event.
ReplayReport replay(const GameRecord& record, const ReplayOptions& options = {});

}  // namespace deepwolf

#endif  // DEEPWOLF_REPLAY_HPP_
