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

#include "deepwolf/augment.hpp"

#include <algorithm>
#include <numeric>

namespace deepwolf {

using nlohmann::json;

Permutation Permutation::identity(PlayerId viewer) {
  return Permutation(viewer, {1, 2, 3, 4, 5});
}

Permutation::Permutation(PlayerId viewer,
                         const std::array<int, kNumPlayers>& images)
    : viewer_(viewer), images_(images) {
  std::array<bool, kNumPlayers> seen{};
  for (int img : images_) {
    if (img < 1 || img > kNumPlayers || seen[img - 1]) {
      throw ConfigError("permutation is not a bijection on 1..5");
    }
    seen[img - 1] = true;
  }
  if (images_[viewer.index()] != viewer.number()) {
    throw ConfigError("permutation moves the viewer");
  }
}

Permutation Permutation::inverse() const {
  std::array<int, kNumPlayers> inv{};
  for (std::size_t i = 0; i < images_.size(); ++i) {
    inv[images_[i] - 1] = static_cast<int>(i) + 1;
  }
  return Permutation(viewer_, inv);
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.viewer_ != viewer_) throw ViewerMismatch("composing across viewers");
  std::array<int, kNumPlayers> out{};
  for (std::size_t i = 0; i < images_.size(); ++i) {
    out[i] = next.images_[images_[i] - 1];
  }
  return Permutation(viewer_, out);
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != static_cast<int>(i) + 1) return false;
  }
  return true;
}

std::vector<Permutation> all_permutations(PlayerId viewer) {
  std::array<int, kNumPlayers - 1> others{};
  std::size_t k = 0;
  for (int n = 1; n <= kNumPlayers; ++n) {
    if (n != viewer.number()) others[k++] = n;
  }
  const auto slots = others;  // positions that get relabelled
  std::vector<Permutation> out;
  do {
    std::array<int, kNumPlayers> images{};
    images[viewer.index()] = viewer.number();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      images[slots[i] - 1] = others[i];
    }
    out.emplace_back(viewer, images);
  } while (std::next_permutation(others.begin(), others.end()));
  return out;
}

std::string permute_text(std::string_view text, const Permutation& perm) {
  std::string out(text);
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i] != '#') continue;
    const char d = out[i + 1];
    if (d < '1' || d > '5') continue;
    if (i + 2 < out.size() && out[i + 2] >= '0' && out[i + 2] <= '9') continue;
    out[i + 1] = static_cast<char>('0' + perm(PlayerId(d - '0')).number());
    ++i;
  }
  return out;
}

ViewpointLog apply_permutation(const ViewpointLog& viewpoint,
                               const Permutation& perm) {
  if (perm.viewer() != viewpoint.viewer) {
    throw ViewerMismatch("permutation viewer " + perm.viewer().str() +
                         " does not match viewpoint " + viewpoint.viewer.str());
  }
  ViewpointLog out = viewpoint;
  for (auto& line : out.lines) line = permute_text(line, perm);
  return out;
}

int win_label(const GameRecord& record, PlayerId viewer) {
  if (!record.winner) throw UnfinishedRecord("record has no winner");
  return side_of(record.roles[viewer.index()]) == *record.winner ? 1 : 0;
}

std::vector<TrainingExample> augment_dataset(
    const std::vector<GameRecord>& records) {
  std::vector<TrainingExample> out;
  out.reserve(records.size() * kNumPlayers * 24);
  for (const GameRecord& record : records) {
    if (!record.winner) throw UnfinishedRecord("record has no winner");
    for (PlayerId viewer : all_players()) {
      const ViewpointLog view = project(record, viewer);
      const OracleKey key{view.viewer_role, viewer};
      const int label = win_label(record, viewer);
      for (const Permutation& perm : all_permutations(viewer)) {
        out.push_back({key, apply_permutation(view, perm).text(), label});
      }
    }
  }
  return out;
}

std::vector<Slice> slice_prefixes(const GameRecord& record, PlayerId viewer) {
  const bool wolf = record.roles[viewer.index()] == Role::kWerewolf;
  std::vector<Slice> out;
  for (std::size_t i = 0; i < record.events.size(); ++i) {
    const Event& e = record.events[i];
    std::optional<CandidateAction> action;
    if (const auto* t = e.as<ev::Talk>(); t && t->speaker == viewer) {
      action = act::Utterance{t->text};
    } else if (const auto* o = e.as<ev::Over>(); o && o->speaker == viewer) {
      action = act::OverSignal{};
    } else if (const auto* v = e.as<ev::Vote>(); v && v->voter == viewer) {
      action = act::VoteTarget{v->target};
    } else if (const auto* d = e.as<ev::DivineChoice>(); d && d->seer == viewer) {
      action = act::DivineTarget{d->target};
    } else if (const auto* a = e.as<ev::Attack>(); a && wolf) {
      action = act::AttackTarget{a->target};
    }
    if (action) out.push_back({project(record, viewer, i), *action, i});
  }
  return out;
}

std::vector<TrainingExample> augment_slices(
    const std::vector<GameRecord>& records) {
  std::vector<TrainingExample> out;
  for (const GameRecord& record : records) {
    if (!record.winner) throw UnfinishedRecord("record has no winner");
    for (PlayerId viewer : all_players()) {
      const OracleKey key{record.roles[viewer.index()], viewer};
      const int label = win_label(record, viewer);
      const auto perms = all_permutations(viewer);
      for (const Slice& slice : slice_prefixes(record, viewer)) {
        const std::string text = render_prefix(slice.prefix, slice.action);
        for (const Permutation& perm : perms) {
          out.push_back({key, permute_text(text, perm), label});
        }
      }
    }
  }
  return out;
}

std::vector<GameRecord> balance_sides(const std::vector<GameRecord>& records) {
  std::size_t villager = 0;
  std::size_t werewolf = 0;
  for (const auto& r : records) {
    if (r.winner == Side::kVillager) ++villager;
    if (r.winner == Side::kWerewolf) ++werewolf;
  }
  const std::size_t keep = std::min(villager, werewolf);
  std::size_t took_v = 0;
  std::size_t took_w = 0;
  std::vector<GameRecord> out;
  for (const auto& r : records) {
    if (r.winner == Side::kVillager && took_v < keep) {
      ++took_v;
      out.push_back(r);
    } else if (r.winner == Side::kWerewolf && took_w < keep) {
      ++took_w;
      out.push_back(r);
    }
  }
  return out;
}

json example_to_json(const TrainingExample& ex) {
  return {{"role", role_name(ex.key.role)},
          {"player", ex.key.player.number()},
          {"text", ex.text},
          {"label", ex.label}};
}

TrainingExample example_from_json(const json& j) {
  auto fail = [](const std::string& why) -> TrainingExample {
    throw ParseError(0, "example: " + why);
  };
  if (!j.is_object()) return fail("not an object");
  if (!j.contains("role") || !j["role"].is_string()) return fail("missing role");
  auto role = parse_role(j["role"].get<std::string>());
  if (!role) return fail("unknown role");
  if (!j.contains("player") || !j["player"].is_number_integer()) {
    return fail("missing player");
  }
  if (!j.contains("text") || !j["text"].is_string()) return fail("missing text");
  if (!j.contains("label") || !j["label"].is_number_integer()) {
    return fail("missing label");
  }
  const int label = j["label"].get<int>();
  if (label != 0 && label != 1) return fail("label must be 0 or 1");
  try {
    return {OracleKey{*role, PlayerId(j["player"].get<int>())},
            j["text"].get<std::string>(), label};
  } catch (const InvalidPlayer& e) {
    return fail(e.what());
  }
}

std::string export_jsonl(const std::vector<TrainingExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += example_to_json(ex).dump();
    out += '\n';
  }
  return out;
}

std::vector<TrainingExample> read_jsonl(std::string_view text) {
  std::vector<TrainingExample> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;
    try {
      out.push_back(example_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, e.what());
    } catch (const ParseError& e) {
      throw ParseError(lineno, e.reason());
    }
  }
  return out;
}

}  // namespace deepwolf
