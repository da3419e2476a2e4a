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

#ifndef DEEPWOLF_MANIFEST_HPP_
#define DEEPWOLF_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deepwolf/logfmt.hpp"

namespace deepwolf {

// Structured sidecar for one game:
//   {"seed": <u64>, "roles": {"1": "seer", ...}, "roles_explicit": bool,
//    "winner": "villager" | "werewolf" | null,
//    "events": [{"day": 1, "type": "vote", "voter": 2, "target": 4}, ...]}
nlohmann::json event_to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const GameRecord& record);
// Throws ParseError (line 0) on a malformed document.
GameRecord record_from_json(const nlohmann::json& j);

// Writes <dir>/<id>.log then <dir>/<id>.json, each through a temporary file
// and rename, so a manifest on disk always has its log next to it. Throws
// StorageError.
void write_record(const std::filesystem::path& dir, const std::string& id,
                  const GameRecord& record);

GameRecord load_manifest(const std::filesystem::path& path);

// Every *.json manifest in `dir`, ordered by file name.
std::vector<GameRecord> load_records_dir(const std::filesystem::path& dir);

// Atomic whole-file write via <path>.tmp + rename. Throws StorageError.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace deepwolf

#endif  // DEEPWOLF_MANIFEST_HPP_
