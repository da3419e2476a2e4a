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

#include "deepwolf/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace deepwolf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& why) {
  throw ParseError(0, "manifest: " + why);
}

PlayerId player_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    bad(std::string("missing integer field '") + key + "'");
  }
  try {
    return PlayerId(j[key].get<int>());
  } catch (const InvalidPlayer& e) {
    bad(e.what());
  }
}

Side side_field(const json& j) {
  if (!j.is_string()) bad("side must be a string");
  auto s = parse_side(j.get<std::string>());
  if (!s) bad("unknown side '" + j.get<std::string>() + "'");
  return *s;
}

}  // namespace

json event_to_json(const Event& e) {
  struct Visitor {
    json operator()(const ev::Talk& t) const {
      return {{"type", "talk"}, {"speaker", t.speaker.number()}, {"text", t.text}};
    }
    json operator()(const ev::Over& o) const {
      return {{"type", "over"}, {"speaker", o.speaker.number()}};
    }
    json operator()(const ev::Vote& v) const {
      return {{"type", "vote"},
              {"voter", v.voter.number()},
              {"target", v.target.number()}};
    }
    json operator()(const ev::Expel& x) const {
      return {{"type", "expel"}, {"target", x.target.number()}};
    }
    json operator()(const ev::Attack& a) const {
      return {{"type", "attack"}, {"target", a.target.number()}};
    }
    json operator()(const ev::DivineChoice& d) const {
      return {{"type", "divine_choice"},
              {"seer", d.seer.number()},
              {"target", d.target.number()}};
    }
    json operator()(const ev::DivineResult& d) const {
      return {{"type", "divine_result"},
              {"seer", d.seer.number()},
              {"target", d.target.number()},
              {"is_werewolf", d.is_werewolf}};
    }
    json operator()(const ev::GameEnd& g) const {
      return {{"type", "game_end"}, {"winner", side_name(g.winner)}};
    }
  };
  json j = std::visit(Visitor{}, e.body);
  j["day"] = e.day;
  return j;
}

Event event_from_json(const json& j) {
  if (!j.is_object()) bad("event must be an object");
  if (!j.contains("type") || !j["type"].is_string()) bad("event without type");
  if (!j.contains("day") || !j["day"].is_number_integer()) bad("event without day");
  const int day = j["day"].get<int>();
  const std::string type = j["type"].get<std::string>();
  if (type == "talk") {
    if (!j.contains("text") || !j["text"].is_string()) bad("talk without text");
    return {day, ev::Talk{player_field(j, "speaker"), j["text"].get<std::string>()}};
  }
  if (type == "over") return {day, ev::Over{player_field(j, "speaker")}};
  if (type == "vote") {
    return {day, ev::Vote{player_field(j, "voter"), player_field(j, "target")}};
  }
  if (type == "expel") return {day, ev::Expel{player_field(j, "target")}};
  if (type == "attack") return {day, ev::Attack{player_field(j, "target")}};
  if (type == "divine_choice") {
    return {day, ev::DivineChoice{player_field(j, "seer"),
                                  player_field(j, "target")}};
  }
  if (type == "divine_result") {
    if (!j.contains("is_werewolf") || !j["is_werewolf"].is_boolean()) {
      bad("divine_result without is_werewolf");
    }
    return {day, ev::DivineResult{player_field(j, "seer"),
                                  player_field(j, "target"),
                                  j["is_werewolf"].get<bool>()}};
  }
  if (type == "game_end") {
    if (!j.contains("winner")) bad("game_end without winner");
    return {day, ev::GameEnd{side_field(j["winner"])}};
  }
  bad("unknown event type '" + type + "'");
}

json record_to_json(const GameRecord& r) {
  json roles = json::object();
  for (PlayerId p : all_players()) {
    roles[std::to_string(p.number())] = role_name(r.roles[p.index()]);
  }
  json events = json::array();
  for (const Event& e : r.events) events.push_back(event_to_json(e));
  return {
      {"seed", r.config.seed},
      {"roles", roles},
      {"roles_explicit", r.config.role_assignment.has_value()},
      {"winner", r.winner ? json(side_name(*r.winner)) : json(nullptr)},
      {"events", events},
  };
}

GameRecord record_from_json(const json& j) {
  if (!j.is_object()) bad("document must be an object");
  GameRecord r;
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
    if (!(j.contains("seed") && j["seed"].is_number_integer() &&
          j["seed"].get<std::int64_t>() >= 0)) {
      bad("missing non-negative integer 'seed'");
    }
  }
  r.config.seed = j["seed"].get<std::uint64_t>();

  if (!j.contains("roles") || !j["roles"].is_object()) bad("missing 'roles'");
  for (PlayerId p : all_players()) {
    const std::string key = std::to_string(p.number());
    if (!j["roles"].contains(key) || !j["roles"][key].is_string()) {
      bad("roles lacks player " + key);
    }
    auto role = parse_role(j["roles"][key].get<std::string>());
    if (!role) bad("unknown role for player " + key);
    r.roles[p.index()] = *role;
  }
  if (!is_valid_role_multiset(r.roles)) bad("roles are not a legal deal");
  if (j.value("roles_explicit", true)) r.config.role_assignment = r.roles;

  if (j.contains("winner") && !j["winner"].is_null()) {
    r.winner = side_field(j["winner"]);
  }
  if (!j.contains("events") || !j["events"].is_array()) bad("missing 'events'");
  for (const json& e : j["events"]) r.events.push_back(event_from_json(e));
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot create " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw StorageError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw StorageError("cannot rename into " + path.string());
  }
}

void write_record(const fs::path& dir, const std::string& id,
                  const GameRecord& record) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StorageError("cannot create " + dir.string());
  std::string log;
  for (const Event& e : record.events) {
    log += render_line(e);
    log += '\n';
  }
  write_file_atomic(dir / (id + ".log"), log);
  write_file_atomic(dir / (id + ".json"), record_to_json(record).dump(2) + "\n");
}

GameRecord load_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  return record_from_json(j);
}

std::vector<GameRecord> load_records_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw StorageError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<GameRecord> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_manifest(f));
  return out;
}

}  // namespace deepwolf
