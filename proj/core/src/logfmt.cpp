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

#include "deepwolf/logfmt.hpp"

#include <charconv>

#include "deepwolf/replay.hpp"

namespace deepwolf {

namespace {

constexpr std::string_view kOverText = "Over.";
constexpr std::string_view kAttackPrefix = "The werewolf erased ";
constexpr std::string_view kVillagerWon = "The villager side won.";
constexpr std::string_view kWerewolfWon = "The werewolf side won.";

bool consume(std::string_view& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.remove_prefix(prefix.size());
  return true;
}

// Reads "#<digits>" from the front of `s`.
class LineReader {
 public:
  LineReader(std::string_view s, std::size_t line) : rest_(s), line_(line) {}

  std::optional<int> raw_player() {
    if (!rest_.starts_with('#')) return std::nullopt;
    std::size_t i = 1;
    while (i < rest_.size() && rest_[i] >= '0' && rest_[i] <= '9') ++i;
    if (i == 1) return std::nullopt;
    int n = 0;
    auto [p, ec] = std::from_chars(rest_.data() + 1, rest_.data() + i, n);
    if (ec != std::errc() || i > 4) n = 1000;
    rest_.remove_prefix(i);
    return n;
  }

  PlayerId player() {
    auto n = raw_player();
    if (!n) throw ParseError(line_, "expected player number");
    if (*n < 1 || *n > kNumPlayers) {
      throw ParseError(line_, "player out of range: #" + std::to_string(*n));
    }
    return PlayerId(*n);
  }

  bool literal(std::string_view lit) { return consume(rest_, lit); }
  void expect(std::string_view lit) {
    if (!literal(lit)) throw ParseError(line_, "unrecognised line");
  }
  void expect_end() {
    if (!rest_.empty()) throw ParseError(line_, "unrecognised line");
  }
  std::string_view rest() const { return rest_; }

 private:
  std::string_view rest_;
  std::size_t line_;
};

EventBody parse_body(std::string_view line, std::size_t lineno) {
  if (line == kVillagerWon) return ev::GameEnd{Side::kVillager};
  if (line == kWerewolfWon) return ev::GameEnd{Side::kWerewolf};

  LineReader r(line, lineno);
  if (r.literal(kAttackPrefix)) {
    PlayerId t = r.player();
    r.expect(".");
    r.expect_end();
    return ev::Attack{t};
  }
  if (!line.starts_with('#')) throw ParseError(lineno, "unrecognised line");

  const PlayerId a = r.player();
  if (r.literal(") ")) {
    std::string_view text = r.rest();
    if (text.empty()) throw ParseError(lineno, "empty talk");
    if (text == kOverText) return ev::Over{a};
    return ev::Talk{a, std::string(text)};
  }
  if (r.literal(" voted for ")) {
    PlayerId b = r.player();
    r.expect(".");
    r.expect_end();
    return ev::Vote{a, b};
  }
  if (r.literal(" has been erased.")) {
    r.expect_end();
    return ev::Expel{a};
  }
  if (r.literal(" chose to divine ")) {
    PlayerId t = r.player();
    r.expect(".");
    r.expect_end();
    return ev::DivineChoice{a, t};
  }
  if (r.literal(" divined ")) {
    PlayerId t = r.player();
    r.expect(" and ");
    PlayerId again = r.player();
    if (again != t) throw ParseError(lineno, "divination target mismatch");
    bool wolf;
    if (r.literal(" is the werewolf.")) {
      wolf = true;
    } else if (r.literal(" is not a werewolf.")) {
      wolf = false;
    } else {
      throw ParseError(lineno, "unrecognised line");
    }
    r.expect_end();
    return ev::DivineResult{a, t, wolf};
  }
  throw ParseError(lineno, "unrecognised line");
}

}  // namespace

GameRecord record_of(const GameState& state) {
  GameRecord r;
  r.config = state.config;
  r.roles = state.roles;
  r.events = state.events;
  r.winner = state.winner;
  return r;
}

std::string render_line(const Event& event) {
  struct Visitor {
    std::string operator()(const ev::Talk& t) const {
      return t.speaker.str() + ") " + t.text;
    }
    std::string operator()(const ev::Over& o) const {
      return o.speaker.str() + ") " + std::string(kOverText);
    }
    std::string operator()(const ev::Vote& v) const {
      return v.voter.str() + " voted for " + v.target.str() + ".";
    }
    std::string operator()(const ev::Expel& x) const {
      return x.target.str() + " has been erased.";
    }
    std::string operator()(const ev::Attack& a) const {
      return std::string(kAttackPrefix) + a.target.str() + ".";
    }
    std::string operator()(const ev::DivineChoice& d) const {
      return d.seer.str() + " chose to divine " + d.target.str() + ".";
    }
    std::string operator()(const ev::DivineResult& d) const {
      return d.seer.str() + " divined " + d.target.str() + " and " +
             d.target.str() +
             (d.is_werewolf ? " is the werewolf." : " is not a werewolf.");
    }
    std::string operator()(const ev::GameEnd& g) const {
      return std::string(g.winner == Side::kVillager ? kVillagerWon
                                                     : kWerewolfWon);
    }
  };
  return std::visit(Visitor{}, event.body);
}

std::string render_full(const GameRecord& record) {
  const ReplayReport report = replay(record);
  if (record.winner != report.state.winner) {
    throw InconsistentRecord(record.events.size(), "winner does not match");
  }
  std::string out;
  for (const Event& e : record.events) {
    out += render_line(e);
    out += '\n';
  }
  return out;
}

std::vector<Event> parse(std::string_view text) {
  std::vector<Event> events;
  int day = 0;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    EventBody body = parse_body(line, lineno);
    const bool day0_choice =
        day == 0 && std::holds_alternative<ev::DivineChoice>(body);
    if (day == 0 && !day0_choice) day = 1;
    const bool attack = std::holds_alternative<ev::Attack>(body);
    events.push_back(Event{day, std::move(body)});
    if (attack) ++day;
  }
  return events;
}

std::string ViewpointLog::text() const {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

bool visible_to(const Event& event, PlayerId viewer) {
  if (const auto* d = event.as<ev::DivineChoice>()) return d->seer == viewer;
  if (const auto* d = event.as<ev::DivineResult>()) return d->seer == viewer;
  return true;
}

std::vector<std::string> viewpoint_header(PlayerId viewer, Role role) {
  return {"You are " + viewer.str() + ".",
          "Your role is " + std::string(role_name(role)) + "."};
}

ViewpointLog project(const GameRecord& record, PlayerId viewer,
                     std::optional<std::size_t> upto) {
  const Role role = record.roles[viewer.index()];
  ViewpointLog log{viewer, role, viewpoint_header(viewer, role), upto};
  const std::size_t end =
      upto ? std::min(*upto, record.events.size()) : record.events.size();
  for (std::size_t i = 0; i < end; ++i) {
    if (visible_to(record.events[i], viewer)) {
      log.lines.push_back(render_line(record.events[i]));
    }
  }
  return log;
}

std::string render_candidate(PlayerId viewer, const CandidateAction& c) {
  struct Visitor {
    PlayerId me;
    Event operator()(const act::Utterance& u) const {
      return {0, ev::Talk{me, u.text}};
    }
    Event operator()(const act::OverSignal&) const { return {0, ev::Over{me}}; }
    Event operator()(const act::VoteTarget& v) const {
      return {0, ev::Vote{me, v.target}};
    }
    Event operator()(const act::DivineTarget& d) const {
      return {0, ev::DivineChoice{me, d.target}};
    }
    Event operator()(const act::AttackTarget& a) const {
      return {0, ev::Attack{a.target}};
    }
  };
  return render_line(std::visit(Visitor{viewer}, c));
}

std::string oracle_input(std::string_view log_text,
                         std::string_view candidate_line) {
  std::string out;
  out.reserve(log_text.size() + candidate_line.size() + 1);
  out += log_text;
  out += candidate_line;
  out += '\n';
  return out;
}

std::string render_prefix(const ViewpointLog& viewpoint,
                          const CandidateAction& candidate) {
  return oracle_input(viewpoint.text(),
                      render_candidate(viewpoint.viewer, candidate));
}

}  // namespace deepwolf
