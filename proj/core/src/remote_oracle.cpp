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

#include "deepwolf/remote_oracle.hpp"

#include <charconv>
#include <cmath>

#include <httplib.h>

namespace deepwolf {

using nlohmann::json;

namespace {

double probability_of(const json& v) {
  if (!v.is_number()) throw ProtocolError("win_probability is not a number");
  return Score(v.get<double>()).value();
}

json post(const Endpoint& ep, const char* path, const json& body,
          const RemoteOptions& opt) {
  httplib::Client cli(ep.host, ep.port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(opt.deadline);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      opt.deadline - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());

  const auto start = std::chrono::steady_clock::now();
  auto res = cli.Post(
      path, body.dump(-1, ' ', false, json::error_handler_t::replace),
      "application/json");
  const auto elapsed = std::chrono::steady_clock::now() - start;
  if (!res) {
    const auto err = res.error();
    const bool slow = elapsed >= opt.deadline * 9 / 10;
    if (err == httplib::Error::ConnectionTimeout ||
        ((err == httplib::Error::Read || err == httplib::Error::Write) && slow)) {
      throw OracleTimeout("no response from " + ep.str() + " within " +
                          std::to_string(opt.deadline.count()) + " ms");
    }
    throw Unreachable(ep.str() + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw ProtocolError(ep.str() + path + " returned HTTP " +
                        std::to_string(res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed response body: ") + e.what());
  }
}

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& s_;
};

}  // namespace

Endpoint Endpoint::parse(std::string_view spec) {
  if (spec.starts_with("http://")) spec.remove_prefix(7);
  while (spec.ends_with('/')) spec.remove_suffix(1);
  const auto colon = spec.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ConfigError("endpoint must be host:port");
  }
  Endpoint ep;
  ep.host = std::string(spec.substr(0, colon));
  const auto port = spec.substr(colon + 1);
  auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), ep.port);
  if (ec != std::errc() || p != port.data() + port.size() || ep.port <= 0 ||
      ep.port > 65535) {
    throw ConfigError("bad endpoint port");
  }
  return ep;
}

std::string Endpoint::str() const { return host + ":" + std::to_string(port); }

json score_request(const OracleKey& key, std::string_view log_text,
                   std::string_view candidate_line) {
  return {{"role", role_name(key.role)},
          {"player", key.player.number()},
          {"log", log_text},
          {"candidate", candidate_line}};
}

Score parse_score_response(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed response body: ") + e.what());
  }
  if (!j.is_object() || !j.contains("win_probability")) {
    throw ProtocolError("response lacks win_probability");
  }
  return Score(probability_of(j["win_probability"]));
}

std::vector<double> parse_batch_response(std::string_view body,
                                         std::size_t expected) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed response body: ") + e.what());
  }
  if (!j.is_object() || !j.contains("probabilities") ||
      !j["probabilities"].is_array()) {
    throw ProtocolError("response lacks probabilities");
  }
  if (j["probabilities"].size() != expected) {
    throw ProtocolError("expected " + std::to_string(expected) +
                        " probabilities, got " +
                        std::to_string(j["probabilities"].size()));
  }
  std::vector<double> out;
  for (const auto& v : j["probabilities"]) out.push_back(probability_of(v));
  return out;
}

Score remote_score(const Endpoint& endpoint, const OracleKey& key,
                   std::string_view log_text, std::string_view candidate_line,
                   const RemoteOptions& options) {
  const json res = post(endpoint, "/v1/score",
                        score_request(key, log_text, candidate_line), options);
  return parse_score_response(res.dump());
}

std::vector<double> remote_score_batch(
    const Endpoint& endpoint, const OracleKey& key, std::string_view log_text,
    std::span<const std::string> candidate_lines,
    const RemoteOptions& options) {
  json items = json::array();
  for (const auto& c : candidate_lines) {
    items.push_back(score_request(key, log_text, c));
  }
  const json res =
      post(endpoint, "/v1/score_batch", json{{"items", items}}, options);
  return parse_batch_response(res.dump(), candidate_lines.size());
}

RemoteOracle::RemoteOracle(Endpoint endpoint, OracleKey key,
                           RemoteOptions options)
    : endpoint_(std::move(endpoint)),
      key_(key),
      options_(options),
      in_flight_(std::make_unique<std::counting_semaphore<1024>>(
          std::clamp<std::ptrdiff_t>(options.max_in_flight, 1, 1024))) {}

double RemoteOracle::score(std::string_view log_text,
                           std::string_view candidate_line) const {
  SlotGuard slot(*in_flight_);
  return remote_score(endpoint_, key_, log_text, candidate_line, options_).value();
}

std::vector<double> RemoteOracle::score_batch(
    std::string_view log_text,
    std::span<const std::string> candidate_lines) const {
  SlotGuard slot(*in_flight_);
  return remote_score_batch(endpoint_, key_, log_text, candidate_lines, options_);
}

void register_remote(OracleRegistry& registry, const Endpoint& endpoint,
                     const RemoteOptions& options) {
  for (const OracleKey& key : all_oracle_keys()) {
    registry.add(key, std::make_shared<RemoteOracle>(endpoint, key, options));
  }
}

}  // namespace deepwolf
