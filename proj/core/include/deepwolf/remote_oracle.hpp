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

#ifndef DEEPWOLF_REMOTE_ORACLE_HPP_
#define DEEPWOLF_REMOTE_ORACLE_HPP_

#include <chrono>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deepwolf/oracle.hpp"

namespace deepwolf {

// Client side of the model-serving protocol:
//   POST /v1/score        {"role", "player", "log", "candidate"}
//                         -> {"win_probability": p}
//   POST /v1/score_batch  {"items": [<score request>...]}
//                         -> {"probabilities": [p...]}

inline constexpr std::chrono::milliseconds kRemoteDeadline{10'000};

struct Endpoint {
  std::string host;
  int port = 0;

  // Accepts "host:port" or "http://host:port".
  static Endpoint parse(std::string_view spec);
  std::string str() const;
};

struct RemoteOptions {
  std::chrono::milliseconds deadline = kRemoteDeadline;
  // Concurrent requests allowed per RemoteOracle.
  std::ptrdiff_t max_in_flight = 4;
};

nlohmann::json score_request(const OracleKey& key, std::string_view log_text,
                             std::string_view candidate_line);

// Throw ProtocolError on a missing, mistyped or out-of-range probability.
Score parse_score_response(std::string_view body);
std::vector<double> parse_batch_response(std::string_view body,
                                         std::size_t expected);

// Throw OracleTimeout, ProtocolError or Unreachable.
Score remote_score(const Endpoint& endpoint, const OracleKey& key,
                   std::string_view log_text, std::string_view candidate_line,
                   const RemoteOptions& options = {});
std::vector<double> remote_score_batch(
    const Endpoint& endpoint, const OracleKey& key, std::string_view log_text,
    std::span<const std::string> candidate_lines,
    const RemoteOptions& options = {});

class RemoteOracle : public Oracle {
 public:
  RemoteOracle(Endpoint endpoint, OracleKey key, RemoteOptions options = {});

  double score(std::string_view log_text,
               std::string_view candidate_line) const override;
  std::vector<double> score_batch(
      std::string_view log_text,
      std::span<const std::string> candidate_lines) const override;

 private:
  Endpoint endpoint_;
  OracleKey key_;
  RemoteOptions options_;
  std::unique_ptr<std::counting_semaphore<1024>> in_flight_;
};

// Registers a RemoteOracle for all 20 keys.
void register_remote(OracleRegistry& registry, const Endpoint& endpoint,
                     const RemoteOptions& options = {});

}  // namespace deepwolf

#endif  // DEEPWOLF_REMOTE_ORACLE_HPP_
