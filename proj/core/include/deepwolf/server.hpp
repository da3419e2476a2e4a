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

#ifndef DEEPWOLF_SERVER_HPP_
#define DEEPWOLF_SERVER_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deepwolf/session.hpp"

namespace deepwolf {

// One end of a client connection, as seen by the session manager.
class Client {
 public:
  virtual ~Client() = default;
  // Queues one message; must not block.
  virtual void send(const nlohmann::json& message) = 0;
};

// Lobby plus routing. Wire messages, one JSON object per line:
//   create {seats: ["human" | <policy>] x5, seed?}
//       -> created {session, tokens: {"<seat>": token}}
//   join {token}           -> state (and game_end when already over)
//   talk {text}, over {}, vote {target}, night_action {kind, target}
//   server -> client: state, game_end, error {reason}
// A token seats at most one live connection; once that connection closes
// the same token resumes the seat.
class SessionManager {
 public:
  SessionManager(PolicyContext policies, SessionOptions options);

  struct Created {
    std::string id;
    std::map<PlayerId, std::string> tokens;
  };
  // Throws BadSeatPlan / PolicyLoadError.
  Created create(const GameConfig& config, const std::vector<SeatSpec>& plan);

  void on_line(const std::shared_ptr<Client>& client, std::string_view line);
  void on_disconnect(const std::shared_ptr<Client>& client);
  void tick(Clock::time_point now);

  std::size_t session_count() const;
  // Runs `fn` on the session under its lock. Returns false if unknown.
  bool with_session(const std::string& id,
                    const std::function<void(const Session&)>& fn) const;

 private:
  struct Entry {
    std::unique_ptr<Session> session;
    mutable std::mutex mu;
    std::map<PlayerId, std::weak_ptr<Client>> connected;
  };
  struct Binding {
    std::string session;
    PlayerId seat{1};
  };

  void deliver(Entry& entry, const std::vector<Outbound>& out);
  void handle_create(const std::shared_ptr<Client>& client, const nlohmann::json& msg);
  void handle_join(const std::shared_ptr<Client>& client, const nlohmann::json& msg);
  std::string fresh_token();

  PolicyContext policies_;
  SessionOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::map<std::string, Binding> tokens_;
  std::map<const Client*, Binding> bound_;
  std::uint64_t token_state_;
  std::uint64_t next_seed_ = 0;
};

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  unsigned threads = 1;
  std::chrono::milliseconds tick_interval{250};
};

// Newline-delimited JSON over TCP.
class GameServer {
 public:
  GameServer(ServerOptions options, SessionManager& manager);
  ~GameServer();
  GameServer(const GameServer&) = delete;
  GameServer& operator=(const GameServer&) = delete;

  // The bound port, valid after construction.
  std::uint16_t port() const;
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace deepwolf

#endif  // DEEPWOLF_SERVER_HPP_
