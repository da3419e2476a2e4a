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

#include "deepwolf/server.hpp"

#include <atomic>
#include <cstdio>
#include <deque>
#include <random>
#include <thread>

#include <boost/asio.hpp>

namespace deepwolf {

using nlohmann::json;
namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

json error_json(std::string reason) {
  return {{"type", "error"}, {"reason", std::move(reason)}};
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

SessionManager::SessionManager(PolicyContext policies, SessionOptions options)
    : policies_(std::move(policies)), options_(std::move(options)) {
  std::random_device rd;
  token_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string SessionManager::fresh_token() {
  const std::uint64_t a = splitmix64(token_state_++);
  const std::uint64_t b = splitmix64(token_state_ ^ 0xa5a5a5a5a5a5a5a5ULL);
  token_state_ = b;
  return hex64(a) + hex64(b);
}

SessionManager::Created SessionManager::create(const GameConfig& config,
                                               const std::vector<SeatSpec>& plan) {
  std::lock_guard lock(mu_);
  Created created;
  do {
    created.id = fresh_token().substr(0, 16);
  } while (sessions_.contains(created.id));

  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(created.id, config, plan, policies_,
                                             options_, Clock::now());
  for (PlayerId p : entry->session->human_seats()) {
    const std::string token = fresh_token();
    tokens_.emplace(token, Binding{created.id, p});
    created.tokens.emplace(p, token);
  }
  entry->session->take_pending();  // nobody is connected yet
  sessions_.emplace(created.id, std::move(entry));
  return created;
}

void SessionManager::deliver(Entry& entry, const std::vector<Outbound>& out) {
  for (const auto& o : out) {
    const auto it = entry.connected.find(o.to);
    if (it == entry.connected.end()) continue;
    if (auto c = it->second.lock()) c->send(o.message);
  }
}

void SessionManager::handle_create(const std::shared_ptr<Client>& client,
                                   const json& msg) {
  if (!msg.contains("seats") || !msg["seats"].is_array()) {
    client->send(error_json("create needs seats"));
    return;
  }
  GameConfig config;
  try {
    std::vector<SeatSpec> plan;
    for (const auto& s : msg["seats"]) {
      if (!s.is_string()) throw BadSeatPlan("seat kinds must be strings");
      plan.push_back(parse_seat_spec(s.get<std::string>()));
    }
    if (msg.contains("seed") && msg["seed"].is_number_unsigned()) {
      config.seed = msg["seed"].get<std::uint64_t>();
    } else {
      std::lock_guard lock(mu_);
      config.seed = splitmix64(token_state_ + next_seed_++);
    }
    const Created created = create(config, plan);
    json tokens = json::object();
    for (const auto& [seat, token] : created.tokens) {
      tokens[std::to_string(seat.number())] = token;
    }
    client->send({{"type", "created"}, {"session", created.id}, {"tokens", tokens}});
  } catch (const Error& e) {
    client->send(error_json(e.what()));
  }
}

void SessionManager::handle_join(const std::shared_ptr<Client>& client,
                                 const json& msg) {
  if (!msg.contains("token") || !msg["token"].is_string()) {
    client->send(error_json("join needs a token"));
    return;
  }
  std::shared_ptr<Entry> entry;
  Binding binding;
  {
    std::lock_guard lock(mu_);
    if (bound_.contains(client.get())) {
      client->send(error_json("already joined"));
      return;
    }
    const auto it = tokens_.find(msg["token"].get<std::string>());
    if (it == tokens_.end()) {
      client->send(error_json("unknown token"));
      return;
    }
    binding = it->second;
    entry = sessions_.at(binding.session);
  }
  std::lock_guard session_lock(entry->mu);
  auto& slot = entry->connected[binding.seat];
  if (!slot.expired()) {
    client->send(error_json("token already in use"));
    return;
  }
  slot = client;
  {
    std::lock_guard lock(mu_);
    bound_.emplace(client.get(), binding);
  }
  deliver(*entry, entry->session->on_join(binding.seat));
}

void SessionManager::on_line(const std::shared_ptr<Client>& client,
                             std::string_view line) {
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::parse_error&) {
    client->send(error_json("malformed message"));
    return;
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    client->send(error_json("malformed message"));
    return;
  }
  const std::string type = msg["type"].get<std::string>();
  if (type == "create") return handle_create(client, msg);
  if (type == "join") return handle_join(client, msg);

  std::shared_ptr<Entry> entry;
  Binding binding;
  {
    std::lock_guard lock(mu_);
    const auto it = bound_.find(client.get());
    if (it == bound_.end()) {
      client->send(error_json("join first"));
      return;
    }
    binding = it->second;
    entry = sessions_.at(binding.session);
  }
  std::lock_guard session_lock(entry->mu);
  deliver(*entry, entry->session->handle(binding.seat, msg, Clock::now()));
  if (const auto& err = entry->session->storage_error()) {
    std::fprintf(stderr, "session %s: %s\n", binding.session.c_str(), err->c_str());
  }
}

void SessionManager::on_disconnect(const std::shared_ptr<Client>& client) {
  std::shared_ptr<Entry> entry;
  Binding binding;
  {
    std::lock_guard lock(mu_);
    const auto it = bound_.find(client.get());
    if (it == bound_.end()) return;
    binding = it->second;
    bound_.erase(it);
    entry = sessions_.at(binding.session);
  }
  std::lock_guard session_lock(entry->mu);
  entry->connected.erase(binding.seat);
}

void SessionManager::tick(Clock::time_point now) {
  std::vector<std::shared_ptr<Entry>> live;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, e] : sessions_) live.push_back(e);
  }
  for (const auto& e : live) {
    std::lock_guard session_lock(e->mu);
    if (e->session->finished()) continue;
    deliver(*e, e->session->tick(now));
  }
}

std::size_t SessionManager::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

bool SessionManager::with_session(const std::string& id,
                                  const std::function<void(const Session&)>& fn) const {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    entry = it->second;
  }
  std::lock_guard session_lock(entry->mu);
  fn(*entry->session);
  return true;
}

namespace {

class Connection : public Client,
                   public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, SessionManager& manager)
      : socket_(std::move(socket)),
        strand_(asio::make_strand(socket_.get_executor())),
        buffer_(kMaxLineBytes),
        manager_(manager) {}

  void start() { read(); }

  void send(const json& message) override {
    std::string line = message.dump(-1, ' ', false, json::error_handler_t::replace);
    line += '\n';
    asio::post(strand_, [self = shared_from_this(), line = std::move(line)]() mutable {
      self->queue_.push_back(std::move(line));
      if (self->queue_.size() == 1) self->write();
    });
  }

 private:
  void read() {
    asio::async_read_until(
        socket_, buffer_, '\n',
        asio::bind_executor(strand_, [self = shared_from_this()](
                                         boost::system::error_code ec, std::size_t n) {
          if (ec) {
            self->close();
            return;
          }
          std::string line(asio::buffers_begin(self->buffer_.data()),
                           asio::buffers_begin(self->buffer_.data()) + n - 1);
          self->buffer_.consume(n);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) self->manager_.on_line(self, line);
          self->read();
        }));
  }

  void write() {
    asio::async_write(
        socket_, asio::buffer(queue_.front()),
        asio::bind_executor(strand_, [self = shared_from_this()](
                                         boost::system::error_code ec, std::size_t) {
          if (ec) {
            self->close();
            return;
          }
          self->queue_.pop_front();
          if (!self->queue_.empty()) self->write();
        }));
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    boost::system::error_code ignored;
    socket_.close(ignored);
    manager_.on_disconnect(shared_from_this());
  }

  tcp::socket socket_;
  asio::strand<tcp::socket::executor_type> strand_;
  asio::streambuf buffer_;
  std::deque<std::string> queue_;
  SessionManager& manager_;
  bool closed_ = false;
};

}  // namespace

struct GameServer::Impl {
  Impl(ServerOptions opts, SessionManager& m)
      : options(std::move(opts)),
        manager(m),
        acceptor(io),
        timer(io) {
    const tcp::endpoint ep(asio::ip::make_address(options.bind_address), options.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(tcp::acceptor::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
  }

  void accept() {
    acceptor.async_accept(asio::make_strand(io),
                          [this](boost::system::error_code ec, tcp::socket socket) {
                            if (ec) return;
                            std::make_shared<Connection>(std::move(socket), manager)->start();
                            accept();
                          });
  }

  void schedule_tick() {
    timer.expires_after(options.tick_interval);
    timer.async_wait([this](boost::system::error_code ec) {
      if (ec) return;
      manager.tick(Clock::now());
      schedule_tick();
    });
  }

  ServerOptions options;
  SessionManager& manager;
  asio::io_context io;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
};

GameServer::GameServer(ServerOptions options, SessionManager& manager)
    : impl_(std::make_unique<Impl>(std::move(options), manager)) {}

GameServer::~GameServer() { stop(); }

std::uint16_t GameServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void GameServer::run() {
  impl_->accept();
  impl_->schedule_tick();
  std::vector<std::jthread> extra;
  for (unsigned i = 1; i < impl_->options.threads; ++i) {
    extra.emplace_back([this] { impl_->io.run(); });
  }
  impl_->io.run();
}

void GameServer::stop() {
  asio::post(impl_->io, [this] {
    boost::system::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->timer.cancel();
  });
  impl_->io.stop();
}

}  // namespace deepwolf
