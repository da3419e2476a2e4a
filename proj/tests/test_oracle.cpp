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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>

#include "deepwolf/baseline.hpp"
#include "deepwolf/remote_oracle.hpp"
#include "support.hpp"

using namespace deepwolf;
namespace t = deepwolf::testing;
using nlohmann::json;

namespace {

PlayerId P(int n) { return PlayerId(n); }

const OracleKey kKey{Role::kWerewolf, PlayerId(3)};

double count_of(const SparseFeatures& f, std::uint32_t bucket) {
  for (const auto& [b, v] : f) {
    if (b == bucket) return v;
  }
  return 0.0;
}

std::vector<TrainingExample> sigil_corpus(std::size_t n, std::uint64_t seed) {
  const std::vector<std::string> filler = {"#1) hello", "#2 voted for #4.", "i am a villager",
                                           "the werewolf erased #5.", "over.", "maybe #3"};
  Rng rng = make_rng(seed);
  std::vector<TrainingExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    std::string text;
    for (int w = 0; w < 4; ++w) text += filler[uniform_index(rng, filler.size())] + " ";
    if (label) text += "sigil_win";
    out.push_back({kKey, text, label});
  }
  return out;
}

// Fake model server for the remote protocol.
class FakeServer {
 public:
  FakeServer() {
    server_.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mu_);
        last_body_ = req.body;
      }
      if (delay_.count()) std::this_thread::sleep_for(delay_);
      res.set_content(reply_, "application/json");
    });
    server_.Post("/v1/score_batch", [this](const httplib::Request& req, httplib::Response& res) {
      const auto j = json::parse(req.body);
      json probs = json::array();
      for (std::size_t i = 0; i < j["items"].size(); ++i) probs.push_back(i / 100.0);
      res.set_content(json{{"probabilities", probs}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  Endpoint endpoint() const { return Endpoint{"127.0.0.1", port_}; }
  void reply(std::string body) { reply_ = std::move(body); }
  void delay(std::chrono::milliseconds d) { delay_ = d; }
  std::string last_body() {
    std::lock_guard lock(mu_);
    return last_body_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::string reply_ = R"({"win_probability": 0.5})";
  std::chrono::milliseconds delay_{0};
  std::mutex mu_;
  std::string last_body_;
};

}  // namespace

TEST_CASE("oracle keys") {
  const auto keys = all_oracle_keys();
  CHECK(keys.size() == 20);
  CHECK(std::set<OracleKey>(keys.begin(), keys.end()).size() == 20);
  CHECK(kKey.str() == "werewolf_3");
  CHECK_THROWS_AS((OracleKey{Role::kVillager, PlayerId(6)}), InvalidPlayer);
}

TEST_CASE("score range") {
  CHECK(Score(0.42).value() == doctest::Approx(0.42));
  CHECK_THROWS_AS(Score(1.7), ProtocolError);
  CHECK_THROWS_AS(Score(-0.01), ProtocolError);
  CHECK_THROWS_AS(Score(std::nan("")), ProtocolError);
}

TEST_CASE("featurize") {
  const FeatureSpec spec;
  CHECK(featurize("", spec).empty());
  const auto f = featurize("over. over.", spec);
  CHECK(count_of(f, feature_bucket("over.", spec.dim)) == 2.0);
  CHECK(count_of(f, feature_bucket("over. over.", spec.dim)) == 1.0);
  CHECK(featurize("Over.  OVER.", spec) == f);

  // Reordering words keeps unigram mass.
  const FeatureSpec uni{spec.dim, {1}};
  CHECK(featurize("a b c d", uni) == featurize("d c b a", uni));
  CHECK(featurize("a b c d", spec) != featurize("d c b a", spec));
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1].first < f[i].first);
}

TEST_CASE("truncate_front keeps the tail") {
  CHECK(truncate_front("abcdef", 3) == "def");
  CHECK(truncate_front("ab", 3) == "ab");
}

TEST_CASE("analytic gradient matches central differences") {
  CHECK(t::gradient_check_worst(100, 2024) <= 1e-4);
}

TEST_CASE("sigil_win training separates the classes") {
  const auto corpus = sigil_corpus(400, 1);
  TrainOptions opt;
  opt.epochs = 30;
  opt.learning_rate = 0.5;
  const TrainResult res = train_baseline(corpus, kKey, opt);
  CHECK(res.final_loss <= res.initial_loss);
  CHECK(score(res.model, "#1) hello sigil_win").value() > 0.9);
  CHECK(score(res.model, "#1) hello maybe #3").value() < 0.1);

  // Closed form: a text holding one word scores sigmoid(w[bucket] + b).
  const double w = res.model.weights[feature_bucket("sigil_win", res.model.dim)];
  CHECK(score(res.model, "sigil_win").value() ==
        doctest::Approx(1.0 / (1.0 + std::exp(-(w + res.model.bias)))).epsilon(1e-12));
}

TEST_CASE("bias-only training follows the labels") {
  std::vector<TrainingExample> ones(50, TrainingExample{kKey, "", 1});
  TrainOptions opt;
  opt.epochs = 1;
  const auto res = train_baseline(ones, kKey, opt);
  CHECK(score(res.model, "").value() > 0.5);
  CHECK(res.model.bias > 0);

  std::vector<TrainingExample> balanced;
  for (int i = 0; i < 100; ++i) balanced.push_back({kKey, "", i % 2});
  const auto bal = train_baseline(balanced, kKey, TrainOptions{});
  CHECK(std::abs(score(bal.model, "").value() - 0.5) <= 0.05);
}

TEST_CASE("zero model scores one half") {
  BaselineModel m;
  m.key = kKey;
  m.dim = 4096;
  m.ngram_orders = {1, 2};
  m.weights.assign(m.dim, 0.0);
  CHECK(score(m, "anything at all").value() == 0.5);
}

TEST_CASE("calibration in the large") {
  const auto corpus = t::calibration_corpus(kKey, 1000, 0.3, 77);
  double positives = 0;
  for (const auto& ex : corpus) positives += ex.label;
  const auto res = train_baseline(corpus, kKey, TrainOptions{});
  double mean = 0;
  for (const auto& ex : corpus) mean += score(res.model, ex.text).value();
  mean /= corpus.size();
  CHECK(std::abs(mean - positives / corpus.size()) <= 0.05);
}

TEST_CASE("training is deterministic to the byte") {
  const auto corpus = sigil_corpus(200, 3);
  TrainOptions opt;
  opt.seed = 9;
  const auto a = serialize_model(train_baseline(corpus, kKey, opt).model);
  const auto b = serialize_model(train_baseline(corpus, kKey, opt).model);
  CHECK(a == b);
  CHECK(a.substr(0, 4) == "DWLR");
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train_baseline({}, kKey, TrainOptions{}), EmptyDataset);
  std::vector<TrainingExample> wrong{{OracleKey{Role::kSeer, P(1)}, "x", 1}};
  CHECK_THROWS_AS(train_baseline(wrong, kKey, TrainOptions{}), KeyMismatch);
}

TEST_CASE("model persistence") {
  t::TempDir dir;
  const auto model = train_baseline(sigil_corpus(64, 5), kKey, TrainOptions{}).model;
  save_model(model, dir.path() / "werewolf_3.bin");
  CHECK(load_model(dir.path() / "werewolf_3.bin") == model);

  std::string bytes = serialize_model(model);
  CHECK_THROWS_AS(deserialize_model(bytes.substr(0, 20)), ModelFormatError);
  bytes[0] = 'X';
  CHECK_THROWS_AS(deserialize_model(bytes), ModelFormatError);

  BaselineModel small = model;
  small.dim = 64;
  small.weights.resize(64);
  CHECK_THROWS_AS(small.validate(), ModelFormatError);
}

TEST_CASE("registry") {
  t::TempDir dir;
  const auto model = train_baseline(sigil_corpus(64, 5), kKey, TrainOptions{}).model;
  save_model(model, dir.path() / "werewolf_3.bin");
  OracleRegistry reg;
  CHECK(reg.load_baseline_dir(dir.path()) == 1);
  const auto a = reg.lookup(kKey);
  CHECK(a == reg.lookup(kKey));
  const auto* baseline = dynamic_cast<const BaselineOracle*>(a.get());
  REQUIRE(baseline);
  CHECK(baseline->model().key == kKey);
  CHECK_THROWS_AS(reg.lookup(OracleKey{Role::kWerewolf, P(4)}), ModelMissing);

  // A file whose content belongs to another key is refused.
  std::filesystem::rename(dir.path() / "werewolf_3.bin", dir.path() / "seer_1.bin");
  OracleRegistry other;
  CHECK_THROWS_AS(other.load_baseline_dir(dir.path()), ModelFormatError);
}

TEST_CASE("remote score protocol") {
  FakeServer server;
  server.reply(R"({"win_probability": 0.42})");
  CHECK(remote_score(server.endpoint(), kKey, "You are #3.\n", "#3) hi").value() ==
        doctest::Approx(0.42));
  const auto body = json::parse(server.last_body());
  CHECK(body == json{{"role", "werewolf"}, {"player", 3}, {"log", "You are #3.\n"},
                     {"candidate", "#3) hi"}});

  server.reply(R"({"win_probability": 1.7})");
  CHECK_THROWS_AS(remote_score(server.endpoint(), kKey, "", "x"), ProtocolError);
  server.reply(R"({"probability": 0.3})");
  CHECK_THROWS_AS(remote_score(server.endpoint(), kKey, "", "x"), ProtocolError);
  server.reply("not json");
  CHECK_THROWS_AS(remote_score(server.endpoint(), kKey, "", "x"), ProtocolError);
}

TEST_CASE("remote batch keeps order") {
  FakeServer server;
  std::vector<std::string> cands;
  for (int i = 0; i < 100; ++i) cands.push_back("#3) line " + std::to_string(i));
  const auto probs = remote_score_batch(server.endpoint(), kKey, "log", cands);
  REQUIRE(probs.size() == 100);
  for (int i = 0; i < 100; ++i) CHECK(probs[i] == doctest::Approx(i / 100.0));
  CHECK_THROWS_AS(parse_batch_response(R"({"probabilities": [0.1]})", 2), ProtocolError);
}

TEST_CASE("remote deadline") {
  FakeServer server;
  server.delay(std::chrono::milliseconds(800));
  RemoteOptions opt;
  opt.deadline = std::chrono::milliseconds(200);
  CHECK_THROWS_AS(remote_score(server.endpoint(), kKey, "", "x", opt), OracleTimeout);
  CHECK(kRemoteDeadline == std::chrono::seconds(10));
}

TEST_CASE("remote unreachable") {
  // A port that was free a moment ago and has nothing listening now.
  int port = 0;
  {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    port = ntohs(addr.sin_port);
    ::close(fd);
  }
  RemoteOptions opt;
  opt.deadline = std::chrono::milliseconds(500);
  CHECK_THROWS_AS(remote_score(Endpoint{"127.0.0.1", port}, kKey, "", "x", opt), Unreachable);
}

TEST_CASE("endpoint parsing") {
  const auto ep = Endpoint::parse("http://localhost:8080/");
  CHECK(ep.host == "localhost");
  CHECK(ep.port == 8080);
  CHECK_THROWS_AS(Endpoint::parse("localhost"), ConfigError);
  CHECK_THROWS_AS(Endpoint::parse("localhost:99999"), ConfigError);
}

TEST_CASE("remote oracle through the registry") {
  FakeServer server;
  server.reply(R"({"win_probability": 0.25})");
  OracleRegistry reg;
  register_remote(reg, server.endpoint());
  CHECK(reg.size() == 20);
  const auto oracle = reg.lookup(OracleKey{Role::kSeer, P(1)});
  CHECK(oracle->score("log", "cand") == doctest::Approx(0.25));
  std::vector<std::string> cands{"a", "b", "c"};
  CHECK(oracle->score_batch("log", cands).size() == 3);
}
