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

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deepwolf/augment.hpp"
#include "deepwolf/baseline.hpp"
#include "deepwolf/eval.hpp"
#include "deepwolf/manifest.hpp"
#include "deepwolf/remote_oracle.hpp"
#include "deepwolf/replay.hpp"
#include "deepwolf/server.hpp"
#include "deepwolf/session.hpp"
#include "deepwolf/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace deepwolf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool verbose = false;
};

Globals g;

void note(const std::string& msg) {
  if (g.verbose) std::cerr << msg << '\n';
}

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  write_file_atomic(p, contents);
}

RoleMap roles_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("roles file must map seat numbers to roles");
  RoleMap roles{};
  for (PlayerId p : all_players()) {
    const auto key = std::to_string(p.number());
    if (!j.contains(key) || !j[key].is_string()) {
      throw ConfigError("roles file has no role for " + p.str());
    }
    const auto role = parse_role(j[key].get<std::string>());
    if (!role) throw ConfigError("unknown role '" + j[key].get<std::string>() + "'");
    roles[p.index()] = *role;
  }
  if (!is_valid_role_multiset(roles)) throw ConfigError("roles file is not a valid deal");
  return roles;
}

RoleMap load_roles(const fs::path& path) {
  try {
    return roles_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw ConfigError("bad roles file " + path.string() + ": " + e.what());
  }
}

// <name>.log pairs with <name>.roles.json, else roles.json next to it.
fs::path sibling_roles(const fs::path& log) {
  fs::path named = log;
  named.replace_extension(".roles.json");
  if (fs::exists(named)) return named;
  fs::path shared = log.parent_path() / "roles.json";
  if (fs::exists(shared)) return shared;
  throw ConfigError("no roles for " + log.string() + "; pass --roles");
}

// ---------------------------------------------------------------------------

struct ReplayArgs {
  std::string path;
  std::string roles;
  bool strict = false;
};

int run_replay(const ReplayArgs& a) {
  const fs::path path(a.path);
  GameRecord record;
  if (path.extension() == ".json") {
    record = load_manifest(path);
  } else {
    const RoleMap roles = load_roles(a.roles.empty() ? sibling_roles(path) : fs::path(a.roles));
    record.config = GameConfig{g.seed, roles};
    record.roles = roles;
    record.events = parse(read_file(path));
  }
  try {
    const ReplayReport report = replay(record, ReplayOptions{!a.strict});
    note("events: " + std::to_string(record.events.size()) + ", reconstructed: " +
         std::to_string(report.synthesized.size()) + ", ignored after end: " +
         std::to_string(report.ignored_trailing));
    if (report.state.winner) {
      std::cout << "winner: " << side_name(*report.state.winner) << " side\n";
    } else {
      std::cout << "in progress, phase=" << phase_name(report.state.phase) << '\n';
    }
  } catch (const InconsistentRecord& e) {
    std::cerr << path.string() << ": line " << e.line() << ": " << e.reason() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SourceArgs {
  std::string pools_dir;
  std::string models_dir;
  std::string oracle_endpoint;
};

void add_source_flags(CLI::App* cmd, SourceArgs& s) {
  cmd->add_option("--pools-dir", s.pools_dir, "Directory of <role>.txt utterance pools");
  cmd->add_option("--models-dir", s.models_dir, "Directory of <role>_<n>.bin value models");
  cmd->add_option("--oracle-endpoint", s.oracle_endpoint,
                  "host:port of a remote scoring service (overrides --models-dir)");
}

PolicyContext context_for(const SourceArgs& s, bool needs_models) {
  MatchSpec spec;
  spec.pools_dir = s.pools_dir;
  spec.models_dir = s.models_dir;
  spec.oracle_endpoint = s.oracle_endpoint;
  if (needs_models) spec.policies.fill(std::string(kAgentPolicy));
  return build_policy_context(spec);
}

struct SimulateArgs {
  int games = 1;
  std::vector<std::string> policies;
  SourceArgs source;
  std::string out_dir;
  unsigned threads = 0;
  std::size_t max_talk = SimOptions{}.max_talk_per_phase;
};

int run_simulate(const SimulateArgs& a) {
  MatchSpec spec;
  spec.n_games = a.games;
  spec.seed = g.seed;
  if (!a.policies.empty()) {
    if (a.policies.size() != kNumPlayers) throw ConfigError("--policies needs 5 names");
    std::copy(a.policies.begin(), a.policies.end(), spec.policies.begin());
  }
  spec.pools_dir = a.source.pools_dir;
  spec.models_dir = a.source.models_dir;
  spec.oracle_endpoint = a.source.oracle_endpoint;
  spec.threads = a.threads;
  spec.sim.max_talk_per_phase = a.max_talk;
  const auto records = run_matches(spec);

  std::size_t villager = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    villager += records[i].winner == Side::kVillager;
    if (!a.out_dir.empty()) {
      char id[32];
      std::snprintf(id, sizeof id, "game-%05zu", i);
      write_record(a.out_dir, id, records[i]);
    }
  }
  std::cout << "games: " << records.size() << ", villager side: " << villager
            << ", werewolf side: " << records.size() - villager << '\n';
  if (!a.out_dir.empty()) note("records written to " + a.out_dir);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DatasetArgs {
  std::string records;
  std::string out;
  std::string out_dir;
  bool slice = false;
  bool balance = true;
};

std::vector<GameRecord> load_input(const DatasetArgs& a) {
  if (!fs::is_directory(a.records)) {
    throw StorageError("not a directory: " + a.records);
  }
  auto records = load_records_dir(a.records);
  note("records: " + std::to_string(records.size()));
  return records;
}

std::vector<TrainingExample> examples_for(const DatasetArgs& a) {
  auto records = load_input(a);
  if (a.balance) {
    records = balance_sides(records);
    note("after balancing: " + std::to_string(records.size()));
  }
  return a.slice ? augment_slices(records) : augment_dataset(records);
}

int run_project(const DatasetArgs& a) {
  const auto records = load_input(a);
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (PlayerId v : all_players()) {
      const ViewpointLog view = project(records[i], v);
      out += json{{"game", i},
                  {"player", v.number()},
                  {"role", role_name(records[i].roles[v.index()])},
                  {"lines", view.lines}}
                 .dump();
      out += '\n';
    }
  }
  write_output(a.out, out);
  std::cerr << "viewpoints: " << records.size() * kNumPlayers << '\n';
  return kExitOk;
}

int run_augment(const DatasetArgs& a) {
  const auto examples = examples_for(a);
  write_output(a.out, export_jsonl(examples));
  std::cerr << "examples: " << examples.size() << '\n';
  return kExitOk;
}

int run_export(const DatasetArgs& a) {
  const auto examples = examples_for(a);
  std::map<OracleKey, std::vector<TrainingExample>> by_key;
  for (const auto& key : all_oracle_keys()) by_key[key];
  for (const auto& ex : examples) by_key[ex.key].push_back(ex);
  fs::create_directories(a.out_dir);
  for (const auto& [key, list] : by_key) {
    write_file_atomic(fs::path(a.out_dir) / (key.str() + ".jsonl"), export_jsonl(list));
    note(key.str() + ": " + std::to_string(list.size()));
  }
  std::cout << "examples: " << examples.size() << ", files: " << by_key.size() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::vector<std::string> data;
  std::string out_dir;
  std::string key;
  int epochs = TrainOptions{}.epochs;
  double learning_rate = TrainOptions{}.learning_rate;
  std::size_t batch_size = TrainOptions{}.batch_size;
  std::uint32_t dim = FeatureSpec{}.dim;
};

int run_train(const TrainArgs& a) {
  std::vector<TrainingExample> examples;
  for (const auto& path : a.data) {
    const fs::path p(path);
    std::vector<fs::path> files;
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.path().extension() == ".jsonl") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
    } else {
      files.push_back(p);
    }
    for (const auto& f : files) {
      auto more = read_jsonl(read_file(f));
      examples.insert(examples.end(), more.begin(), more.end());
    }
  }

  std::map<OracleKey, std::vector<TrainingExample>> by_key;
  for (auto& ex : examples) by_key[ex.key].push_back(std::move(ex));
  if (!a.key.empty()) {
    std::erase_if(by_key, [&](const auto& kv) { return kv.first.str() != a.key; });
  }
  if (by_key.empty()) throw EmptyDataset("no training examples" + (a.key.empty() ? "" : " for " + a.key));

  TrainOptions options;
  options.epochs = a.epochs;
  options.learning_rate = a.learning_rate;
  options.batch_size = a.batch_size;
  options.seed = g.seed;
  options.features.dim = a.dim;
  fs::create_directories(a.out_dir);
  for (const auto& [key, list] : by_key) {
    const TrainResult r = train_baseline(list, key, options);
    save_model(r.model, fs::path(a.out_dir) / (key.str() + ".bin"));
    std::printf("%s: %zu examples, loss %.4f -> %.4f\n", key.str().c_str(), list.size(),
                r.initial_loss, r.final_loss);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string spec;
  std::string out;
  std::string format;
  unsigned threads = 0;
};

int run_eval(const EvalArgs& a) {
  MatchSpec spec = load_match_spec(a.spec);
  if (g.seed_given) spec.seed = g.seed;
  if (a.threads) spec.threads = a.threads;
  const auto records = run_matches(spec);

  std::array<std::string, kNumPlayers> attribution;
  for (PlayerId p : all_players()) attribution[p.index()] = spec.identity_of(p);
  const WinRateTable table = compute_win_rates(records, attribution);

  std::string format = a.format;
  if (format.empty()) format = fs::path(a.out).extension() == ".csv" ? "csv" : "text";
  if (!a.out.empty()) {
    write_output(a.out, export_table(table, format == "csv" ? TableFormat::kCsv
                                                            : TableFormat::kText));
  }
  std::cout << export_table(table, TableFormat::kText);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ServeArgs {
  std::string bind = "127.0.0.1";
  std::uint16_t port = 8765;
  SourceArgs source;
  std::string records_dir;
  double session_timeout = 600;
  double action_timeout = 120;
  unsigned threads = 2;
};

int run_serve(const ServeArgs& a) {
  // Signals are taken by one thread through sigwait; block them first so
  // the server's worker threads inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const bool have_models = !a.source.models_dir.empty() || !a.source.oracle_endpoint.empty();
  PolicyContext ctx = context_for(a.source, have_models);

  SessionOptions options;
  options.talk_cap = std::chrono::milliseconds(static_cast<long long>(a.session_timeout * 1000));
  options.action_cap = std::chrono::milliseconds(static_cast<long long>(a.action_timeout * 1000));
  options.records_dir = a.records_dir;
  if (options.talk_cap.count() <= 0 || options.action_cap.count() <= 0) {
    throw ConfigError("timeouts must be positive");
  }

  SessionManager manager(std::move(ctx), options);
  ServerOptions server_options;
  server_options.bind_address = a.bind;
  server_options.port = a.port;
  server_options.threads = std::max(1u, a.threads);
  GameServer server(server_options, manager);
  std::cout << "listening on " << a.bind << ':' << server.port() << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    note("signal " + std::to_string(sig) + ", stopping");
    server.stop();
  });
  server.run();
  // run() only returns after stop(); wake the waiter if it is still parked.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deepwolf: five-player werewolf engine, agent and tooling"};
  app.require_subcommand(1, 1);
  auto* seed_opt = app.add_option("--seed", g.seed, "Master seed (default 0)");
  app.add_flag("-v,--verbose", g.verbose, "Extra diagnostics on stderr");

  ReplayArgs replay_args;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a game log through the engine");
  replay_cmd->add_option("path", replay_args.path, "Canonical .log or .json manifest")->required();
  replay_cmd->add_option("--roles", replay_args.roles,
                         "JSON {\"1\": role, ...}; default <name>.roles.json beside the log");
  replay_cmd->add_flag("--strict", replay_args.strict,
                       "Require every engine-derived line, including divination choices");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Play games between scripted or agent seats");
  sim_cmd->add_option("-n,--games", sim_args.games, "Number of games")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--policies", sim_args.policies,
                      "Five seat policies: agent | random-legal | first-candidate")
      ->delimiter(',');
  add_source_flags(sim_cmd, sim_args.source);
  sim_cmd->add_option("--out-dir", sim_args.out_dir, "Write each record (.log + .json) here");
  sim_cmd->add_option("--threads", sim_args.threads, "Worker threads (0 = all cores)");
  sim_cmd->add_option("--max-talk", sim_args.max_talk, "Talk lines per phase before auto-Over");

  DatasetArgs ds_args;
  auto* ds_cmd = app.add_subcommand("dataset", "Build training data from game records");
  ds_cmd->require_subcommand(1, 1);
  auto* project_cmd = ds_cmd->add_subcommand("project", "Per-player masked viewpoints as JSONL");
  auto* augment_cmd = ds_cmd->add_subcommand("augment", "Permutation-augmented examples as JSONL");
  auto* export_cmd = ds_cmd->add_subcommand("export", "Augmented examples split per value model");
  for (auto* c : {project_cmd, augment_cmd, export_cmd}) {
    c->add_option("--records", ds_args.records, "Directory of record manifests")->required();
  }
  for (auto* c : {augment_cmd, export_cmd}) {
    c->add_flag("--slice", ds_args.slice, "One example per decision point instead of whole games");
    c->add_flag("--balance-sides,!--no-balance-sides", ds_args.balance,
                "Subsample records to equal side wins (default on)");
  }
  project_cmd->add_option("--out", ds_args.out, "Output file (default stdout)");
  augment_cmd->add_option("--out", ds_args.out, "Output file (default stdout)");
  export_cmd->add_option("--out-dir", ds_args.out_dir, "One <role>_<n>.jsonl per key")->required();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train-baseline", "Train the logistic value models");
  train_cmd->add_option("--data", train_args.data, "JSONL files or directories")->required();
  train_cmd->add_option("--out-dir", train_args.out_dir, "Where <role>_<n>.bin go")->required();
  train_cmd->add_option("--key", train_args.key, "Train only this key, e.g. werewolf_3");
  train_cmd->add_option("--epochs", train_args.epochs)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train_args.learning_rate)->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", train_args.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--dim", train_args.dim, "Hashed feature buckets (power of two >= 4096)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Run a match spec and tabulate win rates");
  eval_cmd->add_option("--spec", eval_args.spec, "Match spec JSON")->required();
  eval_cmd->add_option("--out", eval_args.out, "Write the table here");
  eval_cmd->add_option("--format", eval_args.format, "csv | text (default from --out)")
      ->check(CLI::IsMember({"csv", "text"}));
  eval_cmd->add_option("--threads", eval_args.threads, "Worker threads (overrides the spec)");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Host live games over TCP");
  serve_cmd->add_option("--bind", serve_args.bind, "Listen address");
  serve_cmd->add_option("--port", serve_args.port, "Listen port (0 picks one)");
  add_source_flags(serve_cmd, serve_args.source);
  serve_cmd->add_option("--records-dir", serve_args.records_dir, "Persist finished games here");
  serve_cmd->add_option("--session-timeout", serve_args.session_timeout,
                        "Talk-phase limit in seconds");
  serve_cmd->add_option("--action-timeout", serve_args.action_timeout,
                        "Vote and night-action limit in seconds");
  serve_cmd->add_option("--threads", serve_args.threads, "I/O threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*replay_cmd) return run_replay(replay_args);
    if (*sim_cmd) return run_simulate(sim_args);
    if (*project_cmd) return run_project(ds_args);
    if (*augment_cmd) return run_augment(ds_args);
    if (*export_cmd) return run_export(ds_args);
    if (*train_cmd) return run_train(train_args);
    if (*eval_cmd) return run_eval(eval_args);
    if (*serve_cmd) return run_serve(serve_args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const StorageError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Unreachable& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const OracleTimeout& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
