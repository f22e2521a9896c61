// Copyright 2026 The Sendgate Authors
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

// sendgate command-line front end.
//
// Exit status: 0 success, 1 domain error or dangerous verdict, 2 usage error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "sendgate/authmodel/model_io.hpp"
#include "sendgate/codec.hpp"
#include "sendgate/error.hpp"
#include "sendgate/gate/send_gate.hpp"
#include "sendgate/gateway/api.hpp"
#include "sendgate/gateway/config.hpp"
#include "sendgate/gateway/pipeline.hpp"
#include "sendgate/store.hpp"
#include "sendgate/testkit/corpus.hpp"
#include "sendgate/testkit/scenarios.hpp"
#include "sendgate/text.hpp"

namespace {

using namespace sendgate;
using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::not_found, fmt::format("cannot read '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Common {
  std::optional<std::string> config_path;
  std::optional<std::string> store_root;

  gateway::Config config() const {
    gateway::Config c = gateway::load_config(
        config_path ? std::optional<fs::path>(*config_path) : std::nullopt);
    if (store_root) c.store_root = *store_root;
    return c;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "Config file (key = value)");
  cmd->add_option("--store", common.store_root, "Store root directory");
}

stylometry::FeatureExtractor extractor_for(const gateway::Config& c) {
  return stylometry::FeatureExtractor(c.lexicon());
}

// A gate over a writable store, for administrative commands.
struct AdminGate {
  explicit AdminGate(const gateway::Config& c)
      : store(store::Store::open(c.store_root, true)),
        audit(store.audit_path()),
        outbox(store.outbox_dir()),
        assessor(extractor_for(c), c.homoglyph_table(), c.lookalike_max_distance, models),
        gate(hasher, auth, assessor, audit, outbox),
        observer(store) {
    gate.restore(store.load_state());
    gate.set_observer(&observer);
  }

  store::Store store;
  store::FileAuditSink audit;
  store::OutboxSink outbox;
  gate::Pbkdf2CodeHasher hasher;
  gate::OneTimeTokenAuthenticator auth;
  gateway::ModelRegistry models;
  gateway::PipelineAssessor assessor;
  gate::SendGate gate;
  store::StoreObserver observer;
};

int cmd_parse(const std::string& file) {
  const Message m = parse_message(read_file(file));
  fmt::print("{}\n", codec::message_to_json(m).dump(2));
  return 0;
}

int cmd_features(const std::string& file, const std::string& format, const Common& common) {
  const auto ex = extractor_for(common.config());
  const Message m = parse_message(read_file(file));
  const auto v = ex.extract(m.body);
  const auto manifest = ex.manifest();
  if (format == "json") {
    json out = codec::features_to_json(v, manifest);
    fmt::print("{}\n", out.dump(2));
  } else if (format == "csv") {
    std::vector<std::string> names, values;
    for (const auto& f : manifest) {
      names.push_back(f.name);
      values.push_back(json(v[f.index]).dump());
    }
    fmt::print("{}\n{}\n", fmt::join(names, ","), fmt::join(values, ","));
  } else {
    for (const auto& f : manifest) fmt::print("{}:{}\n", f.name, json(v[f.index]).dump());
  }
  return 0;
}

int cmd_manifest(const Common& common) {
  const auto ex = extractor_for(common.config());
  json out = {{"hash", ex.manifest_hash()}, {"features", codec::manifest_to_json(ex.manifest())}};
  fmt::print("{}\n", out.dump(2));
  return 0;
}

int cmd_check_address(const std::string& address, const std::vector<std::string>& contacts,
                      const std::optional<std::string>& contacts_file, const Common& common) {
  const auto c = common.config();
  std::set<std::string> known(contacts.begin(), contacts.end());
  if (contacts_file) {
    const auto loaded = identity::load_contacts(*contacts_file);
    known.insert(loaded.begin(), loaded.end());
  }
  const auto table = c.homoglyph_table();
  const auto report =
      identity::analyze_address(address, known, {c.lookalike_max_distance, &table});
  fmt::print("{}\n", codec::report_to_json(report).dump(2));
  return report.verdict == identity::AddressVerdict::lookalike_of ? 1 : 0;
}

void print_skips(const gateway::Corpus& corpus) {
  for (const auto& s : corpus.skipped)
    fmt::print(stderr, "skipped {}: {}\n", s.path.string(), s.reason);
}

int cmd_train(const std::string& corpus_dir, const std::optional<std::string>& out,
              const std::optional<std::string>& user, authmodel::TrainConfig tc,
              const Common& common) {
  if (!out && !user)
    throw Error(ErrorCode::invalid_argument, "give --out FILE and/or --user ID");
  const auto c = common.config();
  const auto corpus = gateway::ingest_corpus(corpus_dir);
  print_skips(corpus);
  const auto ex = extractor_for(c);
  const auto result = authmodel::train(corpus.messages, tc, ex);
  for (const auto& m : result.history)
    fmt::print("epoch {:2d}  loss {:.6f}  accuracy {:.4f}\n", m.epoch, m.loss, m.accuracy);
  const json doc = authmodel::model_to_json(result.model);
  if (out) {
    store::write_document(*out, "model", doc);
    fmt::print("model written to {}\n", *out);
  }
  if (user) {
    auto st = store::Store::open(c.store_root, true);
    st.save_model(*user, doc);
    fmt::print("model stored for {}\n", *user);
  }
  return 0;
}

authmodel::TrainedModel load_model_file(const std::string& path,
                                        const stylometry::FeatureExtractor& ex) {
  return authmodel::model_from_json(store::read_document(path, "model"), ex.manifest_hash());
}

int cmd_eval(const std::string& corpus_dir, const std::string& model_path,
             const Common& common) {
  const auto ex = extractor_for(common.config());
  const auto model = load_model_file(model_path, ex);
  const auto corpus = gateway::ingest_corpus(corpus_dir);
  print_skips(corpus);
  const auto ev = authmodel::evaluate(model, corpus.messages, ex);
  json out = {{"total", ev.total},
              {"correct", ev.correct},
              {"accuracy", ev.accuracy()},
              {"mean_loss", ev.mean_loss},
              {"confusion",
               {{"legitimate", {{"legitimate", ev.confusion[0][0]}, {"impersonated", ev.confusion[0][1]}}},
                {"impersonated",
                 {{"legitimate", ev.confusion[1][0]}, {"impersonated", ev.confusion[1][1]}}}}}};
  fmt::print("{}\n", out.dump(2));
  return 0;
}

int cmd_verify(const std::string& eml, const std::string& user,
               const std::optional<std::string>& code, const std::optional<std::string>& model,
               const Common& common) {
  const auto c = common.config();
  const auto st = store::Store::open(c.store_root, false);
  const auto profile = st.load_profile(user);
  const Message message = parse_message(read_file(eml));

  gateway::ModelRegistry models;
  gateway::PipelineAssessor assessor(extractor_for(c), c.homoglyph_table(),
                                     c.lookalike_max_distance, models);
  if (model) {
    models.put(user, std::make_shared<const authmodel::TrainedModel>(
                         load_model_file(*model, assessor.extractor())));
  } else if (st.has_model(user)) {
    models.put(user, std::make_shared<const authmodel::TrainedModel>(authmodel::model_from_json(
                         st.load_model(user), assessor.extractor().manifest_hash())));
  }
  const gate::Pbkdf2CodeHasher hasher;
  const auto verdict =
      gateway::verify_offline(profile, message, code, hasher, assessor, c.styl_threshold);
  fmt::print("{}\n", codec::verdict_to_json(verdict).dump(2));
  return verdict.decision == authmodel::Decision::allow ? 0 : 1;
}

std::string read_code(const std::optional<std::string>& code) {
  if (code) return *code;
  std::string line;
  std::getline(std::cin, line);
  return std::string(text::trim(line));
}

int cmd_register_code(const std::string& user, const std::optional<std::string>& code,
                      const Common& common) {
  AdminGate admin(common.config());
  const std::string c = read_code(code);
  // Local operators stand in for the biometric enrolment step.
  const auto evidence = admin.auth.issue(user, "biometric-stub");
  const auto p = admin.gate.register_code(user, c, evidence);
  fmt::print("{}\n", json({{"user_id", p.user_id}, {"status", "registered"},
                           {"remaining", p.remaining_attempts()}})
                         .dump(2));
  return 0;
}

int cmd_add_user(const std::string& user, const std::string& address,
                 const std::vector<std::string>& contacts,
                 const std::optional<std::string>& contacts_file, const Common& common) {
  AdminGate admin(common.config());
  std::set<std::string> known(contacts.begin(), contacts.end());
  if (contacts_file) {
    const auto loaded = identity::load_contacts(*contacts_file);
    known.insert(loaded.begin(), loaded.end());
  }
  const auto p = admin.gate.create_profile(user, address, known);
  fmt::print("{}\n", json({{"user_id", p.user_id}, {"address", p.address},
                           {"contacts", p.contacts}})
                         .dump(2));
  return 0;
}

int cmd_simulate(const std::string& scenario) {
  std::vector<std::string_view> names;
  if (scenario == "all")
    names = testkit::scenario_names();
  else
    names.push_back(scenario);
  bool all_passed = true;
  json reports = json::array();
  for (auto name : names) {
    const auto r = testkit::run_scenario(name);
    all_passed = all_passed && r.passed;
    reports.push_back(r.to_json());
  }
  fmt::print("{}\n", (names.size() == 1 ? reports[0] : reports).dump(2));
  return all_passed ? 0 : 1;
}

int cmd_generate(const std::string& out, std::size_t count, std::uint64_t seed) {
  const auto corpus = testkit::generate_corpus(count, seed);
  for (const char* sub : {"legitimate", "impersonated"}) fs::create_directories(fs::path(out) / sub);
  std::size_t i = 0;
  for (const auto& lm : corpus) {
    const char* sub = lm.label == authmodel::Label::legitimate ? "legitimate" : "impersonated";
    std::ofstream f(fs::path(out) / sub / fmt::format("{:05d}.eml", i++), std::ios::binary);
    f << serialize_message(lm.message);
    if (!f) throw Error(ErrorCode::io_failure, "cannot write corpus file");
  }
  fmt::print("wrote {} messages under {}\n", corpus.size(), out);
  return 0;
}

int cmd_serve(const Common& common, std::optional<int> port) {
  auto c = common.config();
  if (port) c.port = *port;

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  gateway::Gateway gw(c);
  gateway::HttpServer server(gw, c.host, c.port, c.threads);
  fmt::print("sendgate listening on {}:{} (store {})\n", c.host, server.port(),
             c.store_root.string());
  std::fflush(stdout);

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  // run() can also return without a signal; wake the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  fmt::print("sendgate stopped\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sendgate: code-gated sending with identity and style checks"};
  app.require_subcommand(1);
  Common common;

  auto* serve = app.add_subcommand("serve", "Run the HTTP gateway");
  add_common(serve, common);
  std::optional<int> port;
  serve->add_option("--port", port, "Listen port (0 picks a free one)");

  std::string file;
  auto* parse = app.add_subcommand("parse", "Parse an .eml file and print it as JSON");
  parse->add_option("file", file, "Message file")->required();

  std::string format = "text";
  auto* features = app.add_subcommand("features", "Print the 97 stylometric features of a message body");
  features->add_option("file", file, "Message file")->required();
  features->add_option("--format", format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  add_common(features, common);

  auto* manifest = app.add_subcommand("manifest", "Print the feature manifest and its hash");
  add_common(manifest, common);

  std::string address;
  std::vector<std::string> contacts;
  std::optional<std::string> contacts_file;
  auto* check = app.add_subcommand("check-address", "Compare an address against known contacts");
  check->add_option("address", address, "Address to check")->required();
  check->add_option("--contact", contacts, "Known contact (repeatable)");
  check->add_option("--contacts", contacts_file, "File of contacts, one per line");
  add_common(check, common);

  std::string corpus_dir;
  std::optional<std::string> out;
  std::optional<std::string> user_opt;
  authmodel::TrainConfig tc;
  auto* train = app.add_subcommand("train", "Train a style model on a labeled corpus");
  train->add_option("--corpus", corpus_dir, "Directory with legitimate/ and impersonated/")->required();
  train->add_option("--out", out, "Model file to write");
  train->add_option("--user", user_opt, "Also store the model for this user");
  train->add_option("--epochs", tc.epochs, "Training epochs");
  train->add_option("--lr", tc.learning_rate, "Learning rate");
  train->add_option("--hidden", tc.hidden_size, "LSTM hidden size");
  train->add_option("--max-length", tc.max_length, "Tokens per message");
  train->add_option("--seed", tc.seed, "Initialization and shuffle seed");
  add_common(train, common);

  std::string model_path;
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a labeled corpus");
  eval->add_option("--corpus", corpus_dir, "Directory with legitimate/ and impersonated/")->required();
  eval->add_option("--model", model_path, "Model file")->required();
  add_common(eval, common);

  std::string user;
  std::optional<std::string> code;
  std::optional<std::string> model_opt;
  auto* verify = app.add_subcommand("verify", "Run code, identity and style checks on a message");
  verify->add_option("file", file, "Message file")->required();
  verify->add_option("--user", user, "Sending user")->required();
  verify->add_option("--code", code, "Send code to check (read-only)");
  verify->add_option("--model", model_opt, "Model file instead of the stored one");
  add_common(verify, common);

  auto* reg = app.add_subcommand("register-code", "Set a user's send code (reads stdin without --code)");
  reg->add_option("--user", user, "User id")->required();
  reg->add_option("--code", code, "New 4-digit code");
  add_common(reg, common);

  auto* add_user = app.add_subcommand("add-user", "Create a user profile");
  add_user->add_option("--user", user, "User id")->required();
  add_user->add_option("--address", address, "Own address")->required();
  add_user->add_option("--contact", contacts, "Known contact (repeatable)");
  add_user->add_option("--contacts", contacts_file, "File of contacts, one per line");
  add_common(add_user, common);

  std::string scenario;
  auto* sim = app.add_subcommand("simulate-attack", "Run a scripted attack against an in-memory gate");
  sim->add_option("--scenario", scenario, "Scenario name or 'all'")
      ->required()
      ->check([](const std::string& s) {
        if (s == "all") return std::string();
        for (auto n : testkit::scenario_names())
          if (n == s) return std::string();
        return fmt::format("unknown scenario; choose from all, {}",
                           fmt::join(testkit::scenario_names(), ", "));
      });

  std::size_t count = 500;
  std::uint64_t seed = 7;
  auto* gen = app.add_subcommand("generate-corpus", "Write a synthetic two-style corpus");
  gen->add_option("--out", corpus_dir, "Output directory")->required();
  gen->add_option("--count", count, "Number of messages");
  gen->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*serve) return cmd_serve(common, port);
    if (*parse) return cmd_parse(file);
    if (*features) return cmd_features(file, format, common);
    if (*manifest) return cmd_manifest(common);
    if (*check) return cmd_check_address(address, contacts, contacts_file, common);
    if (*train) return cmd_train(corpus_dir, out, user_opt, tc, common);
    if (*eval) return cmd_eval(corpus_dir, model_path, common);
    if (*verify) return cmd_verify(file, user, code, model_opt, common);
    if (*reg) return cmd_register_code(user, code, common);
    if (*add_user) return cmd_add_user(user, address, contacts, contacts_file, common);
    if (*sim) return cmd_simulate(scenario);
    if (*gen) return cmd_generate(corpus_dir, count, seed);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}: {}\n", to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 2;
}
