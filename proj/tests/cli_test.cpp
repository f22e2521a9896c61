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

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "sendgate/message.hpp"
#include "sendgate/testkit/corpus.hpp"
#include "support/cli.hpp"
#include "support/tempdir.hpp"

using nlohmann::json;

namespace {

std::string sample_eml(const testing::TempDir& dir) {
  const auto path = dir / "sample.eml";
  std::ofstream(path, std::ios::binary) << sendgate::serialize_message(sendgate::testkit::legitimate_message(4));
  return path.string();
}

}  // namespace

TEST_CASE("parse prints the message as JSON") {
  testing::TempDir dir;
  const auto r = clirun::run({"parse", sample_eml(dir)});
  CHECK(r.exit_code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("from") == "alice.morgan@corp.example");
  CHECK(j.at("to").is_array());

  std::ofstream(dir / "bad.eml") << "no headers here\n";
  CHECK(clirun::run({"parse", (dir / "bad.eml").string()}).exit_code == 1);
  CHECK(clirun::run({"parse", (dir / "missing.eml").string()}).exit_code == 1);
}

TEST_CASE("features in each format") {
  testing::TempDir dir;
  const auto file = sample_eml(dir);
  const auto text = clirun::run({"features", file});
  CHECK(text.exit_code == 0);
  std::size_t lines = 0;
  std::istringstream in(text.out);
  for (std::string line; std::getline(in, line);) lines += !line.empty();
  CHECK(lines == 97);
  CHECK(text.out.starts_with("char_count:"));

  const auto csv = clirun::run({"features", file, "--format", "csv"});
  CHECK(csv.exit_code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 2);

  const auto js = clirun::run({"features", file, "--format", "json"});
  CHECK(js.exit_code == 0);
  CHECK(json::parse(js.out).size() == 97);
  CHECK(clirun::run({"features", file, "--format", "xml"}).exit_code == 2);
}

TEST_CASE("manifest matches the shipped copy") {
  const auto r = clirun::run({"manifest"});
  REQUIRE(r.exit_code == 0);
  std::ifstream in(std::string(SENDGATE_SOURCE_DIR) + "/docs/feature_manifest.json");
  CHECK(json::parse(r.out) == json::parse(in));
}

TEST_CASE("check-address exit codes") {
  const auto look = clirun::run({"check-address", "aga.ga@gmail.com", "--contact", "agaga@gmail.com"});
  CHECK(look.exit_code == 1);
  CHECK(json::parse(look.out).at("verdict") == "lookalike_of");
  const auto exact = clirun::run({"check-address", "agaga@gmail.com", "--contact", "agaga@gmail.com"});
  CHECK(exact.exit_code == 0);
  CHECK(json::parse(exact.out).at("verdict") == "exact_known");
  CHECK(clirun::run({"check-address", "not-an-address", "--contact", "a@b.c"}).exit_code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(clirun::run({}).exit_code == 2);
  CHECK(clirun::run({"frobnicate"}).exit_code == 2);
  CHECK(clirun::run({"verify", "x.eml"}).exit_code == 2);
  CHECK(clirun::run({"simulate-attack", "--scenario", "nope"}).exit_code == 2);
  CHECK(clirun::run({"--help"}).exit_code == 0);
}

TEST_CASE("simulated attacks are stopped") {
  const auto one = clirun::run({"simulate-attack", "--scenario", "hijacked-session"});
  CHECK(one.exit_code == 0);
  CHECK(json::parse(one.out).at("passed") == true);
  const auto all = clirun::run({"simulate-attack", "--scenario", "all"});
  CHECK(all.exit_code == 0);
  CHECK(json::parse(all.out).is_array());
}

TEST_CASE("offline verify over the fixtures") {
  testing::TempDir dir;
  std::string log;
  const bool ready = clirun::prepare_verify_store(dir.path(), &log);
  INFO(log);
  REQUIRE(ready);
  const std::string store = (dir / "store").string();

  for (const auto& c : clirun::verify_cases()) {
    const auto r = clirun::run({"verify", clirun::fixture(c.file).string(), "--user", clirun::kUser,
                                "--store", store, "--code", c.code_ok ? clirun::kCode : clirun::kWrongCode});
    INFO(c.file << " code_ok=" << c.code_ok << "\n" << r.out);
    std::vector<std::string> want;
    if (!c.code_ok) want.emplace_back("code");
    if (!c.id_ok) want.emplace_back("email_id");
    if (!c.styl_ok) want.emplace_back("stylometry");
    const auto v = json::parse(r.out);
    CHECK(v.at("reasons") == json(want));
    CHECK(v.at("decision") == (want.empty() ? "allow" : "dangerous"));
    CHECK(r.exit_code == (want.empty() ? 0 : 1));
  }

  const auto no_code = clirun::run({"verify", clirun::fixture("legit_contact.eml").string(), "--user",
                                    clirun::kUser, "--store", store});
  CHECK(no_code.exit_code == 1);
  CHECK(json::parse(no_code.out).at("reasons") == json{"code"});

  const auto attacker = clirun::run({"verify", clirun::fixture("attacker.eml").string(), "--user",
                                     clirun::kUser, "--store", store, "--code", clirun::kCode});
  CHECK(attacker.exit_code == 1);
  const auto reasons = json::parse(attacker.out).at("reasons");
  CHECK(std::find(reasons.begin(), reasons.end(), "email_id") != reasons.end());

  CHECK(clirun::run({"verify", clirun::fixture("legit_contact.eml").string(), "--user", "nobody",
                     "--store", store})
            .exit_code == 1);
}
