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

#include "support/profiles.hpp"

#include <string>

#include "sendgate/crypto.hpp"
#include "sendgate/gate/code.hpp"

namespace testing {

using namespace sendgate;

gate::UserProfile random_profile(std::mt19937_64& rng, int i) {
  std::uniform_int_distribution<int> die(0, 9);
  gate::UserProfile p;
  p.user_id = "user" + std::to_string(i % 7);
  p.address = p.user_id + "@corp.example";
  for (int k = die(rng); k > 0; --k) {
    const int n = die(rng);
    p.contacts.insert("c" + std::to_string(n) + "@x.example");
  }
  if (die(rng) > 2) {
    gate::CodeRecord r;
    r.algorithm = std::string(gate::kPbkdf2Algorithm);
    r.salt = crypto::random_bytes(gate::kSaltBytes);
    r.digest = crypto::random_bytes(gate::kDigestBytes);
    r.iterations = 100000 + static_cast<std::uint32_t>(die(rng));
    p.code = r;
  }
  p.failed_attempts = die(rng) % 4;
  p.locked = p.failed_attempts == 3;
  if (die(rng) > 5) p.settings.forwarding_address = "fwd" + std::to_string(die(rng)) + "@y.example";
  p.settings.signature = die(rng) > 4 ? "Alice \"A\" Morgan\n\xc3\xa9t\xc3\xa9\t\\" : "";
  p.model_ref = die(rng) > 5 ? "models/" + p.user_id + ".json" : "";
  return p;
}

}  // namespace testing
