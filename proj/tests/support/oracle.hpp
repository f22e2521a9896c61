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

#pragma once

// Naive reference implementations for tests. Nothing here calls into the
// library code it checks.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sendgate/authmodel/lstm.hpp"
#include "sendgate/stylometry.hpp"

namespace oracle {

struct SegmentCounts {
  std::size_t lines = 0;
  std::size_t sentences = 0;
  std::size_t paragraphs = 0;
  std::size_t tokens = 0;
};

// Single pass over the characters with explicit state flags.
SegmentCounts scan_segments(std::string_view body);

std::array<double, sendgate::stylometry::kFeatureCount> features(std::string_view body);

std::size_t stopword_count(std::string_view body);

// Full-matrix edit distance.
std::size_t edit_distance(const std::string& a, const std::string& b);

// Lowercase, strip local-part dots, then the fixed confusable map applied by hand.
std::string skeleton(const std::string& address);

// Scalar LSTM forward pass returning the cross-entropy loss.
double lstm_loss(const sendgate::authmodel::EncodedSequence& seq,
                 const sendgate::stylometry::StylometricVector& styl,
                 sendgate::authmodel::Label label,
                 const sendgate::authmodel::ModelParams& p);

std::array<double, 2> lstm_logits(const sendgate::authmodel::EncodedSequence& seq,
                                  const sendgate::stylometry::StylometricVector& styl,
                                  const sendgate::authmodel::ModelParams& p);

// Email-like body text mixing words from every feature list with punctuation,
// digits, tabs, blank lines, signatures and multi-byte characters.
std::string random_body(std::mt19937_64& rng, bool ascii_only = false);

// Random address that often contains dots and confusable pairs.
std::string random_address(std::mt19937_64& rng);

}  // namespace oracle
