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

#include "sendgate/authmodel/model_io.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "sendgate/error.hpp"

namespace sendgate::authmodel {
namespace {

using nlohmann::json;

json tensor(std::size_t rows, std::size_t cols, std::span<const double> data) {
  return {{"shape", {rows, cols}}, {"data", std::vector<double>(data.begin(), data.end())}};
}

json vector_tensor(std::span<const double> data) {
  return {{"shape", {data.size()}}, {"data", std::vector<double>(data.begin(), data.end())}};
}

std::vector<double> read_tensor(const json& tensors, std::string_view name,
                                std::vector<std::size_t> shape) {
  const auto& t = tensors.at(std::string(name));
  const auto got = t.at("shape").get<std::vector<std::size_t>>();
  if (got != shape)
    throw Error(ErrorCode::shape_mismatch,
                fmt::format("tensor {} has shape [{}], expected [{}]", name,
                            fmt::join(got, ","), fmt::join(shape, ",")));
  auto data = t.at("data").get<std::vector<double>>();
  std::size_t expected = 1;
  for (auto s : shape) expected *= s;
  if (data.size() != expected)
    throw Error(ErrorCode::shape_mismatch,
                fmt::format("tensor {} holds {} values, expected {}", name,
                            data.size(), expected));
  return data;
}

void copy_into(std::span<double> dst, const std::vector<double>& src) {
  std::copy(src.begin(), src.end(), dst.begin());
}

}  // namespace

json model_to_json(const TrainedModel& m) {
  const auto& p = m.params;
  json tensors = json::object();
  p.visit([&](std::string_view name, std::span<const double> values) {
    const std::string key(name);
    if (name == "E")
      tensors[key] = tensor(p.embedding.rows(), p.embedding.cols(), values);
    else if (name == "W_h")
      tensors[key] = tensor(p.W_h.rows(), p.W_h.cols(), values);
    else if (name.starts_with("W_"))
      tensors[key] = tensor(p.hidden_size, kEmbedDim, values);
    else if (name.starts_with("U_"))
      tensors[key] = tensor(p.hidden_size, p.hidden_size, values);
    else
      tensors[key] = vector_tensor(values);
  });
  tensors["styl_mean"] = vector_tensor(m.standardizer.mean());
  tensors["styl_std"] = vector_tensor(m.standardizer.stddev());

  const auto& c = m.config;
  return {
      {"version", kModelFormatVersion},
      {"feature_manifest_hash", m.feature_manifest_hash},
      {"vocab", m.vocabulary.tokens()},
      {"dims", {{"embed", kEmbedDim}, {"hidden", p.hidden_size}, {"styl", kStylDim}}},
      {"tensors", std::move(tensors)},
      {"seed", p.seed},
      {"training_config",
       {{"epochs", c.epochs},
        {"learning_rate", c.learning_rate},
        {"hidden_size", c.hidden_size},
        {"max_length", c.max_length},
        {"seed", c.seed},
        {"clip_norm", c.clip_norm},
        {"min_token_frequency", c.min_token_frequency},
        {"max_vocabulary", c.max_vocabulary}}},
  };
}

TrainedModel model_from_json(const json& doc,
                             std::string_view expected_manifest_hash) {
  try {
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw Error(ErrorCode::version_mismatch,
                  fmt::format("unsupported model format version {}", version));
    TrainedModel m;
    m.feature_manifest_hash = doc.at("feature_manifest_hash").get<std::string>();
    if (m.feature_manifest_hash != expected_manifest_hash)
      throw Error(ErrorCode::manifest_mismatch,
                  "model was trained against a different feature manifest");

    const auto& dims = doc.at("dims");
    if (dims.at("embed").get<std::size_t>() != kEmbedDim ||
        dims.at("styl").get<std::size_t>() != kStylDim)
      throw Error(ErrorCode::shape_mismatch, "model dims do not match this build");
    const auto hidden = dims.at("hidden").get<std::size_t>();

    m.vocabulary = Vocabulary(doc.at("vocab").get<std::vector<std::string>>());
    m.params = ModelParams::zeros(m.vocabulary.size(), hidden);
    m.params.seed = doc.at("seed").get<std::uint64_t>();

    const auto& tensors = doc.at("tensors");
    auto& p = m.params;
    p.visit([&](std::string_view name, std::span<double> values) {
      std::vector<std::size_t> shape;
      if (name == "E")
        shape = {p.embedding.rows(), p.embedding.cols()};
      else if (name == "W_h")
        shape = {p.W_h.rows(), p.W_h.cols()};
      else if (name.starts_with("W_"))
        shape = {hidden, kEmbedDim};
      else if (name.starts_with("U_"))
        shape = {hidden, hidden};
      else
        shape = {values.size()};
      copy_into(values, read_tensor(tensors, name, shape));
    });
    m.standardizer = stylometry::Standardizer(
        read_tensor(tensors, "styl_mean", {kStylDim}),
        read_tensor(tensors, "styl_std", {kStylDim}));
    p.validate();

    const auto& c = doc.at("training_config");
    m.config.epochs = c.at("epochs").get<std::size_t>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.hidden_size = c.at("hidden_size").get<std::size_t>();
    m.config.max_length = c.at("max_length").get<std::size_t>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.clip_norm = c.at("clip_norm").get<double>();
    m.config.min_token_frequency = c.at("min_token_frequency").get<std::size_t>();
    m.config.max_vocabulary = c.at("max_vocabulary").get<std::size_t>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::corrupt_record,
                fmt::format("malformed model document: {}", e.what()));
  }
}

}  // namespace sendgate::authmodel
