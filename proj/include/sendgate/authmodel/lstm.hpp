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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

#include "sendgate/authmodel/vocabulary.hpp"
#include "sendgate/stylometry.hpp"

namespace sendgate::authmodel {

inline constexpr std::size_t kEmbedDim = 100;
inline constexpr std::size_t kStylDim = stylometry::kFeatureCount;
inline constexpr std::size_t kClasses = 2;

enum class Label : std::size_t { legitimate = 0, impersonated = 1 };

std::string_view to_string(Label label);

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Gate order used for W, U and b: input, forget, output, candidate.
enum Gate : std::size_t { kInput = 0, kForget = 1, kOutput = 2, kCandidate = 3 };
inline constexpr std::size_t kGates = 4;

struct ModelParams {
  std::size_t hidden_size = 0;
  std::uint64_t seed = 0;

  Matrix embedding;                   // vocab x 100
  std::array<Matrix, kGates> W;       // hidden x 100, input -> hidden
  std::array<Matrix, kGates> U;       // hidden x hidden
  std::array<std::vector<double>, kGates> b;
  Matrix W_h;                         // (hidden + 97) x 2
  std::vector<double> b_out;          // 2

  // All-zero tensors of the right shapes.
  static ModelParams zeros(std::size_t vocab_size, std::size_t hidden_size);

  // Uniform(-0.08, 0.08) from `seed`; forget-gate bias starts at 1.
  static ModelParams initialize(std::size_t vocab_size, std::size_t hidden_size,
                                std::uint64_t seed);

  std::size_t vocab_size() const { return embedding.rows(); }

  // Throws Error(shape_mismatch) or Error(invalid_argument) on non-finite
  // values.
  void validate() const;

  // Visits every tensor as (name, flat values) in a fixed order. Names
  // match the model file: E, W_i.., U_i.., b_i.., W_h, b.
  template <typename F>
  void visit(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void visit(F&& f) const {
    visit_impl(*this, f);
  }

  bool operator==(const ModelParams&) const = default;

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& self, F& f);
};


template <typename Self, typename F>
void ModelParams::visit_impl(Self& self, F& f) {
  static constexpr std::array<std::string_view, kGates> kW = {"W_i", "W_f", "W_o", "W_g"};
  static constexpr std::array<std::string_view, kGates> kU = {"U_i", "U_f", "U_o", "U_g"};
  static constexpr std::array<std::string_view, kGates> kB = {"b_i", "b_f", "b_o", "b_g"};
  f(std::string_view("E"), self.embedding.data());
  for (std::size_t k = 0; k < kGates; ++k) f(kW[k], self.W[k].data());
  for (std::size_t k = 0; k < kGates; ++k) f(kU[k], self.U[k].data());
  for (std::size_t k = 0; k < kGates; ++k) {
    if constexpr (std::is_const_v<Self>)
      f(kB[k], std::span<const double>(self.b[k]));
    else
      f(kB[k], std::span<double>(self.b[k]));
  }
  f(std::string_view("W_h"), self.W_h.data());
  if constexpr (std::is_const_v<Self>)
    f(std::string_view("b"), std::span<const double>(self.b_out));
  else
    f(std::string_view("b"), std::span<double>(self.b_out));
}

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;

  static LstmState zeros(std::size_t hidden_size) {
    return {std::vector<double>(hidden_size, 0.0),
            std::vector<double>(hidden_size, 0.0)};
  }
};

struct Prediction {
  std::array<double, kClasses> probabilities{};
  Label label = Label::legitimate;

  double legitimate() const { return probabilities[0]; }
};

// Numerically stable two-class softmax.
std::array<double, kClasses> softmax(const std::array<double, kClasses>& logits);

Prediction predict_from_logits(const std::array<double, kClasses>& logits);

// One cell update: i, f, o = sigmoid(W x + U h + b), g = tanh(...),
// c' = f*c + i*g, h' = o*tanh(c'). Throws Error(shape_mismatch).
LstmState lstm_step(std::span<const double> x, const LstmState& state,
                    const ModelParams& params);

// Runs the cell over the embedded sequence from the zero state and reads the
// final hidden state, concatenated with the standardized stylometric vector,
// through the dense softmax layer.
Prediction forward(const EncodedSequence& seq,
                   const stylometry::StylometricVector& styl,
                   const ModelParams& params);

std::array<double, kClasses> logits(const EncodedSequence& seq,
                                    const stylometry::StylometricVector& styl,
                                    const ModelParams& params);

// Cross-entropy of the prediction against `label`.
double loss(const EncodedSequence& seq, const stylometry::StylometricVector& styl,
            Label label, const ModelParams& params);

// Gradient buffers shaped like ModelParams. Only embedding rows listed in
// `touched_rows` may be non-zero.
struct Gradients {
  ModelParams d;
  std::vector<std::size_t> touched_rows;

  explicit Gradients(const ModelParams& like);

  void clear();
  double squared_norm() const;
  void scale(double factor);
};

// Backpropagation through time for one example. Accumulates into `grads`
// and returns the loss and prediction.
struct StepResult {
  double loss = 0;
  Prediction prediction;
};
StepResult backprop(const EncodedSequence& seq,
                    const stylometry::StylometricVector& styl, Label label,
                    const ModelParams& params, Gradients& grads);

// params -= learning_rate * grads, touching only used embedding rows.
void apply_gradients(ModelParams& params, const Gradients& grads,
                     double learning_rate);

}  // namespace sendgate::authmodel
