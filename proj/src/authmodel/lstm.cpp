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

#include "sendgate/authmodel/lstm.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sendgate/error.hpp"

namespace sendgate::authmodel {
namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// splitmix64 uniform in [0, 1).
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : state_(seed) {}
  double next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

void require(bool ok, std::string_view what) {
  if (!ok) throw Error(ErrorCode::shape_mismatch, std::string(what));
}

// Activations cached during the forward pass for BPTT.
struct StepCache {
  std::size_t token = 0;
  std::array<std::vector<double>, kGates> gate;  // post-activation
  std::vector<double> c;
  std::vector<double> tanh_c;
  std::vector<double> h;
};

void cell(std::span<const double> x, std::span<const double> h_prev,
          std::span<const double> c_prev, const ModelParams& p,
          std::array<std::vector<double>, kGates>& gate, std::vector<double>& c,
          std::vector<double>& tanh_c, std::vector<double>& h) {
  const std::size_t hs = p.hidden_size;
  for (std::size_t k = 0; k < kGates; ++k) {
    gate[k].resize(hs);
    for (std::size_t r = 0; r < hs; ++r) {
      const double a = dot(p.W[k].row(r), x) + dot(p.U[k].row(r), h_prev) + p.b[k][r];
      gate[k][r] = k == kCandidate ? std::tanh(a) : sigmoid(a);
    }
  }
  c.resize(hs);
  tanh_c.resize(hs);
  h.resize(hs);
  for (std::size_t r = 0; r < hs; ++r) {
    c[r] = gate[kForget][r] * c_prev[r] + gate[kInput][r] * gate[kCandidate][r];
    tanh_c[r] = std::tanh(c[r]);
    h[r] = gate[kOutput][r] * tanh_c[r];
  }
}

void check_inputs(const EncodedSequence& seq, const ModelParams& p) {
  for (auto idx : seq.indices) {
    if (idx >= p.vocab_size())
      throw Error(ErrorCode::shape_mismatch,
                  fmt::format("token index {} outside vocabulary of {}", idx,
                              p.vocab_size()));
  }
  require(p.W_h.rows() == p.hidden_size + kStylDim && p.W_h.cols() == kClasses,
          "dense layer shape does not match hidden size");
}

std::array<double, kClasses> dense(std::span<const double> h,
                                   const stylometry::StylometricVector& styl,
                                   const ModelParams& p) {
  std::array<double, kClasses> z{};
  for (std::size_t k = 0; k < kClasses; ++k) {
    double s = p.b_out[k];
    for (std::size_t j = 0; j < p.hidden_size; ++j) s += p.W_h(j, k) * h[j];
    for (std::size_t j = 0; j < kStylDim; ++j)
      s += p.W_h(p.hidden_size + j, k) * styl[j];
    z[k] = s;
  }
  return z;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::legitimate ? "legitimate" : "impersonated";
}

ModelParams ModelParams::zeros(std::size_t vocab_size, std::size_t hidden_size) {
  ModelParams p;
  p.hidden_size = hidden_size;
  p.embedding = Matrix(vocab_size, kEmbedDim);
  for (std::size_t k = 0; k < kGates; ++k) {
    p.W[k] = Matrix(hidden_size, kEmbedDim);
    p.U[k] = Matrix(hidden_size, hidden_size);
    p.b[k].assign(hidden_size, 0.0);
  }
  p.W_h = Matrix(hidden_size + kStylDim, kClasses);
  p.b_out.assign(kClasses, 0.0);
  return p;
}

ModelParams ModelParams::initialize(std::size_t vocab_size,
                                    std::size_t hidden_size,
                                    std::uint64_t seed) {
  ModelParams p = zeros(vocab_size, hidden_size);
  p.seed = seed;
  Uniform u(seed);
  p.visit([&](std::string_view name, std::span<double> values) {
    if (name.starts_with("b")) return;
    for (double& v : values) v = (u.next() * 2.0 - 1.0) * 0.08;
  });
  std::fill(p.b[kForget].begin(), p.b[kForget].end(), 1.0);
  return p;
}

void ModelParams::validate() const {
  const std::size_t hs = hidden_size;
  require(hs > 0, "hidden size must be positive");
  require(embedding.cols() == kEmbedDim && embedding.rows() >= 2,
          "embedding must be vocab x 100");
  for (std::size_t k = 0; k < kGates; ++k) {
    require(W[k].rows() == hs && W[k].cols() == kEmbedDim, "W gate shape");
    require(U[k].rows() == hs && U[k].cols() == hs, "U gate shape");
    require(b[k].size() == hs, "gate bias shape");
  }
  require(W_h.rows() == hs + kStylDim && W_h.cols() == kClasses, "W_h shape");
  require(b_out.size() == kClasses, "output bias shape");
  visit([](std::string_view name, std::span<const double> values) {
    for (double v : values) {
      if (!std::isfinite(v))
        throw Error(ErrorCode::invalid_argument,
                    fmt::format("non-finite value in tensor {}", name));
    }
  });
}

std::array<double, kClasses> softmax(const std::array<double, kClasses>& z) {
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m);
  const double e1 = std::exp(z[1] - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

Prediction predict_from_logits(const std::array<double, kClasses>& z) {
  Prediction p;
  p.probabilities = softmax(z);
  // Ties go to legitimate.
  p.label = z[1] > z[0] ? Label::impersonated : Label::legitimate;
  return p;
}

LstmState lstm_step(std::span<const double> x, const LstmState& state,
                    const ModelParams& p) {
  require(x.size() == kEmbedDim, "input vector must have 100 entries");
  require(state.h.size() == p.hidden_size && state.c.size() == p.hidden_size,
          "state size does not match hidden size");
  for (std::size_t k = 0; k < kGates; ++k) {
    require(p.W[k].rows() == p.hidden_size && p.W[k].cols() == kEmbedDim &&
                p.U[k].rows() == p.hidden_size &&
                p.U[k].cols() == p.hidden_size && p.b[k].size() == p.hidden_size,
            "gate tensor shape does not match hidden size");
  }
  std::array<std::vector<double>, kGates> gate;
  LstmState next;
  std::vector<double> tanh_c;
  cell(x, state.h, state.c, p, gate, next.c, tanh_c, next.h);
  return next;
}

std::array<double, kClasses> logits(const EncodedSequence& seq,
                                    const stylometry::StylometricVector& styl,
                                    const ModelParams& p) {
  check_inputs(seq, p);
  LstmState state = LstmState::zeros(p.hidden_size);
  for (auto idx : seq.indices) state = lstm_step(p.embedding.row(idx), state, p);
  return dense(state.h, styl, p);
}

Prediction forward(const EncodedSequence& seq,
                   const stylometry::StylometricVector& styl,
                   const ModelParams& p) {
  return predict_from_logits(logits(seq, styl, p));
}

double loss(const EncodedSequence& seq, const stylometry::StylometricVector& styl,
            Label label, const ModelParams& p) {
  const auto z = logits(seq, styl, p);
  const double m = std::max(z[0], z[1]);
  const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
  return lse - z[static_cast<std::size_t>(label)];
}

Gradients::Gradients(const ModelParams& like)
    : d(ModelParams::zeros(like.vocab_size(), like.hidden_size)) {}

void Gradients::clear() {
  for (auto r : touched_rows) {
    auto row = d.embedding.row(r);
    std::fill(row.begin(), row.end(), 0.0);
  }
  touched_rows.clear();
  d.visit([](std::string_view name, std::span<double> values) {
    if (name != "E") std::fill(values.begin(), values.end(), 0.0);
  });
}

double Gradients::squared_norm() const {
  double s = 0;
  for (auto r : touched_rows) {
    for (double v : d.embedding.row(r)) s += v * v;
  }
  d.visit([&](std::string_view name, std::span<const double> values) {
    if (name == "E") return;
    for (double v : values) s += v * v;
  });
  return s;
}

void Gradients::scale(double factor) {
  for (auto r : touched_rows) {
    for (double& v : d.embedding.row(r)) v *= factor;
  }
  d.visit([&](std::string_view name, std::span<double> values) {
    if (name == "E") return;
    for (double& v : values) v *= factor;
  });
}

StepResult backprop(const EncodedSequence& seq,
                    const stylometry::StylometricVector& styl, Label label,
                    const ModelParams& p, Gradients& g) {
  check_inputs(seq, p);
  const std::size_t hs = p.hidden_size;
  const std::size_t steps = seq.length();

  std::vector<StepCache> cache(steps);
  std::vector<double> zero(hs, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    auto& s = cache[t];
    s.token = seq.indices[t];
    const auto& h_prev = t == 0 ? zero : cache[t - 1].h;
    const auto& c_prev = t == 0 ? zero : cache[t - 1].c;
    cell(p.embedding.row(s.token), h_prev, c_prev, p, s.gate, s.c, s.tanh_c, s.h);
  }
  const std::vector<double>& h_last = steps == 0 ? zero : cache.back().h;

  StepResult result;
  const auto z = dense(h_last, styl, p);
  result.prediction = predict_from_logits(z);
  const auto& prob = result.prediction.probabilities;
  const auto y = static_cast<std::size_t>(label);
  {
    const double m = std::max(z[0], z[1]);
    result.loss = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m)) - z[y];
  }

  // Dense layer.
  std::array<double, kClasses> dz{prob[0], prob[1]};
  dz[y] -= 1.0;
  std::vector<double> dh(hs, 0.0);
  for (std::size_t k = 0; k < kClasses; ++k) {
    g.d.b_out[k] += dz[k];
    for (std::size_t j = 0; j < hs; ++j) {
      g.d.W_h(j, k) += h_last[j] * dz[k];
      dh[j] += p.W_h(j, k) * dz[k];
    }
    for (std::size_t j = 0; j < kStylDim; ++j)
      g.d.W_h(hs + j, k) += styl[j] * dz[k];
  }

  // Through time.
  std::vector<double> dc(hs, 0.0);
  std::array<std::vector<double>, kGates> da;
  for (auto& v : da) v.assign(hs, 0.0);
  std::vector<double> dh_prev(hs);
  for (std::size_t t = steps; t-- > 0;) {
    const auto& s = cache[t];
    const auto& h_prev = t == 0 ? zero : cache[t - 1].h;
    const auto& c_prev = t == 0 ? zero : cache[t - 1].c;
    const auto& gi = s.gate[kInput];
    const auto& gf = s.gate[kForget];
    const auto& go = s.gate[kOutput];
    const auto& gg = s.gate[kCandidate];
    for (std::size_t r = 0; r < hs; ++r) {
      const double d_o = dh[r] * s.tanh_c[r];
      dc[r] += dh[r] * go[r] * (1.0 - s.tanh_c[r] * s.tanh_c[r]);
      da[kInput][r] = dc[r] * gg[r] * gi[r] * (1.0 - gi[r]);
      da[kForget][r] = dc[r] * c_prev[r] * gf[r] * (1.0 - gf[r]);
      da[kOutput][r] = d_o * go[r] * (1.0 - go[r]);
      da[kCandidate][r] = dc[r] * gi[r] * (1.0 - gg[r] * gg[r]);
      dc[r] *= gf[r];
    }

    const auto x = p.embedding.row(s.token);
    auto dx = g.d.embedding.row(s.token);
    if (std::find(g.touched_rows.begin(), g.touched_rows.end(), s.token) ==
        g.touched_rows.end())
      g.touched_rows.push_back(s.token);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    for (std::size_t k = 0; k < kGates; ++k) {
      for (std::size_t r = 0; r < hs; ++r) {
        const double a = da[k][r];
        if (a == 0.0) continue;
        axpy(a, x, g.d.W[k].row(r));
        axpy(a, h_prev, g.d.U[k].row(r));
        g.d.b[k][r] += a;
        axpy(a, p.W[k].row(r), dx);
        axpy(a, p.U[k].row(r), dh_prev);
      }
    }
    dh.swap(dh_prev);
  }
  return result;
}

void apply_gradients(ModelParams& p, const Gradients& g, double lr) {
  for (auto r : g.touched_rows) axpy(-lr, g.d.embedding.row(r), p.embedding.row(r));
  std::vector<std::span<const double>> grads;
  g.d.visit([&](std::string_view, std::span<const double> v) { grads.push_back(v); });
  std::size_t i = 0;
  p.visit([&](std::string_view name, std::span<double> v) {
    const auto gv = grads[i++];
    if (name == "E") return;
    axpy(-lr, gv, v);
  });
}

}  // namespace sendgate::authmodel
