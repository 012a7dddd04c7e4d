// Copyright 2026 The ESBQ Authors. All Rights Reserved.
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

#ifndef ESBQ_TRAIN_DEMO_H_
#define ESBQ_TRAIN_DEMO_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "esbq/error.h"
#include "esbq/quant_config.h"
#include "esbq/tensor.h"

namespace esbq {

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Two-class synthetic data: Gaussian blobs around (-1.5, -1.5) and
// (1.5, 1.5); points closer than `margin` to the separating line x + y = 0
// are redrawn, so the set is linearly separable.
struct Dataset {
  Matrix features;  // n x 2
  std::vector<int> labels;
};

Dataset make_blobs(std::size_t n, std::uint64_t seed, double margin = 0.5);

enum class QuantizerMode {
  kEsb,           // alpha * P(clamp(x / alpha)), straight-through gradient
  kClipIdentity,  // clamp(x, -alpha*C, alpha*C): the STE surrogate
  kFullPrecision  // no quantization
};

// 2 -> hidden -> 2 perceptron trained with ESB quantization. Each layer
// normalizes and quantizes its input activations and its weights before the
// product; the logits stay unquantized. Backward treats the quantizer as
// identity inside the clamp range and zero outside.
class QuantMlp {
 public:
  struct Gradients {
    Matrix hidden;
    Matrix output;
  };

  // Per-layer statistics of the activations entering each layer, as used by
  // the normalization in the forward pass.
  struct BatchStats {
    double mu[2] = {0.0, 0.0};
    double sigma[2] = {1.0, 1.0};
  };

  QuantMlp(std::size_t inputs, std::size_t hidden, std::size_t outputs,
           std::uint64_t seed);

  // Mean softmax cross-entropy over the batch using the batch's own
  // normalization statistics. Fills grads and stats when given.
  double loss(const Matrix& x, const std::vector<int>& labels,
              QuantizerMode mode, const QuantConfig& config,
              Gradients* grads = nullptr, BatchStats* stats = nullptr) const;

  // Argmax of the logits, batch statistics.
  std::vector<int> predict(const Matrix& x, QuantizerMode mode,
                           const QuantConfig& config) const;

  void step(const Gradients& grads, double learning_rate);

  Matrix& hidden_weights() { return hidden_; }
  Matrix& output_weights() { return output_; }
  const Matrix& hidden_weights() const { return hidden_; }
  const Matrix& output_weights() const { return output_; }

 private:
  Matrix hidden_;  // inputs x hidden
  Matrix output_;  // hidden x outputs
};

struct TrainOptions {
  int epochs = 50;
  double learning_rate = 0.05;
  std::uint64_t seed = 7;
  std::size_t hidden = 16;
  std::size_t batch_size = 32;
  double momentum = 0.9;  // EMA momentum gamma for activation statistics
  QuantizerMode mode = QuantizerMode::kEsb;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> trace;
  // EMA statistics of each layer's input activations, for inference.
  std::vector<NormStats> activation_stats;
};

// Raised when the loss stops being finite; carries the trace so far.
class TrainingDivergence : public TrainingError {
 public:
  TrainingDivergence(const std::string& what, std::vector<EpochStats> trace)
      : TrainingError(what), trace_(std::move(trace)) {}
  const std::vector<EpochStats>& trace() const { return trace_; }

 private:
  std::vector<EpochStats> trace_;
};

// Mini-batch SGD on shadow full-precision weights. After every epoch the
// loss and accuracy are evaluated on the whole dataset (one batch), so the
// trace is deterministic for a given seed.
TrainResult train_demo(const Dataset& data, const QuantConfig& config,
                       const TrainOptions& options);

}  // namespace esbq

#endif  // ESBQ_TRAIN_DEMO_H_
