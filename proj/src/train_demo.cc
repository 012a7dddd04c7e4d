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

#include "esbq/train_demo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "esbq/projection.h"

namespace esbq {

namespace {

struct Quantizer {
  QuantizerMode mode;
  QuantConfig config;
  double alpha;
  double limit;  // alpha * C

  Quantizer(QuantizerMode m, const QuantConfig& c)
      : mode(m), config(c), alpha(default_alpha(c)), limit(alpha * c.max_value()) {}

  double forward(double x) const {
    if (!std::isfinite(x)) return x;  // surfaces as a non-finite loss
    switch (mode) {
      case QuantizerMode::kEsb: {
        const double cmax = config.max_value();
        return alpha * project_value(std::clamp(x / alpha, -cmax, cmax), config);
      }
      case QuantizerMode::kClipIdentity:
        return std::clamp(x, -limit, limit);
      case QuantizerMode::kFullPrecision:
        return x;
    }
    return x;
  }

  // Straight-through gradient: identity inside the clamp range.
  double pass(double x) const {
    if (mode == QuantizerMode::kFullPrecision) return 1.0;
    return std::fabs(x) <= limit ? 1.0 : 0.0;
  }
};

struct Normalized {
  std::vector<double> values;
  double mu = 0.0;
  double sigma = 0.0;
};

Normalized normalize_all(const std::vector<double>& x) {
  Normalized out;
  const double n = static_cast<double>(x.size());
  out.mu = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : x) sq += (v - out.mu) * (v - out.mu);
  out.sigma = std::sqrt(sq / n);
  const double denom = out.sigma + NormStats::kEpsilon;
  out.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = (x[i] - out.mu) / denom;
  return out;
}

// Gradient of L w.r.t. x given g = dL/d((x - mu) / (sigma + eps)), with mu
// and the population sigma both functions of x.
std::vector<double> normalize_backward(const std::vector<double>& x,
                                       const std::vector<double>& g,
                                       const Normalized& n) {
  const double d = static_cast<double>(x.size());
  const double s = n.sigma + NormStats::kEpsilon;
  const double g_mean = std::accumulate(g.begin(), g.end(), 0.0) / d;
  double g_dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) g_dot += g[i] * (x[i] - n.mu);
  const double coupling = n.sigma > 0.0 ? g_dot / (d * n.sigma * s * s) : 0.0;
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = (g[j] - g_mean) / s - (x[j] - n.mu) * coupling;
  }
  return out;
}

// Normalize then quantize a flat tensor; keeps what backward needs.
struct QuantStage {
  std::vector<double> raw;
  Normalized norm;
  std::vector<double> quantized;

  QuantStage(std::vector<double> x, const Quantizer& q) : raw(std::move(x)) {
    norm = normalize_all(raw);
    quantized.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      quantized[i] = q.forward(norm.values[i]);
    }
  }

  std::vector<double> backward(const std::vector<double>& g_quantized,
                               const Quantizer& q) const {
    std::vector<double> g_norm(g_quantized.size());
    for (std::size_t i = 0; i < g_norm.size(); ++i) {
      g_norm[i] = g_quantized[i] * q.pass(norm.values[i]);
    }
    return normalize_backward(raw, g_norm, norm);
  }
};

// out (n x m) = a (n x k) * b (k x m), all flat row-major.
std::vector<double> matmul(const std::vector<double>& a,
                           const std::vector<double>& b, std::size_t n,
                           std::size_t k, std::size_t m) {
  std::vector<double> out(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += av * b[p * m + j];
    }
  }
  return out;
}

struct ForwardPass {
  QuantStage input;
  QuantStage w1;
  std::vector<double> pre;  // batch x hidden
  QuantStage act;
  QuantStage w2;
  std::vector<double> logits;  // batch x outputs
};

}  // namespace

Dataset make_blobs(std::size_t n, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset out;
  out.features = Matrix(n, 2);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double center = label ? 1.5 : -1.5;
    double x;
    double y;
    do {
      x = center + noise(rng);
      y = center + noise(rng);
      // Signed distance to x + y = 0 must agree with the label by `margin`.
    } while ((label ? 1.0 : -1.0) * (x + y) / std::sqrt(2.0) < margin);
    out.features.at(i, 0) = x;
    out.features.at(i, 1) = y;
    out.labels[i] = label;
  }
  return out;
}

QuantMlp::QuantMlp(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                   std::uint64_t seed)
    : hidden_(inputs, hidden), output_(hidden, outputs) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s1 = std::sqrt(2.0 / static_cast<double>(inputs));
  const double s2 = std::sqrt(2.0 / static_cast<double>(hidden));
  for (double& w : hidden_.data) w = s1 * normal(rng);
  for (double& w : output_.data) w = s2 * normal(rng);
}

namespace {

ForwardPass run_forward(const Matrix& x, const Matrix& w1, const Matrix& w2,
                        const Quantizer& q) {
  const std::size_t batch = x.rows;
  const std::size_t in = w1.rows;
  const std::size_t hid = w1.cols;
  const std::size_t out = w2.cols;
  if (x.cols != in) throw ShapeError("input width does not match the network");

  QuantStage input(x.data, q);
  QuantStage qw1(w1.data, q);
  std::vector<double> pre = matmul(input.quantized, qw1.quantized, batch, in, hid);
  std::vector<double> relu(pre.size());
  // Written so NaN passes through and divergence stays visible.
  for (std::size_t i = 0; i < pre.size(); ++i) relu[i] = pre[i] < 0.0 ? 0.0 : pre[i];
  QuantStage act(std::move(relu), q);
  QuantStage qw2(w2.data, q);
  std::vector<double> logits = matmul(act.quantized, qw2.quantized, batch, hid, out);
  return {std::move(input), std::move(qw1), std::move(pre),
          std::move(act),   std::move(qw2), std::move(logits)};
}

}  // namespace

double QuantMlp::loss(const Matrix& x, const std::vector<int>& labels,
                      QuantizerMode mode, const QuantConfig& config,
                      Gradients* grads, BatchStats* stats) const {
  if (x.rows == 0 || labels.size() != x.rows) {
    throw ArgumentError("batch must be non-empty with one label per row");
  }
  const Quantizer q(mode, config);
  const ForwardPass f = run_forward(x, hidden_, output_, q);
  const std::size_t batch = x.rows;
  const std::size_t in = hidden_.rows;
  const std::size_t hid = hidden_.cols;
  const std::size_t out = output_.cols;

  if (stats) {
    stats->mu[0] = f.input.norm.mu;
    stats->sigma[0] = f.input.norm.sigma;
    stats->mu[1] = f.act.norm.mu;
    stats->sigma[1] = f.act.norm.sigma;
  }

  double total = 0.0;
  std::vector<double> g_logits(batch * out);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* z = &f.logits[i * out];
    const double zmax = *std::max_element(z, z + out);
    double denom = 0.0;
    for (std::size_t j = 0; j < out; ++j) denom += std::exp(z[j] - zmax);
    const auto label = static_cast<std::size_t>(labels[i]);
    total += std::log(denom) - (z[label] - zmax);
    for (std::size_t j = 0; j < out; ++j) {
      const double p = std::exp(z[j] - zmax) / denom;
      g_logits[i * out + j] = (p - (j == label ? 1.0 : 0.0)) / static_cast<double>(batch);
    }
  }
  const double mean_loss = total / static_cast<double>(batch);
  if (!grads) return mean_loss;

  // logits = act_q * w2_q
  std::vector<double> g_w2q(hid * out, 0.0);
  std::vector<double> g_actq(batch * hid, 0.0);
  for (std::size_t i = 0; i < batch; ++i) {
    for (std::size_t h = 0; h < hid; ++h) {
      for (std::size_t j = 0; j < out; ++j) {
        const double g = g_logits[i * out + j];
        g_w2q[h * out + j] += f.act.quantized[i * hid + h] * g;
        g_actq[i * hid + h] += f.w2.quantized[h * out + j] * g;
      }
    }
  }
  grads->output = Matrix(hid, out);
  grads->output.data = f.w2.backward(g_w2q, q);

  std::vector<double> g_pre = f.act.backward(g_actq, q);
  for (std::size_t i = 0; i < g_pre.size(); ++i) {
    if (!(f.pre[i] > 0.0)) g_pre[i] = 0.0;
  }
  // pre = input_q * w1_q
  std::vector<double> g_w1q(in * hid, 0.0);
  for (std::size_t i = 0; i < batch; ++i) {
    for (std::size_t p = 0; p < in; ++p) {
      const double a = f.input.quantized[i * in + p];
      for (std::size_t h = 0; h < hid; ++h) g_w1q[p * hid + h] += a * g_pre[i * hid + h];
    }
  }
  grads->hidden = Matrix(in, hid);
  grads->hidden.data = f.w1.backward(g_w1q, q);
  return mean_loss;
}

std::vector<int> QuantMlp::predict(const Matrix& x, QuantizerMode mode,
                                   const QuantConfig& config) const {
  const Quantizer q(mode, config);
  const ForwardPass f = run_forward(x, hidden_, output_, q);
  const std::size_t out = output_.cols;
  std::vector<int> labels(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* z = &f.logits[i * out];
    labels[i] = static_cast<int>(std::max_element(z, z + out) - z);
  }
  return labels;
}

void QuantMlp::step(const Gradients& grads, double learning_rate) {
  for (std::size_t i = 0; i < hidden_.data.size(); ++i) {
    hidden_.data[i] -= learning_rate * grads.hidden.data[i];
  }
  for (std::size_t i = 0; i < output_.data.size(); ++i) {
    output_.data[i] -= learning_rate * grads.output.data[i];
  }
}

TrainResult train_demo(const Dataset& data, const QuantConfig& config,
                       const TrainOptions& options) {
  const std::size_t n = data.features.rows;
  if (n == 0 || options.batch_size == 0 || options.epochs < 0) {
    throw ArgumentError("training needs data, a positive batch size and epochs >= 0");
  }
  QuantMlp net(data.features.cols, options.hidden, 2, options.seed);
  std::mt19937_64 rng(options.seed ^ 0x5eedf00dULL);

  TrainResult result;
  result.activation_stats.assign(2, NormStats{});
  for (auto& s : result.activation_stats) s.gamma = options.momentum;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += options.batch_size) {
      const std::size_t end = std::min(n, start + options.batch_size);
      Matrix xb(end - start, data.features.cols);
      std::vector<int> yb(end - start);
      for (std::size_t r = start; r < end; ++r) {
        for (std::size_t c = 0; c < xb.cols; ++c) {
          xb.at(r - start, c) = data.features.at(order[r], c);
        }
        yb[r - start] = data.labels[order[r]];
      }
      QuantMlp::Gradients grads;
      QuantMlp::BatchStats stats;
      net.loss(xb, yb, options.mode, config, &grads, &stats);
      net.step(grads, options.learning_rate);
      for (int l = 0; l < 2; ++l) {
        NormStats& s = result.activation_stats[l];
        s.mu = (1.0 - s.gamma) * s.mu + s.gamma * stats.mu[l];
        s.sigma = (1.0 - s.gamma) * s.sigma + s.gamma * stats.sigma[l];
      }
    }

    EpochStats e;
    e.epoch = epoch;
    e.loss = net.loss(data.features, data.labels, options.mode, config);
    const auto predicted = net.predict(data.features, options.mode, config);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += predicted[i] == data.labels[i];
    e.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    result.trace.push_back(e);
    if (!std::isfinite(e.loss)) {
      throw TrainingDivergence("loss diverged at epoch " + std::to_string(epoch),
                               result.trace);
    }
  }
  return result;
}

}  // namespace esbq
