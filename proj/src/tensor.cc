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

#include "esbq/tensor.h"

#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include "esbq/aligner.h"
#include "esbq/error.h"
#include "esbq/projection.h"

namespace esbq {

std::size_t checked_element_count(const Shape& shape) {
  if (shape.empty() || shape.size() > 4) {
    throw ShapeError("tensor rank must be 1..4, got " +
                     std::to_string(shape.size()));
  }
  std::size_t n = 1;
  for (std::uint32_t d : shape) {
    if (d == 0) throw ShapeError("tensor dims must be positive");
    n *= d;
  }
  return n;
}

TensorF::TensorF(Shape shape)
    : shape_(std::move(shape)), data_(checked_element_count(shape_), 0.0f) {}

TensorF::TensorF(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  const std::size_t n = checked_element_count(shape_);
  if (n != data_.size()) {
    throw ShapeError("shape holds " + std::to_string(n) + " elements but " +
                     std::to_string(data_.size()) + " values were given");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw DataError("non-finite tensor value at index " + std::to_string(i));
    }
  }
}

QuantizedTensor::QuantizedTensor(Shape shape, double alpha, QuantConfig config,
                                 std::vector<std::uint8_t> codes)
    : shape_(std::move(shape)),
      alpha_(alpha),
      config_(config),
      codes_(std::move(codes)) {
  const std::size_t n = checked_element_count(shape_);
  if (n != codes_.size()) {
    throw ShapeError("shape holds " + std::to_string(n) + " elements but " +
                     std::to_string(codes_.size()) + " codes were given");
  }
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw ArgumentError("quantized tensor needs a positive finite alpha");
  }
  for (std::uint8_t c : codes_) EsbCode::from_byte(c, config_);
}

std::pair<double, double> mean_std(std::span<const float> data) {
  if (data.empty()) throw ArgumentError("statistics of an empty tensor");
  double sum = 0.0;
  for (float v : data) sum += v;
  const double mu = sum / static_cast<double>(data.size());
  double sq = 0.0;
  for (float v : data) sq += (v - mu) * (v - mu);
  return {mu, std::sqrt(sq / static_cast<double>(data.size()))};
}

namespace {

TensorF affine_normalize(const TensorF& t, double mu, double sigma,
                         double epsilon) {
  TensorF out(t.shape());
  const double denom = sigma + epsilon;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = static_cast<float>((t[i] - mu) / denom);
  }
  return out;
}

}  // namespace

std::pair<TensorF, NormStats> normalize(const TensorF& t) {
  if (t.size() == 0) throw ArgumentError("cannot normalize an empty tensor");
  const auto [mu, sigma] = mean_std(t.data());
  NormStats stats;
  stats.mu = mu;
  stats.sigma = sigma;
  return {affine_normalize(t, mu, sigma, stats.epsilon), stats};
}

NormStats ema_update(const NormStats& stats, const TensorF& batch) {
  if (batch.size() == 0) throw ArgumentError("EMA update with an empty batch");
  const auto [mu_b, sigma_b] = mean_std(batch.data());
  NormStats out = stats;
  out.mu = (1.0 - stats.gamma) * stats.mu + stats.gamma * mu_b;
  out.sigma = (1.0 - stats.gamma) * stats.sigma + stats.gamma * sigma_b;
  return out;
}

TensorF normalize_inference(const TensorF& t, const NormStats& stats) {
  return affine_normalize(t, stats.mu, stats.sigma, stats.epsilon);
}

double default_alpha(const QuantConfig& config) {
  constexpr int kSlots = QuantConfig::kMaxBits + 1;
  static std::array<std::array<double, kSlots>, kSlots> cache{};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  double& slot = cache[config.bits()][config.sig()];
  if (slot == 0.0) slot = solve_alpha(config).alpha_star;
  return slot;
}

QuantizedTensor quantize_tensor(const TensorF& t, const QuantConfig& config,
                                std::optional<double> alpha) {
  const double a = alpha.value_or(default_alpha(config));
  const auto projected = quantize_array(t.data(), a, config);
  std::vector<std::uint8_t> codes(projected.size());
  for (std::size_t i = 0; i < projected.size(); ++i) {
    codes[i] = projected[i].code.to_byte();
  }
  return QuantizedTensor(t.shape(), a, config, std::move(codes));
}

TensorF dequantize(const QuantizedTensor& q) {
  TensorF out(q.shape());
  for (std::size_t i = 0; i < q.size(); ++i) {
    out[i] = static_cast<float>(q.value(i));
  }
  return out;
}

}  // namespace esbq
