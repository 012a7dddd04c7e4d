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

#ifndef ESBQ_TENSOR_H_
#define ESBQ_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "esbq/esb_float.h"
#include "esbq/quant_config.h"

namespace esbq {

using Shape = std::vector<std::uint32_t>;

// Number of elements of a shape. Throws ShapeError for rank 0, rank > 4 or
// zero-sized dims.
std::size_t checked_element_count(const Shape& shape);

// Dense row-major float tensor. Feature maps are H x W x C, convolution
// weights K x K x Cin x Cout.
class TensorF {
 public:
  TensorF() = default;
  // Zero-filled.
  explicit TensorF(Shape shape);
  // Throws ShapeError on a size mismatch and DataError on non-finite data.
  TensorF(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }

  float operator[](std::size_t i) const { return data_[i]; }
  float& operator[](std::size_t i) { return data_[i]; }

  friend bool operator==(const TensorF&, const TensorF&) = default;

 private:
  Shape shape_;
  std::vector<float> data_;
};

// ESB codes (one byte each) sharing one per-tensor scaling factor. Element j
// dequantizes to alpha * decode(code(j)).
class QuantizedTensor {
 public:
  QuantizedTensor(Shape shape, double alpha, QuantConfig config,
                  std::vector<std::uint8_t> codes);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return codes_.size(); }
  double alpha() const { return alpha_; }
  const QuantConfig& config() const { return config_; }
  std::span<const std::uint8_t> code_bytes() const { return codes_; }

  EsbCode code(std::size_t i) const {
    return EsbCode::from_byte(codes_[i], config_);
  }
  // Grid member (alpha = 1) of element i.
  double grid_value(std::size_t i) const { return decode(code(i)); }
  double value(std::size_t i) const { return alpha_ * grid_value(i); }

  friend bool operator==(const QuantizedTensor&,
                         const QuantizedTensor&) = default;

 private:
  Shape shape_;
  double alpha_;
  QuantConfig config_;
  std::vector<std::uint8_t> codes_;
};

// Running statistics for data normalization.
struct NormStats {
  static constexpr double kEpsilon = 1e-7;

  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 0.9;  // EMA momentum, typically 0.9 or 0.99
  double epsilon = kEpsilon;
};

// Mean and population standard deviation.
std::pair<double, double> mean_std(std::span<const float> data);

// (t - mu) / (sigma + eps) with the tensor's own statistics. The returned
// stats carry those statistics and the default momentum. Throws
// ArgumentError for an empty tensor.
std::pair<TensorF, NormStats> normalize(const TensorF& t);

// mu <- (1 - gamma) mu + gamma mu_batch, likewise for sigma.
NormStats ema_update(const NormStats& stats, const TensorF& batch);

// (t - mu) / (sigma + eps) with stored statistics.
TensorF normalize_inference(const TensorF& t, const NormStats& stats);

// Cached alpha* (first-local-minimum policy) for the configuration.
double default_alpha(const QuantConfig& config);

// Projects and encodes every element. alpha defaults to default_alpha(),
// which assumes the caller normalized the tensor.
QuantizedTensor quantize_tensor(const TensorF& t, const QuantConfig& config,
                                std::optional<double> alpha = std::nullopt);

TensorF dequantize(const QuantizedTensor& q);

}  // namespace esbq

#endif  // ESBQ_TENSOR_H_
