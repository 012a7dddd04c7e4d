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

#ifndef ESBQ_CONV_H_
#define ESBQ_CONV_H_

#include <cstdint>
#include <vector>

#include "esbq/esb_float.h"
#include "esbq/tensor.h"

namespace esbq {

// Convolution geometry. Feature maps are H x W x C; weights K x K x Cin x
// Cout. Pooling is off when pool_size == 0.
struct ConvSpec {
  int kernel = 1;
  int stride = 1;
  int padding = 0;  // zero padding (canonical-zero codes) on every side
  int pool_size = 0;
  int pool_stride = 0;

  bool pooling() const { return pool_size > 0; }
  // Throws ArgumentError on out-of-range fields.
  void validate() const;
};

// Output tile (T_h x T_w), input-channel tile T_n and output-channel tile
// T_m. Tiles need not divide the tensor; the last tile along each axis is
// truncated.
struct TilingConfig {
  std::uint32_t tile_h = 1;
  std::uint32_t tile_w = 1;
  std::uint32_t tile_n = 1;
  std::uint32_t tile_m = 1;

  void validate() const;
};

// Exact convolution outputs in code space (before the alpha scaling).
struct ExactTensor {
  Shape shape;
  std::vector<ExactSum> values;

  friend bool operator==(const ExactTensor&, const ExactTensor&) = default;
};

// Output H x W x Cout. Throws ShapeError on rank/channel/kernel mismatches.
Shape conv_output_shape(const Shape& input, const Shape& weights,
                        const ConvSpec& spec);

// ceil(h/T_h) * ceil(w/T_w) * ceil(c_in/T_n) * ceil(c_out/T_m) over the
// output feature map h x w.
std::uint64_t tile_trip_count(std::uint32_t out_h, std::uint32_t out_w,
                              std::uint32_t c_in, std::uint32_t c_out,
                              const TilingConfig& tiling);

// Reference loop nest, output-major. Every product goes through multiply()
// and is summed exactly. Throws ShapeError on shape mismatch and UsageError
// when the operands use different configurations.
ExactTensor conv2d_exact(const QuantizedTensor& input,
                         const QuantizedTensor& weights, const ConvSpec& spec);

// Tiled loop nest: for each output tile and output-channel tile, the
// input-channel tiles each produce a partial sum that is added into the
// output buffer.
ExactTensor conv2d_exact_tiled(const QuantizedTensor& input,
                               const QuantizedTensor& weights,
                               const ConvSpec& spec, const TilingConfig& tiling);

// scale * value, rounded once to float per element.
TensorF to_real(const ExactTensor& t, double scale);

// alpha_A * alpha_W * exact dot products.
TensorF conv2d_direct(const QuantizedTensor& input,
                      const QuantizedTensor& weights, const ConvSpec& spec);
TensorF conv2d_tiled(const QuantizedTensor& input,
                     const QuantizedTensor& weights, const ConvSpec& spec,
                     const TilingConfig& tiling);

// Max-pooling over p x p windows with stride s followed by ReLU. Output is
// ceil(h/s) x ceil(w/s) x c; windows overhanging the edge use their
// intersection with the map. Throws ArgumentError unless p, s >= 1.
TensorF maxpool_relu(const TensorF& t, int pool_size, int pool_stride);

}  // namespace esbq

#endif  // ESBQ_CONV_H_
