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

#include "esbq/conv.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "esbq/error.h"

namespace esbq {

namespace {

// Decoded operands, so the loop nests do not re-parse bytes.
std::vector<EsbCode> unpack(const QuantizedTensor& t) {
  std::vector<EsbCode> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t.code(i);
  return out;
}

struct Geometry {
  int in_h, in_w, c_in, c_out, k, out_h, out_w;
};

Geometry check_operands(const QuantizedTensor& input,
                        const QuantizedTensor& weights, const ConvSpec& spec) {
  spec.validate();
  if (input.config() != weights.config()) {
    throw UsageError("input is " + input.config().name() + " but weights are " +
                     weights.config().name());
  }
  const Shape out = conv_output_shape(input.shape(), weights.shape(), spec);
  return {static_cast<int>(input.shape()[0]), static_cast<int>(input.shape()[1]),
          static_cast<int>(input.shape()[2]), static_cast<int>(out[2]),
          spec.kernel, static_cast<int>(out[0]), static_cast<int>(out[1])};
}

// Exact sum over input channels [ci_begin, ci_end) for one output element.
ExactSum dot(const std::vector<EsbCode>& in, const std::vector<EsbCode>& w,
             const Geometry& g, const ConvSpec& spec, int oy, int ox, int co,
             int ci_begin, int ci_end) {
  ExactSum sum;
  for (int ky = 0; ky < g.k; ++ky) {
    const int iy = oy * spec.stride + ky - spec.padding;
    if (iy < 0 || iy >= g.in_h) continue;  // zero padding
    for (int kx = 0; kx < g.k; ++kx) {
      const int ix = ox * spec.stride + kx - spec.padding;
      if (ix < 0 || ix >= g.in_w) continue;
      for (int ci = ci_begin; ci < ci_end; ++ci) {
        const auto& a = in[(static_cast<std::size_t>(iy) * g.in_w + ix) * g.c_in + ci];
        const auto& b =
            w[((static_cast<std::size_t>(ky) * g.k + kx) * g.c_in + ci) * g.c_out + co];
        sum.add(multiply(a, b));
      }
    }
  }
  return sum;
}

}  // namespace

void ConvSpec::validate() const {
  if (kernel < 1 || stride < 1 || padding < 0) {
    throw ArgumentError("convolution needs kernel >= 1, stride >= 1, padding >= 0");
  }
  if (pool_size < 0 || (pool_size > 0 && pool_stride < 1)) {
    throw ArgumentError("pooling needs pool size and stride >= 1");
  }
}

void TilingConfig::validate() const {
  if (tile_h < 1 || tile_w < 1 || tile_n < 1 || tile_m < 1) {
    throw ArgumentError("tile sizes must all be >= 1");
  }
}

Shape conv_output_shape(const Shape& input, const Shape& weights,
                        const ConvSpec& spec) {
  spec.validate();
  if (input.size() != 3) {
    throw ShapeError("input feature map must be H x W x C, got rank " +
                     std::to_string(input.size()));
  }
  if (weights.size() != 4) {
    throw ShapeError("weights must be K x K x Cin x Cout, got rank " +
                     std::to_string(weights.size()));
  }
  if (weights[0] != weights[1] || static_cast<int>(weights[0]) != spec.kernel) {
    throw ShapeError("weight kernel " + std::to_string(weights[0]) + "x" +
                     std::to_string(weights[1]) + " does not match K=" +
                     std::to_string(spec.kernel));
  }
  if (weights[2] != input[2]) {
    throw ShapeError("input has " + std::to_string(input[2]) +
                     " channels but weights expect " + std::to_string(weights[2]));
  }
  const long padded_h = static_cast<long>(input[0]) + 2L * spec.padding;
  const long padded_w = static_cast<long>(input[1]) + 2L * spec.padding;
  if (padded_h < spec.kernel || padded_w < spec.kernel) {
    throw ShapeError("kernel larger than the padded input");
  }
  return {static_cast<std::uint32_t>((padded_h - spec.kernel) / spec.stride + 1),
          static_cast<std::uint32_t>((padded_w - spec.kernel) / spec.stride + 1),
          weights[3]};
}

std::uint64_t tile_trip_count(std::uint32_t out_h, std::uint32_t out_w,
                              std::uint32_t c_in, std::uint32_t c_out,
                              const TilingConfig& tiling) {
  tiling.validate();
  auto ceil_div = [](std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; };
  return ceil_div(out_h, tiling.tile_h) * ceil_div(out_w, tiling.tile_w) *
         ceil_div(c_in, tiling.tile_n) * ceil_div(c_out, tiling.tile_m);
}

ExactTensor conv2d_exact(const QuantizedTensor& input,
                         const QuantizedTensor& weights, const ConvSpec& spec) {
  const Geometry g = check_operands(input, weights, spec);
  const auto in = unpack(input);
  const auto w = unpack(weights);
  ExactTensor out;
  out.shape = {static_cast<std::uint32_t>(g.out_h),
               static_cast<std::uint32_t>(g.out_w),
               static_cast<std::uint32_t>(g.c_out)};
  out.values.reserve(static_cast<std::size_t>(g.out_h) * g.out_w * g.c_out);
  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      for (int co = 0; co < g.c_out; ++co) {
        out.values.push_back(dot(in, w, g, spec, oy, ox, co, 0, g.c_in).normalized());
      }
    }
  }
  return out;
}

ExactTensor conv2d_exact_tiled(const QuantizedTensor& input,
                               const QuantizedTensor& weights,
                               const ConvSpec& spec, const TilingConfig& tiling) {
  tiling.validate();
  const Geometry g = check_operands(input, weights, spec);
  const auto in = unpack(input);
  const auto w = unpack(weights);
  ExactTensor out;
  out.shape = {static_cast<std::uint32_t>(g.out_h),
               static_cast<std::uint32_t>(g.out_w),
               static_cast<std::uint32_t>(g.c_out)};
  out.values.assign(static_cast<std::size_t>(g.out_h) * g.out_w * g.c_out, ExactSum());

  const int th = static_cast<int>(tiling.tile_h);
  const int tw = static_cast<int>(tiling.tile_w);
  const int tn = static_cast<int>(tiling.tile_n);
  const int tm = static_cast<int>(tiling.tile_m);
  for (int y0 = 0; y0 < g.out_h; y0 += th) {
    const int y1 = std::min(y0 + th, g.out_h);
    for (int x0 = 0; x0 < g.out_w; x0 += tw) {
      const int x1 = std::min(x0 + tw, g.out_w);
      for (int m0 = 0; m0 < g.c_out; m0 += tm) {
        const int m1 = std::min(m0 + tm, g.c_out);
        for (int n0 = 0; n0 < g.c_in; n0 += tn) {
          const int n1 = std::min(n0 + tn, g.c_in);
          // One small convolution: T_h x T_w x T_n inputs -> T_h x T_w x T_m
          // partial outputs.
          for (int oy = y0; oy < y1; ++oy) {
            for (int ox = x0; ox < x1; ++ox) {
              for (int co = m0; co < m1; ++co) {
                const std::size_t idx =
                    (static_cast<std::size_t>(oy) * g.out_w + ox) * g.c_out + co;
                out.values[idx].add(dot(in, w, g, spec, oy, ox, co, n0, n1));
              }
            }
          }
        }
      }
    }
  }
  for (auto& v : out.values) v = v.normalized();
  return out;
}

TensorF to_real(const ExactTensor& t, double scale) {
  std::vector<float> data(t.values.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = static_cast<float>(scale * t.values[i].to_double());
    if (!std::isfinite(data[i])) {
      throw DataError("convolution output at index " + std::to_string(i) +
                      " overflows float32; the exact accumulator holds it");
    }
  }
  return TensorF(t.shape, std::move(data));
}

TensorF conv2d_direct(const QuantizedTensor& input,
                      const QuantizedTensor& weights, const ConvSpec& spec) {
  return to_real(conv2d_exact(input, weights, spec),
                 input.alpha() * weights.alpha());
}

TensorF conv2d_tiled(const QuantizedTensor& input,
                     const QuantizedTensor& weights, const ConvSpec& spec,
                     const TilingConfig& tiling) {
  return to_real(conv2d_exact_tiled(input, weights, spec, tiling),
                 input.alpha() * weights.alpha());
}

TensorF maxpool_relu(const TensorF& t, int pool_size, int pool_stride) {
  if (pool_size < 1 || pool_stride < 1) {
    throw ArgumentError("max-pooling needs p >= 1 and s >= 1");
  }
  if (t.rank() != 3) {
    throw ShapeError("max-pooling expects an H x W x C tensor");
  }
  const int h = static_cast<int>(t.shape()[0]);
  const int w = static_cast<int>(t.shape()[1]);
  const int c = static_cast<int>(t.shape()[2]);
  const int out_h = (h + pool_stride - 1) / pool_stride;
  const int out_w = (w + pool_stride - 1) / pool_stride;
  TensorF out({static_cast<std::uint32_t>(out_h), static_cast<std::uint32_t>(out_w),
               static_cast<std::uint32_t>(c)});
  for (int oy = 0; oy < out_h; ++oy) {
    const int y0 = oy * pool_stride;
    const int y1 = std::min(y0 + pool_size, h);
    for (int ox = 0; ox < out_w; ++ox) {
      const int x0 = ox * pool_stride;
      const int x1 = std::min(x0 + pool_size, w);
      for (int ch = 0; ch < c; ++ch) {
        // Every window holds at least its top-left element since y0 < h.
        float best = t[(static_cast<std::size_t>(y0) * w + x0) * c + ch];
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) {
            best = std::max(best, t[(static_cast<std::size_t>(y) * w + x) * c + ch]);
          }
        }
        out[(static_cast<std::size_t>(oy) * out_w + ox) * c + ch] =
            best > 0.0f ? best : 0.0f;
      }
    }
  }
  return out;
}

}  // namespace esbq
