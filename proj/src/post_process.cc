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

#include "esbq/post_process.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "esbq/error.h"
#include "esbq/projection.h"

namespace esbq {

namespace {

struct Affine {
  double a;
  double b;
};

Affine compute(const PostSourceParams& s) {
  const double denom = s.alpha_next * (s.dn_sigma + s.dn_epsilon) * s.bn_sigma;
  return {s.alpha_weights * s.alpha_input * s.bn_scale / denom,
          (s.bn_sigma * s.bn_shift - s.bn_mean * s.bn_scale -
           s.bn_sigma * s.dn_mean) /
              denom};
}

bool close(double x, double y) {
  return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
}

}  // namespace

bool FusedPostParams::consistent() const {
  const Affine r = compute(source);
  return close(r.a, a) && close(r.b, b_off);
}

FusedPostParams fuse_post_params(const PostSourceParams& source) {
  if (!(source.alpha_weights > 0.0) || !(source.alpha_input > 0.0) ||
      !(source.alpha_next > 0.0)) {
    throw ArgumentError("scaling factors must be positive");
  }
  if (source.bn_sigma == 0.0) throw ArgumentError("BatchNorm sigma is zero");
  if (source.dn_sigma + source.dn_epsilon == 0.0) {
    throw ArgumentError("normalization sigma + epsilon is zero");
  }
  const Affine r = compute(source);
  if (!std::isfinite(r.a) || !std::isfinite(r.b)) {
    throw ArgumentError("fused post-processing parameters are not finite");
  }
  return {r.a, r.b, source};
}

double apply_affine(const FusedPostParams& params, double x) {
  return params.a * x + params.b_off;
}

QuantizedTensor apply_post(const TensorF& t, const FusedPostParams& params,
                           const QuantConfig& config) {
  const double c = config.max_value();
  std::vector<std::uint8_t> codes(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = std::clamp(apply_affine(params, t[i]), -c, c);
    codes[i] = encode(project_value(y, config), config).to_byte();
  }
  return QuantizedTensor(t.shape(), params.source.alpha_next, config,
                         std::move(codes));
}

QuantizedTensor run_layer(const QuantizedTensor& input,
                          const QuantizedTensor& weights, const ConvSpec& spec,
                          const FusedPostParams& params) {
  if (!close(params.source.alpha_input, input.alpha()) ||
      !close(params.source.alpha_weights, weights.alpha())) {
    throw UsageError("fused parameters were computed for different scaling factors");
  }
  // Scale is folded into params.a, so the convolution stays in code space.
  TensorF acc = to_real(conv2d_exact(input, weights, spec), 1.0);
  if (spec.pooling()) acc = maxpool_relu(acc, spec.pool_size, spec.pool_stride);
  return apply_post(acc, params, input.config());
}

}  // namespace esbq
