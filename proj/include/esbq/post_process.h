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

#ifndef ESBQ_POST_PROCESS_H_
#define ESBQ_POST_PROCESS_H_

#include "esbq/conv.h"
#include "esbq/quant_config.h"
#include "esbq/tensor.h"

namespace esbq {

// Constants of the stages that follow a quantized convolution:
// Scale (alpha_W * alpha_A), BatchNorm, data normalization and the division
// by the next layer's scaling factor.
struct PostSourceParams {
  double alpha_weights = 1.0;
  double alpha_input = 1.0;
  double alpha_next = 1.0;
  double bn_scale = 1.0;  // lambda
  double bn_shift = 0.0;  // beta
  double bn_mean = 0.0;
  double bn_sigma = 1.0;  // BN denominator, used as is
  double dn_mean = 0.0;
  double dn_sigma = 1.0;  // population std; epsilon is added on use
  double dn_epsilon = NormStats::kEpsilon;
};

// DN(BN(Scale(x))) / alpha_next collapsed into a * x + b_off.
struct FusedPostParams {
  double a = 1.0;
  double b_off = 0.0;
  PostSourceParams source;

  // a and b_off recomputed from source agree with the stored values to
  // 1e-12 relative.
  bool consistent() const;
};

// Throws ArgumentError when a denominator (alpha_next, bn_sigma,
// dn_sigma + epsilon) is zero or a scaling factor is not positive.
FusedPostParams fuse_post_params(const PostSourceParams& source);

double apply_affine(const FusedPostParams& params, double x);

// a * x + b_off per element, then clamp to [-C, C], project and encode in
// code space. The result carries alpha_next as its scaling factor.
QuantizedTensor apply_post(const TensorF& t, const FusedPostParams& params,
                           const QuantConfig& config);

// conv (code space) -> optional max-pool & ReLU -> fused post-processing.
QuantizedTensor run_layer(const QuantizedTensor& input,
                          const QuantizedTensor& weights, const ConvSpec& spec,
                          const FusedPostParams& params);

}  // namespace esbq

#endif  // ESBQ_POST_PROCESS_H_
