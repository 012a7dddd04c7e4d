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

#ifndef ESBQ_PROJECTION_H_
#define ESBQ_PROJECTION_H_

#include <span>
#include <vector>

#include "esbq/esb_float.h"
#include "esbq/quant_config.h"

namespace esbq {

// Shift-and-round projection onto the grid at alpha = 1. Operates on the
// magnitude and reapplies the sign:
//
//   m < 1:  round(m * 2^k) * 2^-k
//   m >= 1: round(m * 2^(k-n)) * 2^(n-k),   n = floor(log2 m)
//
// Ties round away from zero. Throws DomainError when |v| > C or v is not
// finite; callers clamp first.
double project_value(double v, const QuantConfig& config);

// Nearest-neighbor reference: linear scan over the symmetric grid, exact
// midpoints resolve to the larger magnitude. Same domain as project_value.
double project_oracle(double v, const QuantConfig& config);

// Same rule as project_oracle via binary search on the sorted non-negative
// grid. Used where the linear scan is too slow (Monte Carlo).
double project_lookup(double v, const QuantConfig& config);

struct ProjectionResult {
  double value = 0.0;  // alpha * grid member
  EsbCode code;
  bool clamped = false;
};

// alpha * project_value(clamp(x / alpha, -C, C)) for every element, in input
// order. Throws ArgumentError for alpha <= 0 and DataError (with the index)
// for non-finite elements.
std::vector<ProjectionResult> quantize_array(std::span<const double> data,
                                             double alpha,
                                             const QuantConfig& config);
std::vector<ProjectionResult> quantize_array(std::span<const float> data,
                                             double alpha,
                                             const QuantConfig& config);

}  // namespace esbq

#endif  // ESBQ_PROJECTION_H_
