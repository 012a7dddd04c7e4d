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

#ifndef ESBQ_QUANT_GRID_H_
#define ESBQ_QUANT_GRID_H_

#include <span>
#include <vector>

#include "esbq/quant_config.h"

namespace esbq {

// The non-negative half of the ESB value set at alpha = 1, built as the union
// of shifted fraction sets xi_i * Omega_i for i = 0..N:
//
//   Omega_0 = {0, ..., 2^k - 1},            xi_0 = 2^-k
//   Omega_i = {2^k, ..., 2^(k+1) - 1},      xi_i = 2^(i-k-1)   (i > 0)
//
// Every value is a small dyadic rational and is stored exactly as a double.
class QuantGrid {
 public:
  explicit QuantGrid(QuantConfig config);

  const QuantConfig& config() const { return config_; }

  // Sorted ascending, values()[0] == 0, size 2^(b-1).
  std::span<const double> values() const { return values_; }
  // PoT anchors: 0 followed by 2^k * xi_i for i = 1..N.
  std::span<const double> pot_values() const { return pot_values_; }
  double subnormal_step() const { return config_.subnormal_step(); }
  double max_value() const { return values_.back(); }

  // Full symmetric grid, ascending, zero counted once (2^b - 1 entries).
  std::vector<double> symmetric() const;

  bool contains(double magnitude) const;
  // Index of an exact member of values(), or -1.
  int index_of(double magnitude) const;

  // Shift factor xi_i of the fraction set the magnitude falls in: 2^-k below
  // 1, otherwise 2^(n-k) with n = floor(log2 m). Magnitudes above C report
  // xi_N.
  double local_step(double magnitude) const;

 private:
  QuantConfig config_;
  std::vector<double> values_;
  std::vector<double> pot_values_;
};

// Computes the grid from scratch.
QuantGrid build_grid(const QuantConfig& config);

// Cached, immutable grid for a configuration. Safe to call from any thread.
const QuantGrid& grid_for(const QuantConfig& config);

}  // namespace esbq

#endif  // ESBQ_QUANT_GRID_H_
