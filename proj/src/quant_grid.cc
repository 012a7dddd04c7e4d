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

#include "esbq/quant_grid.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

namespace esbq {

QuantGrid::QuantGrid(QuantConfig config) : config_(config) {
  const int k = config.sig();
  const int n = config.max_exponent();
  const int frac_count = 1 << k;

  // i = 0: the subnormal run 0, 2^-k, ..., 1 - 2^-k.
  for (int f = 0; f < frac_count; ++f) {
    values_.push_back(std::ldexp(static_cast<double>(f), -k));
  }
  pot_values_.push_back(0.0);
  for (int i = 1; i <= n; ++i) {
    const int shift = i - k - 1;
    for (int f = frac_count; f < 2 * frac_count; ++f) {
      values_.push_back(std::ldexp(static_cast<double>(f), shift));
    }
    pot_values_.push_back(std::ldexp(static_cast<double>(frac_count), shift));
  }
  // The construction is already ascending and duplicate free; keep the
  // normalization so the invariant does not depend on loop order.
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

std::vector<double> QuantGrid::symmetric() const {
  std::vector<double> out;
  out.reserve(2 * values_.size() - 1);
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) {
    if (*it != 0.0) out.push_back(-*it);
  }
  out.insert(out.end(), values_.begin(), values_.end());
  return out;
}

int QuantGrid::index_of(double magnitude) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), magnitude);
  if (it == values_.end() || *it != magnitude) return -1;
  return static_cast<int>(it - values_.begin());
}

bool QuantGrid::contains(double magnitude) const {
  return index_of(magnitude) >= 0;
}

double QuantGrid::local_step(double magnitude) const {
  const int k = config_.sig();
  if (magnitude < 1.0) return std::ldexp(1.0, -k);
  const int n = std::min(std::ilogb(magnitude), config_.max_exponent() - 1);
  return std::ldexp(1.0, n - k);
}

QuantGrid build_grid(const QuantConfig& config) { return QuantGrid(config); }

namespace {

constexpr int kSlots = QuantConfig::kMaxBits + 1;

struct GridCache {
  std::array<std::array<std::unique_ptr<QuantGrid>, kSlots>, kSlots> grids;

  GridCache() {
    for (int b = QuantConfig::kMinBits; b <= QuantConfig::kMaxBits; ++b) {
      for (int k = 0; k <= b - 2; ++k) {
        grids[b][k] = std::make_unique<QuantGrid>(QuantConfig::make(b, k));
      }
    }
  }
};

}  // namespace

const QuantGrid& grid_for(const QuantConfig& config) {
  static const GridCache cache;
  return *cache.grids[config.bits()][config.sig()];
}

}  // namespace esbq
