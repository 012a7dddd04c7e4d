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

#include "esbq/projection.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "esbq/error.h"
#include "esbq/parallel.h"
#include "esbq/quant_grid.h"

namespace esbq {

namespace {

void check_domain(double v, const QuantConfig& config) {
  if (!std::isfinite(v) || std::fabs(v) > config.max_value()) {
    throw DomainError("projection input " + std::to_string(v) +
                      " outside [-C, C] with C=" +
                      std::to_string(config.max_value()) + " for " +
                      config.name());
  }
}

double with_sign(double magnitude, double like) {
  if (magnitude == 0.0) return 0.0;
  return std::signbit(like) ? -magnitude : magnitude;
}

template <typename T>
std::vector<ProjectionResult> quantize_impl(std::span<const T> data,
                                            double alpha,
                                            const QuantConfig& config) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ArgumentError("scaling factor alpha must be positive and finite, got " +
                        std::to_string(alpha));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(static_cast<double>(data[i]))) {
      throw DataError("non-finite input at index " + std::to_string(i));
    }
  }
  const double c = config.max_value();
  std::vector<ProjectionResult> out(data.size());
  parallel_for(data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double scaled = static_cast<double>(data[i]) / alpha;
      const double clipped = std::clamp(scaled, -c, c);
      const double p = project_value(clipped, config);
      out[i].value = alpha * p;
      out[i].code = encode(p, config);
      out[i].clamped = std::fabs(scaled) > c;
    }
  });
  return out;
}

}  // namespace

double project_value(double v, const QuantConfig& config) {
  check_domain(v, config);
  const int k = config.sig();
  const double m = std::fabs(v);
  double q;
  if (m < 1.0) {
    q = std::ldexp(std::round(std::ldexp(m, k)), -k);
  } else {
    const int n = std::ilogb(m);
    q = std::ldexp(std::round(std::ldexp(m, k - n)), n - k);
  }
  return with_sign(q, v);
}

double project_oracle(double v, const QuantConfig& config) {
  check_domain(v, config);
  const std::vector<double> grid = grid_for(config).symmetric();
  double best = grid.front();
  double best_dist = std::fabs(v - best);
  for (double q : grid) {
    const double d = std::fabs(v - q);
    if (d < best_dist || (d == best_dist && std::fabs(q) > std::fabs(best))) {
      best = q;
      best_dist = d;
    }
  }
  return best == 0.0 ? 0.0 : best;
}

double project_lookup(double v, const QuantConfig& config) {
  check_domain(v, config);
  const auto values = grid_for(config).values();
  const double m = std::fabs(v);
  auto hi = std::upper_bound(values.begin(), values.end(), m);
  if (hi == values.end()) return with_sign(values.back(), v);
  auto lo = hi - 1;
  const double q = (m - *lo < *hi - m) ? *lo : *hi;
  return with_sign(q, v);
}

std::vector<ProjectionResult> quantize_array(std::span<const double> data,
                                             double alpha,
                                             const QuantConfig& config) {
  return quantize_impl(data, alpha, config);
}

std::vector<ProjectionResult> quantize_array(std::span<const float> data,
                                             double alpha,
                                             const QuantConfig& config) {
  return quantize_impl(data, alpha, config);
}

}  // namespace esbq
