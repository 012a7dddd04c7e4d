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

#ifndef ESBQ_QUANT_CONFIG_H_
#define ESBQ_QUANT_CONFIG_H_

#include <compare>
#include <string>
#include <string_view>

namespace esbq {

enum class GridAlias { kTernary, kPoT, kFixed, kESB };

std::string_view alias_name(GridAlias alias);

// The (b, k) pair of an ESB quantizer: b total bits, at most k+1 significant
// bits per value. Always valid once constructed; use make() to build one.
//
//   2 <= b <= 8,  0 <= k <= b-2  (so at least one exponent bit remains)
class QuantConfig {
 public:
  static constexpr int kMinBits = 2;
  static constexpr int kMaxBits = 8;

  // Throws ConfigError naming the violated bound.
  static QuantConfig make(int bits, int sig);

  int bits() const { return bits_; }
  int sig() const { return sig_; }

  int exponent_bits() const { return bits_ - sig_ - 1; }
  // N = 2^(b-k-1) - 1: index of the last shifted fraction set. Also the
  // exponent field value reserved for the subnormal range.
  int max_exponent() const { return (1 << exponent_bits()) - 1; }
  // C = 2^(N-1) * (2 - 2^-k), the largest grid magnitude at alpha = 1.
  double max_value() const;
  // 2^-k, the uniform step below 1.
  double subnormal_step() const;
  // 2^b - 1 distinct values in the symmetric grid.
  int symmetric_size() const { return (1 << bits_) - 1; }

  GridAlias alias() const;
  // Configurations with b-k > 4 behave like ESB(b-1, k) while spending an
  // extra bit; they are accepted but flagged.
  bool recommended() const { return bits_ - sig_ <= 4; }

  std::string name() const;

  friend auto operator<=>(const QuantConfig&, const QuantConfig&) = default;

 private:
  QuantConfig(int bits, int sig) : bits_(bits), sig_(sig) {}

  int bits_;
  int sig_;
};

inline GridAlias alias_of(const QuantConfig& config) { return config.alias(); }

}  // namespace esbq

#endif  // ESBQ_QUANT_CONFIG_H_
