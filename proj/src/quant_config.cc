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

#include "esbq/quant_config.h"

#include <cmath>
#include <string>

#include "esbq/error.h"

namespace esbq {

std::string_view alias_name(GridAlias alias) {
  switch (alias) {
    case GridAlias::kTernary:
      return "Ternary";
    case GridAlias::kPoT:
      return "PoT";
    case GridAlias::kFixed:
      return "Fixed";
    case GridAlias::kESB:
      return "ESB";
  }
  return "ESB";
}

QuantConfig QuantConfig::make(int bits, int sig) {
  if (bits < kMinBits || bits > kMaxBits) {
    throw ConfigError("bits must satisfy 2 <= b <= 8, got b=" +
                      std::to_string(bits));
  }
  if (sig < 0) {
    throw ConfigError("significant-bit parameter must satisfy k >= 0, got k=" +
                      std::to_string(sig));
  }
  if (sig > bits - 2) {
    throw ConfigError("significant-bit parameter must satisfy k <= b-2 "
                      "(at least one exponent bit), got b=" +
                      std::to_string(bits) + " k=" + std::to_string(sig));
  }
  return QuantConfig(bits, sig);
}

double QuantConfig::max_value() const {
  // Largest element of xi_N * Omega_N: (2^(k+1) - 1) * 2^(N-k-1).
  const int n = max_exponent();
  return std::ldexp(static_cast<double>((2 << sig_) - 1), n - sig_ - 1);
}

double QuantConfig::subnormal_step() const { return std::ldexp(1.0, -sig_); }

GridAlias QuantConfig::alias() const {
  if (bits_ == 2 && sig_ == 0) return GridAlias::kTernary;
  if (sig_ == 0) return GridAlias::kPoT;
  if (sig_ == bits_ - 2) return GridAlias::kFixed;
  return GridAlias::kESB;
}

std::string QuantConfig::name() const {
  return "ESB(" + std::to_string(bits_) + "," + std::to_string(sig_) + ")";
}

}  // namespace esbq
