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

#ifndef ESBQ_ESB_FLOAT_H_
#define ESBQ_ESB_FLOAT_H_

#include <cstdint>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

#include "esbq/quant_config.h"

namespace esbq {

// One b-bit ESB float: sign | exponent (b-k-1 bits) | fraction (k bits),
// right-aligned in a byte with the sign in bit b-1.
//
//   exponent == N (all ones): (-1)^sign * 0.f          (subnormal, incl. 0)
//   otherwise:                (-1)^sign * 2^e * 1.f
//
// (sign=1, exponent=N, fraction=0) is negative zero. It decodes to 0 but
// encode() never produces it.
struct EsbCode {
  std::uint8_t sign = 0;
  std::uint8_t exponent = 0;
  std::uint8_t fraction = 0;
  QuantConfig config = QuantConfig::make(2, 0);

  bool is_subnormal() const { return exponent == config.max_exponent(); }
  bool is_zero() const { return is_subnormal() && fraction == 0; }
  bool is_canonical() const { return !(is_zero() && sign == 1); }

  // (k+1)-bit integer significand: zeta * 2^k + f.
  std::uint32_t significand() const {
    return (is_subnormal() ? 0u : (1u << config.sig())) + fraction;
  }
  // Effective exponent e * zeta (zero for the subnormal range).
  int effective_exponent() const { return is_subnormal() ? 0 : exponent; }

  std::uint8_t to_byte() const;
  // Throws FormatError if the byte has bits set above bit b-1.
  static EsbCode from_byte(std::uint8_t byte, const QuantConfig& config);

  // Field-wise equality; negative zero is not equal to the canonical zero
  // here (see decode() for value comparisons).
  friend bool operator==(const EsbCode&, const EsbCode&) = default;
};

// Throws DomainError unless |v| is an exact member of the grid.
EsbCode encode(double v, const QuantConfig& config);

// Throws FormatError on out-of-range fields.
double decode(const EsbCode& code);

// Exact product sign * significand * 2^exponent.
struct ExactProduct {
  int sign = 1;
  std::uint32_t significand = 0;
  int exponent = 0;

  double value() const;
  friend bool operator==(const ExactProduct&, const ExactProduct&) = default;
};

// Multiplies two codes via their (k+1)-bit integer significands. Throws
// UsageError when the operands carry different configurations.
ExactProduct multiply(const EsbCode& a, const EsbCode& b);

// Exact running sum of ExactProducts, held as mantissa * 2^exponent in a
// 512-bit checked integer. Any order of additions yields the same
// normalized() result.
class ExactSum {
 public:
  using Mantissa = boost::multiprecision::checked_int512_t;

  ExactSum() = default;
  ExactSum(Mantissa mantissa, int exponent)
      : mantissa_(std::move(mantissa)), exponent_(exponent) {}

  // Throws CapacityError when the mantissa would exceed 511 bits.
  void add(const ExactProduct& product);
  void add(const ExactSum& other);

  const Mantissa& mantissa() const { return mantissa_; }
  int exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0; }

  // Odd mantissa (trailing zero bits folded into the exponent); zero is
  // (0, 0).
  ExactSum normalized() const;
  // Correctly rounded conversion.
  double to_double() const;

  // Compares normalized forms.
  friend bool operator==(const ExactSum& a, const ExactSum& b);

 private:
  void add_scaled(const Mantissa& mantissa, int exponent);

  Mantissa mantissa_ = 0;
  int exponent_ = 0;
};

// Sum of a non-empty sequence of products. Throws ArgumentError when empty.
ExactSum mac_accumulate(std::span<const ExactProduct> products);

}  // namespace esbq

#endif  // ESBQ_ESB_FLOAT_H_
