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

#include "esbq/esb_float.h"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "esbq/error.h"
#include "esbq/quant_grid.h"

namespace esbq {

namespace {

// Usable magnitude bits of the accumulator, one below the type width so the
// sign and a pending carry always fit.
constexpr unsigned kMantissaBits = 510;

unsigned bit_length(const ExactSum::Mantissa& m) {
  if (m == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(abs(m))) + 1;
}

ExactSum::Mantissa shifted(const ExactSum::Mantissa& m, unsigned shift) {
  if (m != 0 && bit_length(m) + shift > kMantissaBits) {
    throw CapacityError("exact accumulator overflow: mantissa needs " +
                        std::to_string(bit_length(m) + shift) + " bits");
  }
  // Checked integers refuse to shift negative values.
  return m < 0 ? ExactSum::Mantissa(-(abs(m) << shift)) : ExactSum::Mantissa(m << shift);
}

}  // namespace

std::uint8_t EsbCode::to_byte() const {
  const int k = config.sig();
  return static_cast<std::uint8_t>((sign << (config.bits() - 1)) |
                                   (exponent << k) | fraction);
}

EsbCode EsbCode::from_byte(std::uint8_t byte, const QuantConfig& config) {
  const int b = config.bits();
  const int k = config.sig();
  if (b < 8 && (byte >> b) != 0) {
    char hex[8];
    std::snprintf(hex, sizeof(hex), "0x%02X", byte);
    throw FormatError(std::string("code byte ") + hex +
                      " has bits above bit " + std::to_string(b - 1));
  }
  EsbCode code;
  code.config = config;
  code.sign = static_cast<std::uint8_t>((byte >> (b - 1)) & 1u);
  code.exponent =
      static_cast<std::uint8_t>((byte >> k) & ((1u << (b - k - 1)) - 1));
  code.fraction = static_cast<std::uint8_t>(byte & ((1u << k) - 1));
  return code;
}

EsbCode encode(double v, const QuantConfig& config) {
  const double m = std::fabs(v);
  if (!std::isfinite(v) || !grid_for(config).contains(m)) {
    throw DomainError("value " + std::to_string(v) + " is not on the " +
                      config.name() + " grid; project it first");
  }
  const int k = config.sig();
  EsbCode code;
  code.config = config;
  if (m == 0.0) {
    code.exponent = static_cast<std::uint8_t>(config.max_exponent());
    return code;
  }
  code.sign = std::signbit(v) ? 1 : 0;
  if (m < 1.0) {
    code.exponent = static_cast<std::uint8_t>(config.max_exponent());
    code.fraction = static_cast<std::uint8_t>(std::ldexp(m, k));
    return code;
  }
  const int e = std::ilogb(m);
  code.exponent = static_cast<std::uint8_t>(e);
  code.fraction =
      static_cast<std::uint8_t>(std::ldexp(m, k - e) - std::ldexp(1.0, k));
  return code;
}

double decode(const EsbCode& code) {
  const QuantConfig& c = code.config;
  if (code.sign > 1 || code.exponent > c.max_exponent() ||
      code.fraction >= (1u << c.sig())) {
    throw FormatError("code fields out of range for " + c.name() + ": sign=" +
                      std::to_string(code.sign) +
                      " exponent=" + std::to_string(code.exponent) +
                      " fraction=" + std::to_string(code.fraction));
  }
  if (code.is_zero()) return 0.0;
  const double magnitude =
      std::ldexp(static_cast<double>(code.significand()),
                 code.effective_exponent() - c.sig());
  return code.sign ? -magnitude : magnitude;
}

double ExactProduct::value() const {
  return sign * std::ldexp(static_cast<double>(significand), exponent);
}

ExactProduct multiply(const EsbCode& a, const EsbCode& b) {
  if (a.config != b.config) {
    throw UsageError("cannot multiply " + a.config.name() + " by " +
                     b.config.name() + " codes");
  }
  const int k = a.config.sig();
  // The multiplier is k+1 bits wide; a wider operand means a malformed code.
  if ((a.significand() >> (k + 1)) != 0 || (b.significand() >> (k + 1)) != 0) {
    throw FormatError("significand operand exceeds k+1 bits for " +
                      a.config.name());
  }
  ExactProduct p;
  p.sign = (a.sign ^ b.sign) ? -1 : 1;
  p.significand = a.significand() * b.significand();
  p.exponent = a.effective_exponent() + b.effective_exponent() - 2 * k;
  return p;
}

void ExactSum::add_scaled(const Mantissa& mantissa, int exponent) {
  if (mantissa == 0) return;
  if (mantissa_ == 0) {
    mantissa_ = mantissa;
    exponent_ = exponent;
    return;
  }
  try {
    if (exponent < exponent_) {
      mantissa_ = shifted(mantissa_, static_cast<unsigned>(exponent_ - exponent));
      exponent_ = exponent;
      mantissa_ += mantissa;
    } else {
      mantissa_ += shifted(mantissa, static_cast<unsigned>(exponent - exponent_));
    }
  } catch (const std::overflow_error& e) {
    throw CapacityError(std::string("exact accumulator overflow: ") + e.what());
  }
  if (bit_length(mantissa_) > kMantissaBits) {
    throw CapacityError("exact accumulator overflow");
  }
}

void ExactSum::add(const ExactProduct& product) {
  Mantissa m = product.significand;
  if (product.sign < 0) m = -m;
  add_scaled(m, product.exponent);
}

void ExactSum::add(const ExactSum& other) {
  add_scaled(other.mantissa_, other.exponent_);
}

ExactSum ExactSum::normalized() const {
  if (mantissa_ == 0) return ExactSum();
  const unsigned tz = boost::multiprecision::lsb(abs(mantissa_));
  Mantissa m = abs(mantissa_) >> tz;
  if (mantissa_ < 0) m = -m;
  return ExactSum(m, exponent_ + static_cast<int>(tz));
}

double ExactSum::to_double() const {
  if (mantissa_ == 0) return 0.0;
  const Mantissa mag = abs(mantissa_);
  const unsigned bits = bit_length(mag);
  double out;
  if (bits <= 64) {
    out = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(mag)),
                     exponent_);
  } else {
    // Keep the top 64 bits and fold everything below into a sticky bit;
    // 64 > 53 + 2 so the hardware conversion still rounds correctly.
    const unsigned drop = bits - 64;
    std::uint64_t top = static_cast<std::uint64_t>(mag >> drop);
    if (boost::multiprecision::lsb(mag) < drop) top |= 1u;
    out = std::ldexp(static_cast<double>(top),
                     exponent_ + static_cast<int>(drop));
  }
  return mantissa_ < 0 ? -out : out;
}

bool operator==(const ExactSum& a, const ExactSum& b) {
  const ExactSum na = a.normalized();
  const ExactSum nb = b.normalized();
  return na.mantissa_ == nb.mantissa_ && na.exponent_ == nb.exponent_;
}

ExactSum mac_accumulate(std::span<const ExactProduct> products) {
  if (products.empty()) {
    throw ArgumentError("mac_accumulate needs at least one product");
  }
  ExactSum sum;
  for (const auto& p : products) sum.add(p);
  return sum.normalized();
}

}  // namespace esbq
