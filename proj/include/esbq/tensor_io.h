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

#ifndef ESBQ_TENSOR_IO_H_
#define ESBQ_TENSOR_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "esbq/tensor.h"

namespace esbq {

// ESBT layout, all multi-byte fields little-endian:
//
//   "ESBT" | version u8 (1) | kind u8 | rank u8 | dims u32 x rank
//   kind 0 (float):     float32 x N
//   kind 1 (quantized): b u8 | k u8 | alpha f64 | code u8 x N
inline constexpr std::uint8_t kEsbtVersion = 1;
inline constexpr std::uint8_t kEsbtFloat = 0;
inline constexpr std::uint8_t kEsbtQuantized = 1;

using AnyTensor = std::variant<TensorF, QuantizedTensor>;

std::vector<std::uint8_t> serialize(const TensorF& t);
std::vector<std::uint8_t> serialize(const QuantizedTensor& t);

// Throws FormatError on a bad magic, version, kind, truncation or trailing
// bytes.
AnyTensor deserialize(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const TensorF& t);
void write_tensor(const std::filesystem::path& path, const QuantizedTensor& t);
AnyTensor read_tensor(const std::filesystem::path& path);

// Convenience wrappers that throw FormatError when the file holds the other
// kind.
TensorF read_float_tensor(const std::filesystem::path& path);
QuantizedTensor read_quantized_tensor(const std::filesystem::path& path);

}  // namespace esbq

#endif  // ESBQ_TENSOR_IO_H_
