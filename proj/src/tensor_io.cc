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

#include "esbq/tensor_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "esbq/error.h"

namespace esbq {

namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'S', 'B', 'T'};

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void header(std::uint8_t kind, const Shape& shape) {
    bytes_.insert(bytes_.end(), std::begin(kMagic), std::end(kMagic));
    u8(kEsbtVersion);
    u8(kind);
    u8(static_cast<std::uint8_t>(shape.size()));
    for (std::uint32_t d : shape) u32(d);
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return need(1)[0]; }
  std::uint32_t u32() {
    const auto b = need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    const auto b = need(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::span<const std::uint8_t> raw(std::size_t n) { return need(n); }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> need(std::size_t n) {
    if (remaining() < n) {
      throw FormatError("truncated ESBT data at byte " + std::to_string(pos_));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const TensorF& t) {
  Writer w;
  w.header(kEsbtFloat, t.shape());
  for (float v : t.data()) w.f32(v);
  return w.take();
}

std::vector<std::uint8_t> serialize(const QuantizedTensor& t) {
  Writer w;
  w.header(kEsbtQuantized, t.shape());
  w.u8(static_cast<std::uint8_t>(t.config().bits()));
  w.u8(static_cast<std::uint8_t>(t.config().sig()));
  w.f64(t.alpha());
  auto bytes = w.take();
  bytes.insert(bytes.end(), t.code_bytes().begin(), t.code_bytes().end());
  return bytes;
}

AnyTensor deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.raw(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw FormatError("not an ESBT file (bad magic)");
  }
  const std::uint8_t version = r.u8();
  if (version != kEsbtVersion) {
    throw FormatError("unsupported ESBT version " + std::to_string(version));
  }
  const std::uint8_t kind = r.u8();
  const std::uint8_t rank = r.u8();
  if (rank == 0 || rank > 4) {
    throw FormatError("ESBT rank must be 1..4, got " + std::to_string(rank));
  }
  Shape shape(rank);
  for (auto& d : shape) d = r.u32();

  std::size_t n = 0;
  try {
    n = checked_element_count(shape);
  } catch (const ShapeError& e) {
    throw FormatError(std::string("bad ESBT shape: ") + e.what());
  }

  auto finish = [&] {
    if (r.remaining() != 0) {
      throw FormatError(std::to_string(r.remaining()) +
                        " trailing bytes after ESBT payload");
    }
  };

  if (kind == kEsbtFloat) {
    if (r.remaining() / 4 < n) throw FormatError("truncated ESBT float payload");
    std::vector<float> data(n);
    for (auto& v : data) v = r.f32();
    finish();
    try {
      return TensorF(std::move(shape), std::move(data));
    } catch (const Error& e) {
      throw FormatError(std::string("bad ESBT float payload: ") + e.what());
    }
  }
  if (kind == kEsbtQuantized) {
    const int b = r.u8();
    const int k = r.u8();
    const double alpha = r.f64();
    QuantConfig config = QuantConfig::make(2, 0);
    try {
      config = QuantConfig::make(b, k);
    } catch (const Error& e) {
      throw FormatError(std::string("bad ESBT quantizer header: ") + e.what());
    }
    const auto payload = r.raw(n);
    finish();
    try {
      return QuantizedTensor(std::move(shape), alpha, config,
                             std::vector<std::uint8_t>(payload.begin(), payload.end()));
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(std::string("bad ESBT quantized payload: ") + e.what());
    }
  }
  throw FormatError("unknown ESBT payload kind " + std::to_string(kind));
}

namespace {

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

void write_tensor(const std::filesystem::path& path, const TensorF& t) {
  write_bytes(path, serialize(t));
}

void write_tensor(const std::filesystem::path& path, const QuantizedTensor& t) {
  write_bytes(path, serialize(t));
}

AnyTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

TensorF read_float_tensor(const std::filesystem::path& path) {
  auto t = read_tensor(path);
  if (auto* f = std::get_if<TensorF>(&t)) return std::move(*f);
  throw FormatError(path.string() + " holds a quantized tensor, expected float");
}

QuantizedTensor read_quantized_tensor(const std::filesystem::path& path) {
  auto t = read_tensor(path);
  if (auto* q = std::get_if<QuantizedTensor>(&t)) return std::move(*q);
  throw FormatError(path.string() + " holds a float tensor, expected quantized");
}

}  // namespace esbq
