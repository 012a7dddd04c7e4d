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

#include <bit>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "esbq/conv.h"
#include "esbq/error.h"
#include "esbq/quant_grid.h"
#include "oracles.h"

namespace esbq {
namespace {

QuantizedTensor random_codes(Shape shape, const QuantConfig& c, double alpha,
                             std::mt19937_64& rng) {
  const std::size_t n = checked_element_count(shape);
  const auto sym = grid_for(c).symmetric();
  std::uniform_int_distribution<std::size_t> pick(0, sym.size() - 1);
  std::vector<std::uint8_t> codes(n);
  for (auto& code : codes) code = encode(sym[pick(rng)], c).to_byte();
  return QuantizedTensor(std::move(shape), alpha, c, std::move(codes));
}

QuantizedTensor from_values(Shape shape, const std::vector<double>& v,
                            const QuantConfig& c, double alpha = 1.0) {
  std::vector<std::uint8_t> codes;
  for (double x : v) codes.push_back(encode(x, c).to_byte());
  return QuantizedTensor(std::move(shape), alpha, c, std::move(codes));
}

bool bit_equal(const TensorF& a, const TensorF& b) {
  if (a.shape() != b.shape()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(a[i]) != std::bit_cast<std::uint32_t>(b[i])) return false;
  }
  return true;
}

TEST(ConvTest, SingleMac) {
  const auto c = QuantConfig::make(4, 1);
  const auto in = from_values({1, 1, 1}, {2.0}, c);
  const auto w = from_values({1, 1, 1, 1}, {3.0}, c);
  const TensorF out = conv2d_direct(in, w, ConvSpec{});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], 6.0f);
}

TEST(ConvTest, ZeroWeights) {
  std::mt19937_64 rng(1);
  const auto c = QuantConfig::make(5, 2);
  const auto in = random_codes({5, 5, 3}, c, 0.7, rng);
  const auto w = from_values({3, 3, 3, 2}, std::vector<double>(54, 0.0), c, 0.4);
  ConvSpec spec;
  spec.kernel = 3;
  spec.padding = 1;
  const TensorF out = conv2d_direct(in, w, spec);
  for (float v : out.data()) EXPECT_EQ(v, 0.0f);
}

TEST(ConvTest, MatchesRationalReference) {
  std::mt19937_64 rng(7);
  for (const auto& c : {QuantConfig::make(5, 2), QuantConfig::make(8, 5), QuantConfig::make(3, 0)}) {
    const auto in = random_codes({8, 8, 4}, c, 1.0, rng);
    const auto w = random_codes({3, 3, 4, 4}, c, 1.0, rng);
    ConvSpec spec;
    spec.kernel = 3;
    spec.padding = 1;
    const ExactTensor exact = conv2d_exact(in, w, spec);
    const auto ref = testing::conv_rational(in, w, spec);
    ASSERT_EQ(exact.values.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(testing::exact(exact.values[i]), ref[i]) << c.name() << " at " << i;
    }
  }
}

TEST(ConvTest, TiledEqualsDirectWithRemainders) {
  std::mt19937_64 rng(9);
  const auto c = QuantConfig::make(6, 3);
  const auto in = random_codes({8, 8, 4}, c, 0.31, rng);
  const auto w = random_codes({3, 3, 4, 4}, c, 0.07, rng);
  ConvSpec spec;
  spec.kernel = 3;
  const TilingConfig tiling{3, 3, 2, 2};
  const TensorF direct = conv2d_direct(in, w, spec);
  EXPECT_TRUE(bit_equal(conv2d_tiled(in, w, spec, tiling), direct));
  EXPECT_EQ(conv2d_exact_tiled(in, w, spec, tiling), conv2d_exact(in, w, spec));
  EXPECT_EQ(tile_trip_count(6, 6, 4, 4, tiling), 2u * 2u * 2u * 2u);
  const TilingConfig whole{6, 6, 4, 4};
  EXPECT_TRUE(bit_equal(conv2d_tiled(in, w, spec, whole), direct));
  EXPECT_EQ(tile_trip_count(6, 6, 4, 4, whole), 1u);
  EXPECT_EQ(tile_trip_count(7, 5, 3, 9, TilingConfig{2, 2, 2, 4}), 4u * 3u * 2u * 3u);
}

TEST(ConvTest, ShapeErrors) {
  std::mt19937_64 rng(2);
  const auto c = QuantConfig::make(4, 1);
  const auto in = random_codes({4, 4, 2}, c, 1.0, rng);
  ConvSpec spec;
  spec.kernel = 3;
  EXPECT_THROW(conv2d_direct(in, random_codes({3, 3, 3, 1}, c, 1.0, rng), spec), ShapeError);
  EXPECT_THROW(conv2d_direct(in, random_codes({2, 2, 2, 1}, c, 1.0, rng), spec), ShapeError);
  EXPECT_THROW(conv2d_direct(in, random_codes({3, 3, 2}, c, 1.0, rng), spec), ShapeError);
  EXPECT_THROW(conv2d_direct(in, random_codes({3, 3, 2, 1}, QuantConfig::make(4, 2), 1.0, rng), spec),
               UsageError);
  EXPECT_THROW(tile_trip_count(4, 4, 2, 2, TilingConfig{0, 1, 1, 1}), ArgumentError);
  spec.stride = 0;
  EXPECT_THROW(conv2d_direct(in, random_codes({3, 3, 2, 1}, c, 1.0, rng), spec), ArgumentError);
}

TEST(MaxPoolTest, FullWindow) {
  const TensorF t({2, 2, 1}, {1, 2, 3, 4});
  const TensorF out = maxpool_relu(t, 2, 2);
  EXPECT_EQ(out.shape(), (Shape{1, 1, 1}));
  EXPECT_EQ(out[0], 4.0f);
}

TEST(MaxPoolTest, IntersectionWindows) {
  const TensorF t({3, 3, 1}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const TensorF out = maxpool_relu(t, 2, 2);
  EXPECT_EQ(out.shape(), (Shape{2, 2, 1}));
  EXPECT_EQ(out.data()[0], 5.0f);
  EXPECT_EQ(out.data()[1], 6.0f);
  EXPECT_EQ(out.data()[2], 8.0f);
  EXPECT_EQ(out.data()[3], 9.0f);  // 1x1 corner window
}

TEST(MaxPoolTest, ReluAndShapeLaw) {
  const TensorF neg({2, 3, 2}, {-1, -2, -3, -4, -5, -6, -7, -8, -9, -1, -2, -3});
  const TensorF pooled = maxpool_relu(neg, 2, 1);
  for (float v : pooled.data()) EXPECT_EQ(v, 0.0f);
  std::mt19937_64 rng(5);
  std::normal_distribution<float> dist;
  for (int h = 1; h <= 7; ++h) {
    for (int s = 1; s <= 3; ++s) {
      TensorF t({static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h + 1), 2});
      for (auto& v : t.mutable_data()) v = dist(rng);
      const TensorF out = maxpool_relu(t, 2, s);
      EXPECT_EQ(out.shape(), (Shape{static_cast<std::uint32_t>((h + s - 1) / s),
                                    static_cast<std::uint32_t>((h + s) / s), 2}));
      // ReLU before pooling gives the same result.
      TensorF relu = t;
      for (auto& v : relu.mutable_data()) v = v > 0.0f ? v : 0.0f;
      EXPECT_EQ(maxpool_relu(relu, 2, s), out);
    }
  }
  EXPECT_THROW(maxpool_relu(neg, 0, 1), ArgumentError);
}

}  // namespace
}  // namespace esbq
