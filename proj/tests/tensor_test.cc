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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "esbq/aligner.h"
#include "esbq/error.h"
#include "esbq/projection.h"
#include "esbq/tensor.h"
#include "esbq/tensor_io.h"

namespace esbq {
namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path data_dir() { return ESBQ_TEST_DATA_DIR; }

TensorF random_tensor(Shape shape, std::uint64_t seed, float scale = 1.0f) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> dist(0.0f, scale);
  TensorF t(std::move(shape));
  for (auto& v : t.mutable_data()) v = dist(rng);
  return t;
}

TEST(TensorTest, ShapeValidation) {
  EXPECT_THROW(TensorF(Shape{}), ShapeError);
  EXPECT_THROW(TensorF(Shape{1, 2, 3, 4, 5}), ShapeError);
  EXPECT_THROW(TensorF(Shape{2, 0}), ShapeError);
  EXPECT_THROW(TensorF(Shape{2, 2}, {1, 2, 3}), ShapeError);
  EXPECT_THROW(TensorF(Shape{1}, {NAN}), DataError);
  EXPECT_EQ(TensorF(Shape{2, 3}).size(), 6u);
}

TEST(TensorTest, QuantizedValidation) {
  const auto c = QuantConfig::make(4, 1);
  EXPECT_THROW(QuantizedTensor(Shape{2}, 1.0, c, {0, 1, 2}), ShapeError);
  EXPECT_THROW(QuantizedTensor(Shape{1}, 0.0, c, {0}), ArgumentError);
  EXPECT_THROW(QuantizedTensor(Shape{1}, 1.0, c, {0x10}), FormatError);
}

TEST(NormalizeTest, Examples) {
  const auto [unit, s1] = normalize(TensorF(Shape{2}, {-1.0f, 1.0f}));
  EXPECT_NEAR(unit[0], -1.0f, 1e-6);
  EXPECT_NEAR(unit[1], 1.0f, 1e-6);
  EXPECT_EQ(s1.sigma, 1.0);

  const auto [flat, s2] = normalize(TensorF(Shape{4}, {5, 5, 5, 5}));
  for (float v : flat.data()) EXPECT_EQ(v, 0.0f);
  EXPECT_EQ(s2.sigma, 0.0);

  const TensorF r = random_tensor(Shape{10000}, 8, 3.0f);
  const auto [out, s3] = normalize(r);
  const auto [mu, sigma] = mean_std(out.data());
  EXPECT_LT(std::fabs(mu), 1e-6);
  EXPECT_LT(std::fabs(sigma - 1.0), 1e-5);
}

TEST(EmaTest, Examples) {
  NormStats s{0.0, 0.0, 0.9};
  const TensorF batch(Shape{2}, {-1.0f, 3.0f});  // mean 1, std 2
  s = ema_update(s, batch);
  EXPECT_NEAR(s.mu, 0.9, 1e-15);
  EXPECT_NEAR(s.sigma, 1.8, 1e-15);

  NormStats g9{0.0, 1.0, 0.9}, g99{0.0, 1.0, 0.99};
  for (int n = 1; n <= 200; ++n) {
    g9 = ema_update(g9, batch);
    g99 = ema_update(g99, batch);
    if (n <= 10) EXPECT_NEAR(std::fabs(g9.mu - 1.0), std::pow(0.1, n), 1e-12);
  }
  EXPECT_NEAR(g9.mu, g99.mu, 1e-12);
  EXPECT_NEAR(g9.sigma, g99.sigma, 1e-12);
}

TEST(NormalizeInferenceTest, Examples) {
  const TensorF t(Shape{3}, {1.0f, -2.0f, 0.5f});
  const TensorF id = normalize_inference(t, NormStats{});
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(id[i], static_cast<float>(t[i] / (1.0 + 1e-7)));
  }
  const TensorF r = random_tensor(Shape{64}, 4);
  const auto [n1, stats] = normalize(r);
  EXPECT_EQ(normalize_inference(r, stats), n1);
  const TensorF z = normalize_inference(TensorF(Shape{4}), NormStats{1.0, 2.0});
  for (float v : z.data()) EXPECT_EQ(v, static_cast<float>(-1.0 / (2.0 + 1e-7)));
}

TEST(QuantizeTensorTest, TernaryMse) {
  const TensorF t = random_tensor(Shape{200000}, 11);
  const auto q = quantize_tensor(t, QuantConfig::make(2, 0), 1.2240);
  double sq = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sq += std::pow(t[i] - q.value(i), 2);
  EXPECT_NEAR(sq / t.size(), 0.19, 0.01);
}

TEST(QuantizeTensorTest, DefaultsAndConsistency) {
  const auto c = QuantConfig::make(5, 2);
  const TensorF zeros(Shape{3, 3});
  const auto qz = quantize_tensor(zeros, c);
  EXPECT_EQ(qz.alpha(), solve_alpha(c).alpha_star);
  for (std::size_t i = 0; i < qz.size(); ++i) EXPECT_EQ(qz.code(i), encode(0.0, c));

  const TensorF t = random_tensor(Shape{4, 4, 8}, 21);
  const auto q = quantize_tensor(t, c, 0.5);
  const auto r = quantize_array(t.data(), 0.5, c);
  const TensorF dq = dequantize(q);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(q.value(i), r[i].value);
    EXPECT_EQ(dq[i], static_cast<float>(r[i].value));
  }
  EXPECT_EQ(quantize_tensor(dq, c, 0.5), q);
}

TEST(TensorIoTest, RoundTripIsByteIdentical) {
  const auto dir = std::filesystem::temp_directory_path() / "esbq_io_test";
  std::filesystem::create_directories(dir);
  const TensorF t = random_tensor(Shape{3, 4, 2, 5}, 31);
  write_tensor(dir / "f.esbt", t);
  const auto fbytes = slurp(dir / "f.esbt");
  EXPECT_EQ(fbytes, serialize(t));
  const TensorF t2 = read_float_tensor(dir / "f.esbt");
  EXPECT_EQ(t2, t);
  write_tensor(dir / "f2.esbt", t2);
  EXPECT_EQ(slurp(dir / "f2.esbt"), fbytes);

  const auto q = quantize_tensor(t, QuantConfig::make(7, 4), 0.3);
  write_tensor(dir / "q.esbt", q);
  const QuantizedTensor q2 = read_quantized_tensor(dir / "q.esbt");
  EXPECT_EQ(q2, q);
  write_tensor(dir / "q2.esbt", q2);
  EXPECT_EQ(slurp(dir / "q2.esbt"), slurp(dir / "q.esbt"));
  std::filesystem::remove_all(dir);
}

TEST(TensorIoTest, GoldenFloat) {
  const auto bytes = slurp(data_dir() / "golden_float.esbt");
  const std::vector<std::uint8_t> header{'E', 'S', 'B', 'T', 1, 0, 2, 2, 0, 0, 0, 3, 0, 0, 0};
  ASSERT_EQ(bytes.size(), header.size() + 24);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  const TensorF want(Shape{2, 3}, {1, -2, 0.5, 0, 3.25, -0.125});
  EXPECT_EQ(read_float_tensor(data_dir() / "golden_float.esbt"), want);
  EXPECT_EQ(serialize(want), bytes);
}

TEST(TensorIoTest, GoldenQuantized) {
  const auto bytes = slurp(data_dir() / "golden_quant.esbt");
  const std::vector<std::uint8_t> want_bytes{
      'E', 'S', 'B', 'T', 1, 1, 1, 4, 0, 0, 0, 5, 2,
      0, 0, 0, 0, 0, 0, 0xe4, 0x3f, 0x09, 0x1d, 0x0c, 0x0b};
  EXPECT_EQ(bytes, want_bytes);
  const auto q = read_quantized_tensor(data_dir() / "golden_quant.esbt");
  EXPECT_EQ(q.config(), QuantConfig::make(5, 2));
  EXPECT_EQ(q.alpha(), 0.625);
  EXPECT_EQ(q.value(0), 3.125);
  EXPECT_EQ(q.value(1), -0.15625);
  EXPECT_EQ(q.value(2), 0.0);
  EXPECT_EQ(q.value(3), 4.375);
  EXPECT_EQ(serialize(q), bytes);
}

TEST(TensorIoTest, RejectsMalformed) {
  const auto good = slurp(data_dir() / "golden_quant.esbt");
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad[4] = 2;
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad[5] = 7;
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad[6] = 0;
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad[12] = 4;  // k = 4 is invalid for b = 5
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad.pop_back();
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad.push_back(0);
  EXPECT_THROW(deserialize(bad), FormatError);
  bad = good;
  bad.back() = 0x30;
  EXPECT_THROW(deserialize(bad), FormatError);
  EXPECT_THROW(read_tensor("/nonexistent/file.esbt"), Error);
  EXPECT_THROW(read_float_tensor(data_dir() / "golden_quant.esbt"), FormatError);
}

}  // namespace
}  // namespace esbq
