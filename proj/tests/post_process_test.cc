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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "esbq/conv.h"
#include "esbq/cost_model.h"
#include "esbq/error.h"
#include "esbq/post_process.h"
#include "esbq/projection.h"
#include "esbq/quant_grid.h"
#include "oracles.h"

namespace esbq {
namespace {

PostSourceParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.05, 2.0);
  std::uniform_real_distribution<double> any(-1.5, 1.5);
  PostSourceParams p;
  p.alpha_weights = pos(rng);
  p.alpha_input = pos(rng);
  p.alpha_next = pos(rng);
  p.bn_scale = any(rng);
  p.bn_shift = any(rng);
  p.bn_mean = any(rng);
  p.bn_sigma = pos(rng);
  p.dn_mean = any(rng);
  p.dn_sigma = pos(rng);
  return p;
}

TEST(FusePostTest, NeutralParamsAreIdentity) {
  PostSourceParams p;
  p.dn_epsilon = 0.0;
  const auto f = fuse_post_params(p);
  EXPECT_EQ(f.a, 1.0);
  EXPECT_EQ(f.b_off, 0.0);
  EXPECT_TRUE(f.consistent());
}

TEST(FusePostTest, MatchesUnfusedChain) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> xs(-40.0, 40.0);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_params(rng);
    const auto f = fuse_post_params(p);
    EXPECT_TRUE(f.consistent());
    for (int j = 0; j < 10; ++j) {
      const double x = xs(rng);
      const long double want = testing::unfused_post(p, x);
      const double got = apply_affine(f, x);
      // Relative to the size of the terms, which guards cancellation.
      const long double scale =
          std::fabs(f.a * x) + std::fabs(f.b_off) + std::fabs(static_cast<double>(want));
      EXPECT_LE(std::fabs(got - want), 1e-10 * scale);
    }
  }
}

TEST(FusePostTest, DoublingNextAlphaHalves) {
  std::mt19937_64 rng(3);
  const auto p = random_params(rng);
  auto q = p;
  q.alpha_next *= 2.0;
  const auto fp = fuse_post_params(p);
  const auto fq = fuse_post_params(q);
  EXPECT_DOUBLE_EQ(fq.a, fp.a / 2.0);
  EXPECT_DOUBLE_EQ(fq.b_off, fp.b_off / 2.0);
}

TEST(FusePostTest, Errors) {
  PostSourceParams p;
  p.bn_sigma = 0.0;
  EXPECT_THROW(fuse_post_params(p), ArgumentError);
  p = {};
  p.dn_sigma = -p.dn_epsilon;
  EXPECT_THROW(fuse_post_params(p), ArgumentError);
  p = {};
  p.alpha_next = 0.0;
  EXPECT_THROW(fuse_post_params(p), ArgumentError);
  auto f = fuse_post_params(PostSourceParams{});
  f.a *= 1.001;
  EXPECT_FALSE(f.consistent());
}

TEST(ApplyPostTest, IdentityAndSaturation) {
  const auto c = QuantConfig::make(5, 2);
  PostSourceParams p;
  p.dn_epsilon = 0.0;
  const auto f = fuse_post_params(p);
  const auto sym = grid_for(c).symmetric();
  std::vector<float> vals(sym.begin(), sym.end());
  const auto q = apply_post(TensorF({static_cast<std::uint32_t>(vals.size())}, vals), f, c);
  for (std::size_t i = 0; i < sym.size(); ++i) EXPECT_EQ(q.grid_value(i), sym[i]);
  const auto big = apply_post(TensorF({2}, {1e6f, -1e6f}), f, c);
  EXPECT_EQ(big.grid_value(0), c.max_value());
  EXPECT_EQ(big.grid_value(1), -c.max_value());
}

// Stage-by-stage reference of one layer: exact conv, pool+ReLU, Scale, BN,
// DN, division by the next alpha, clamp and projection.
std::vector<double> reference_layer(const QuantizedTensor& in, const QuantizedTensor& w,
                                    const ConvSpec& spec, const PostSourceParams& p,
                                    const QuantConfig& c) {
  const auto acc = testing::conv_rational(in, w, spec);
  const Shape shape = conv_output_shape(in.shape(), w.shape(), spec);
  std::vector<float> real(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) real[i] = static_cast<float>(static_cast<double>(acc[i]));
  TensorF t(shape, real);
  if (spec.pooling()) t = maxpool_relu(t, spec.pool_size, spec.pool_stride);
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = static_cast<double>(testing::unfused_post(p, t[i]));
    out[i] = p.alpha_next * project_oracle(std::clamp(y, -c.max_value(), c.max_value()), c);
  }
  return out;
}

TEST(RunLayerTest, TwoLayerPipelineMatchesUnfused) {
  std::mt19937_64 rng(12);
  const auto c = QuantConfig::make(5, 2);
  const auto sym = grid_for(c).symmetric();
  std::uniform_int_distribution<std::size_t> pick(0, sym.size() - 1);
  auto random_q = [&](Shape s, double alpha) {
    std::vector<std::uint8_t> codes(checked_element_count(s));
    for (auto& code : codes) code = encode(sym[pick(rng)], c).to_byte();
    return QuantizedTensor(std::move(s), alpha, c, std::move(codes));
  };
  const auto x = random_q({8, 8, 3}, 0.6);
  const auto w1 = random_q({3, 3, 3, 4}, 0.05);
  const auto w2 = random_q({3, 3, 4, 2}, 0.08);

  ConvSpec s1;
  s1.kernel = 3;
  s1.padding = 1;
  s1.pool_size = 2;
  s1.pool_stride = 2;
  ConvSpec s2;
  s2.kernel = 3;
  s2.padding = 1;

  auto p1 = random_params(rng);
  p1.alpha_input = x.alpha();
  p1.alpha_weights = w1.alpha();
  p1.alpha_next = 0.45;
  p1.bn_scale = 0.9;
  auto p2 = random_params(rng);
  p2.alpha_input = p1.alpha_next;
  p2.alpha_weights = w2.alpha();

  const auto h = run_layer(x, w1, s1, fuse_post_params(p1));
  const auto ref_h = reference_layer(x, w1, s1, p1, c);
  ASSERT_EQ(h.shape(), (Shape{4, 4, 4}));
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_NEAR(h.value(i), ref_h[i], 1e-9 * std::max(1.0, std::fabs(ref_h[i])));
  }
  const auto y = run_layer(h, w2, s2, fuse_post_params(p2));
  const auto ref_y = reference_layer(h, w2, s2, p2, c);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_NEAR(y.value(i), ref_y[i], 1e-9 * std::max(1.0, std::fabs(ref_y[i])));
  }
  EXPECT_EQ(run_layer(h, w2, s2, fuse_post_params(p2)), y);
  EXPECT_THROW(run_layer(x, w2, s2, fuse_post_params(p2)), Error);
}

TEST(CostModelTest, Examples) {
  EXPECT_EQ(shiftadd_cost(QuantConfig::make(5, 2), 1).total_shift_adds, 3u);
  for (int b = 3; b <= 8; ++b) {
    const auto r = shiftadd_cost(QuantConfig::make(b, 0), 17);
    EXPECT_EQ(r.shift_adds_per_product, 1);
    EXPECT_EQ(r.multiplier_bits, 1);
  }
  const auto r = shiftadd_cost(QuantConfig::make(8, 6), 100);
  EXPECT_EQ(r.total_shift_adds, 700u);
  EXPECT_EQ(r.multiplier_bits, 7);
}

}  // namespace
}  // namespace esbq
