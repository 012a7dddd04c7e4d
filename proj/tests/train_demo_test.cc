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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "esbq/error.h"
#include "esbq/train_demo.h"

namespace esbq {
namespace {

TEST(BlobsTest, SeparableAndReproducible) {
  const Dataset a = make_blobs(200, 3);
  const Dataset b = make_blobs(200, 3);
  EXPECT_EQ(a.features.data, b.features.data);
  EXPECT_EQ(a.labels, b.labels);
  int positives = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const double s = a.features.at(i, 0) + a.features.at(i, 1);
    EXPECT_EQ(a.labels[i] == 1, s > 0.0);
    EXPECT_GE(std::fabs(s), 0.5);
    positives += a.labels[i];
  }
  EXPECT_EQ(positives, 100);
}

TEST(TrainDemoTest, FourOneReachesHighAccuracy) {
  const Dataset data = make_blobs(200, 20220417);
  TrainOptions opts;
  opts.seed = 20220417;
  const auto r = train_demo(data, QuantConfig::make(4, 1), opts);
  ASSERT_EQ(r.trace.size(), 50u);
  for (const auto& e : r.trace) EXPECT_TRUE(std::isfinite(e.loss));
  EXPECT_GE(r.trace.back().accuracy, 0.95);
}

TEST(TrainDemoTest, ZeroLearningRateKeepsLossConstant) {
  const Dataset data = make_blobs(100, 5);
  TrainOptions opts;
  opts.epochs = 5;
  opts.learning_rate = 0.0;
  const auto r = train_demo(data, QuantConfig::make(4, 1), opts);
  for (const auto& e : r.trace) EXPECT_EQ(e.loss, r.trace.front().loss);
}

TEST(TrainDemoTest, WideConfigTracksFullPrecision) {
  const Dataset data = make_blobs(200, 11);
  TrainOptions opts;
  opts.seed = 11;
  const auto q = train_demo(data, QuantConfig::make(8, 6), opts);
  opts.mode = QuantizerMode::kFullPrecision;
  const auto fp = train_demo(data, QuantConfig::make(8, 6), opts);
  EXPECT_LE(q.trace.back().loss, fp.trace.back().loss + 0.05);
}

TEST(TrainDemoTest, DivergenceCarriesTrace) {
  // Weights and activations are normalized, so the loss is scale-free and
  // only a non-finite input can make it blow up.
  Dataset data = make_blobs(64, 2);
  data.features.at(5, 0) = std::numeric_limits<double>::quiet_NaN();
  TrainOptions opts;
  opts.epochs = 20;
  try {
    train_demo(data, QuantConfig::make(4, 1), opts);
    FAIL() << "expected divergence";
  } catch (const TrainingDivergence& e) {
    EXPECT_FALSE(e.trace().empty());
    EXPECT_FALSE(std::isfinite(e.trace().back().loss));
  }
}

TEST(TrainDemoTest, StraightThroughGradientMatchesFiniteDifference) {
  const Dataset data = make_blobs(48, 9);
  const auto config = QuantConfig::make(4, 1);
  QuantMlp net(2, 16, 2, 9);
  QuantMlp::Gradients grads;
  const auto mode = QuantizerMode::kClipIdentity;
  net.loss(data.features, data.labels, mode, config, &grads);

  int checked = 0;
  auto check = [&](Matrix& w, const Matrix& g) {
    for (std::size_t i = 0; i < w.data.size() && checked < 50; ++i) {
      const double h = 1e-5;
      const double saved = w.data[i];
      w.data[i] = saved + h;
      const double up = net.loss(data.features, data.labels, mode, config);
      w.data[i] = saved - h;
      const double down = net.loss(data.features, data.labels, mode, config);
      w.data[i] = saved;
      const double fd = (up - down) / (2 * h);
      const double an = g.data[i];
      if (std::fabs(fd) < 1e-6 && std::fabs(an) < 1e-6) continue;
      EXPECT_LE(std::fabs(fd - an), 1e-3 * std::max(std::fabs(fd), std::fabs(an)))
          << "weight " << i << " fd=" << fd << " analytic=" << an;
      ++checked;
    }
  };
  check(net.hidden_weights(), grads.hidden);
  check(net.output_weights(), grads.output);
  EXPECT_GE(checked, 20);
}

}  // namespace
}  // namespace esbq
