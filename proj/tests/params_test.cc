// Copyright 2026 The docre Authors.
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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "docre/errors.h"
#include "docre/gradcheck.h"
#include "docre/optimizer.h"
#include "docre/params.h"

namespace docre {
namespace {

double Dot(const Tensor &t, size_t i, size_t j, bool columns) {
  double s = 0.0;
  const size_t n = columns ? t.rows() : t.cols();
  for (size_t k = 0; k < n; ++k) s += columns ? t(k, i) * t(k, j) : t(i, k) * t(j, k);
  return s;
}

void ExpectOrthonormal(const Tensor &t) {
  const bool columns = t.rows() >= t.cols();
  const size_t n = columns ? t.cols() : t.rows();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(Dot(t, i, j, columns), i == j ? 1.0 : 0.0, 1e-10) << i << "," << j;
    }
  }
}

TEST(InitTest, OrthogonalSquare) { ExpectOrthonormal(OrthogonalInit(4, 4, 7)); }
TEST(InitTest, OrthogonalTall) { ExpectOrthonormal(OrthogonalInit(6, 3, 7)); }
TEST(InitTest, OrthogonalWide) { ExpectOrthonormal(OrthogonalInit(3, 8, 7)); }
TEST(InitTest, OrthogonalLargeTall) { ExpectOrthonormal(OrthogonalInit(192, 96, 3)); }

TEST(InitTest, Deterministic) {
  EXPECT_EQ(OrthogonalInit(5, 3, 9), OrthogonalInit(5, 3, 9));
  EXPECT_NE(OrthogonalInit(5, 3, 9), OrthogonalInit(5, 3, 10));
  EXPECT_EQ(GaussianInit(5, 3, 0.1, 9), GaussianInit(5, 3, 0.1, 9));
}

TEST(InitTest, GaussianScale) {
  Tensor t = GaussianInit(200, 50, 0.1, 1);
  double sum = 0.0, sq = 0.0;
  for (double v : t.values()) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(t.size());
  EXPECT_NEAR(sum / n, 0.0, 0.005);
  EXPECT_NEAR(std::sqrt(sq / n), 0.1, 0.005);
}

TEST(RegistryTest, AddGetAndDuplicates) {
  ParamRegistry reg;
  reg.Add("w", Tensor(2, 2, 1.0));
  EXPECT_TRUE(reg.Contains("w"));
  EXPECT_EQ(reg.Get("w").index, 0u);
  EXPECT_EQ(reg.NumCoordinates(), 4u);
  EXPECT_THROW(reg.Add("w", Tensor(1, 1)), ArgumentError);
  EXPECT_THROW(reg.Get("missing"), ArgumentError);
}

TEST(RegistryTest, CopyIsDeep) {
  ParamRegistry a;
  a.Add("w", Tensor(1, 2, 1.0));
  ParamRegistry b = a;
  b.Get("w").value[0] = 5.0;
  EXPECT_EQ(a.Get("w").value[0], 1.0);
  a.CopyValuesFrom(b);
  EXPECT_EQ(a.Get("w").value[0], 5.0);
}

TEST(CheckpointTest, ExactRoundTrip) {
  Checkpoint ck;
  ck.metadata = R"({"k": 1})";
  ck.config_hash = 0xdeadbeefcafef00dULL;
  ck.params.Add("a", GaussianInit(3, 4, 1.0, 1));
  ck.params.Add("b", Tensor::RowVector({1.0 / 3.0, -0.0, 1e-300}));
  const std::string path = ::testing::TempDir() + "/params_test.ckpt";
  WriteCheckpoint(path, ck);
  Checkpoint back = ReadCheckpoint(path);
  EXPECT_EQ(back.metadata, ck.metadata);
  EXPECT_EQ(back.config_hash, ck.config_hash);
  ASSERT_EQ(back.params.size(), 2u);
  EXPECT_EQ(back.params.Get("a").value, ck.params.Get("a").value);
  EXPECT_EQ(back.params.Get("b").value, ck.params.Get("b").value);
  std::filesystem::remove(path);
}

TEST(CheckpointTest, RejectsGarbage) {
  const std::string path = ::testing::TempDir() + "/garbage.ckpt";
  std::ofstream(path) << "not a checkpoint";
  EXPECT_THROW(ReadCheckpoint(path), DataError);
  EXPECT_THROW(ReadCheckpoint(path + ".missing"), DataError);
  std::filesystem::remove(path);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  // t = 1: m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  ParamRegistry reg;
  reg.Add("x", Tensor::RowVector({0.5}));
  reg.Get("x").grad = Tensor::RowVector({1.0});
  Adam adam;
  adam.Step(reg);
  EXPECT_NEAR(0.5 - reg.Get("x").value[0], 1e-3, 1e-9);
  EXPECT_NEAR(reg.Get("x").value[0], 0.5 - 1e-3 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(reg.Get("x").grad, Tensor(1, 1));  // zeroed
  EXPECT_EQ(adam.step_count(), 1);
}

TEST(AdamTest, SecondStepByHand) {
  ParamRegistry reg;
  reg.Add("x", Tensor::RowVector({0.0}));
  Adam adam({0.1, 0.9, 0.999, 1e-8});
  reg.Get("x").grad = Tensor::RowVector({1.0});
  adam.Step(reg);
  reg.Get("x").grad = Tensor::RowVector({-2.0});
  adam.Step(reg);
  const double m = 0.9 * 0.1 + 0.1 * -2.0;
  const double v = 0.999 * 0.001 + 0.001 * 4.0;
  const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
  const double expected = -0.1 / (1.0 + 1e-8) - 0.1 * mh / (std::sqrt(vh) + 1e-8);
  EXPECT_NEAR(reg.Get("x").value[0], expected, 1e-15);
}

TEST(AdamTest, ZeroGradientIsFixedPoint) {
  ParamRegistry reg;
  reg.Add("x", Tensor::RowVector({0.25, -1.0}));
  reg.Get("x").grad = Tensor(1, 2);
  Adam adam;
  adam.Step(reg);
  EXPECT_EQ(reg.Get("x").value, Tensor::RowVector({0.25, -1.0}));
}

TEST(AdamTest, MissingGradientThrows) {
  ParamRegistry reg;
  reg.Add("x", Tensor::RowVector({1.0}));
  Adam adam;
  EXPECT_THROW(adam.Step(reg), NumericError);
}

TEST(AdamTest, Deterministic) {
  auto run = [] {
    ParamRegistry reg;
    reg.Add("x", GaussianInit(3, 3, 1.0, 4));
    Adam adam;
    for (int i = 0; i < 5; ++i) {
      reg.Get("x").grad = reg.Get("x").value;
      adam.Step(reg);
    }
    return reg.Get("x").value;
  };
  EXPECT_EQ(run(), run());
}

TEST(GradCheckTest, QuadraticIsExact) {
  ParamRegistry reg;
  reg.Add("x", GaussianInit(3, 2, 1.0, 8));
  const Tensor a = GaussianInit(2, 2, 1.0, 9);
  GradCheckReport r = FiniteDifferenceCheck(
      [&](Graph &g) {
        Var y = g.MatMul(g.Param(reg.Get("x")), g.Constant(a));
        return g.Sum(g.MatMulTransB(y, y));
      },
      reg);
  EXPECT_LT(r.max_rel_error, 1e-8);
  EXPECT_EQ(r.coordinates_checked, 6u);
}

TEST(GradCheckTest, LogSumExpLoss) {
  ParamRegistry reg;
  reg.Add("x", GaussianInit(5, 4, 2.0, 10));
  GradCheckReport r = FiniteDifferenceCheck(
      [&](Graph &g) { return g.Sum(g.LogSumExpRows(g.Param(reg.Get("x")))); }, reg);
  EXPECT_LT(r.max_rel_error, 1e-6);
}

TEST(GradCheckTest, DetectsWrongGradient) {
  // A loss whose value ignores a parameter the graph claims to use.
  ParamRegistry reg;
  reg.Add("x", Tensor::RowVector({0.3}));
  double offset = 0.0;
  GradCheckReport r = FiniteDifferenceCheck(
      [&](Graph &g) {
        Var x = g.Param(reg.Get("x"));
        offset = reg.Get("x").value[0] * 3.0;  // hidden dependency
        return g.Add(g.Sum(g.MatMul(x, x)), g.Constant(Tensor::RowVector({offset})));
      },
      reg);
  EXPECT_GT(r.max_rel_error, 0.1);
}

TEST(GradCheckTest, SamplesLargeRegistriesAndRestoresValues) {
  ParamRegistry reg;
  reg.Add("big", GaussianInit(100, 50, 1.0, 1));
  reg.Add("small", GaussianInit(1, 3, 1.0, 2));
  const Tensor before = reg.Get("big").value;
  GradCheckOptions options;
  options.exhaustive_limit = 100;
  GradCheckReport r = FiniteDifferenceCheck(
      [&](Graph &g) {
        Var b = g.Sum(g.Tanh(g.Param(reg.Get("big"))));
        return g.Add(b, g.Sum(g.Sigmoid(g.Param(reg.Get("small")))));
      },
      reg, options);
  EXPECT_GE(r.coordinates_checked, 103u);
  EXPECT_EQ(r.groups_checked.size(), 2u);
  EXPECT_EQ(reg.Get("big").value, before);
  EXPECT_LT(r.max_rel_error, 1e-6);
}

TEST(GradCheckTest, KinkCrossingsAreRetriedThenExcluded) {
  ParamRegistry reg;
  reg.Add("x", Tensor::RowVector({1e-4, 0.5, 1e-7}));
  LossBuilder fn = [&](Graph &g) { return g.Sum(g.Relu(g.Param(reg.Get("x")))); };
  // 1e-4 crosses at steps 1e-3 and 1e-4 but not at 1e-5; 1e-7 always crosses.
  GradCheckReport r = FiniteDifferenceCheck(fn, reg);
  EXPECT_EQ(r.kink_crossings, 1u);
  EXPECT_EQ(r.reduced_steps, 1u);
  EXPECT_EQ(r.coordinates_checked, 2u);
  EXPECT_LT(r.max_rel_error, 1e-9);
  GradCheckOptions no_retry;
  no_retry.kink_retries = 0;
  GradCheckReport strict = FiniteDifferenceCheck(fn, reg, no_retry);
  EXPECT_EQ(strict.kink_crossings, 2u);
  EXPECT_EQ(strict.coordinates_checked, 1u);
  GradCheckOptions raw;
  raw.exclude_kinks = false;
  EXPECT_GT(FiniteDifferenceCheck(fn, reg, raw).max_rel_error, 0.1);
}

}  // namespace
}  // namespace docre
