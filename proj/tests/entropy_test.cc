// Copyright 2026 The metaprecomp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "metaprecomp/entropy.h"
#include "metaprecomp/errors.h"
#include "metaprecomp/random_game.h"
#include "metaprecomp/rng.h"
#include "test_util.h"

namespace metaprecomp {
namespace {

using testing::G3;
using testing::MakeG3;

TEST(FirstAdvantageSetTest, ZeroThresholdIsRoot) {
  G3 g = MakeG3(1, 0, 0.6, 0.4);
  UniformPolicy u;
  EXPECT_EQ(FirstAdvantageSet(g.game, Profile{u, u}, 0.0),
            std::vector<NodeId>{0});
}

TEST(FirstAdvantageSetTest, ThresholdAboveOneIsEmpty) {
  G3 g = MakeG3(1, 0, 0.6, 0.4);
  UniformPolicy u;
  EXPECT_TRUE(FirstAdvantageSet(g.game, Profile{u, u}, 1.0001).empty());
}

TEST(FirstAdvantageSetTest, G3WinningLine) {
  G3 g = MakeG3(1, 0, 0, 0);
  UniformPolicy u;
  TabularPolicy second;
  second.Set(g.a, {1.0, 0.0});
  second.Set(g.b, {1.0, 0.0});
  const Profile p{u, second};
  ASSERT_LT(ExpectedValue(g.game, p, 0), 1.0);
  EXPECT_EQ(FirstAdvantageSet(g.game, p, 1.0), std::vector<NodeId>{g.ax});
}

// Oracle: a first-player history qualifies when its value clears v and no
// strictly shorter first-player history on its path does.
std::vector<NodeId> FirstAdvantageOracle(const GameTree& game, const Profile& p,
                                         double v) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < game.NumNodes(); ++i) {
    const NodeId h = static_cast<NodeId>(i);
    if (game.PlayerToMove(h) != Player::kFirst) continue;
    if (ExpectedValue(game, p, h) < v) continue;
    bool first = true;
    for (NodeId c = game.Parent(h); c != kNoNode; c = game.Parent(c)) {
      if (game.PlayerToMove(c) == Player::kFirst &&
          ExpectedValue(game, p, c) >= v) {
        first = false;
      }
    }
    if (first) out.push_back(h);
  }
  return out;
}

TEST(FirstAdvantageSetTest, MatchesOracleAndIsAntichain) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomGameSpec spec{.depth = 6, .branching = 3, .full = false};
    GameTree game = GenerateRandomGame(seed, spec);
    TabularPolicy s1 = GenerateRandomPolicy(game, seed + 1);
    TabularPolicy s2 = GenerateRandomPolicy(game, seed + 2);
    const Profile p{s1, s2};
    for (double v : {0.2, 0.5, 0.7, 0.9}) {
      const std::vector<NodeId> set = FirstAdvantageSet(game, p, v);
      EXPECT_EQ(set, FirstAdvantageOracle(game, p, v));
      for (NodeId x : set) {
        for (NodeId y : set) {
          if (x != y) {
            EXPECT_FALSE(game.IsPrefix(x, y));
          }
        }
      }
    }
  }
}

TEST(AdvantageDistributionTest, DeterministicLineIsPointMass) {
  G3 g = MakeG3(1, 0, 0, 0);
  TabularPolicy pre;
  pre.Set(0, {1.0, 0.0});
  TabularPolicy second;
  second.Set(g.a, {1.0, 0.0});
  second.Set(g.b, {1.0, 0.0});
  UniformPolicy u;
  AdvantageDistribution d =
      ComputeAdvantageDistribution(g.game, Profile{u, second}, pre, 1.0);
  EXPECT_EQ(d.support, std::vector<NodeId>{g.ax});
  EXPECT_DOUBLE_EQ(d.p_norm, 1.0);
  EXPECT_EQ(Entropy(d), 0.0);
}

TEST(AdvantageDistributionTest, UnreachedSupportIsEmpty) {
  G3 g = MakeG3(0, 0, 1, 0);
  TabularPolicy pre;
  pre.Set(0, {1.0, 0.0});
  UniformPolicy u;
  AdvantageDistribution d =
      ComputeAdvantageDistribution(g.game, Profile{u, u}, pre, 1.0);
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(d.p_norm, 0.0);
  EXPECT_THROW(Entropy(d), EmptyDistribution);
}

TEST(AdvantageDistributionTest, G3UniformOpponent) {
  G3 g = MakeG3(1, 0, 0.6, 0.4);
  TabularPolicy pre;
  pre.Set(0, {1.0, 0.0});
  UniformPolicy u;
  AdvantageDistribution d =
      ComputeAdvantageDistribution(g.game, Profile{u, u}, pre, 1.0);
  EXPECT_EQ(d.support, std::vector<NodeId>{g.ax});
  EXPECT_DOUBLE_EQ(d.p_norm, 0.5);
  EXPECT_EQ(d.probs, std::vector<double>{1.0});
}

TEST(EntropyTest, KnownValues) {
  EXPECT_EQ(Entropy(std::vector<double>{1.0}), 0.0);
  EXPECT_NEAR(Entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}),
              1.386294361119891, 1e-12);
  EXPECT_NEAR(Entropy(std::vector<double>{0.5, 0.25, 0.25}),
              1.0397207708399179, 1e-12);
  for (int n = 1; n <= 64; ++n) {
    std::vector<double> uniform(static_cast<std::size_t>(n), 1.0 / n);
    EXPECT_NEAR(Entropy(uniform), std::log(n), 1e-12);
  }
  EXPECT_THROW(Entropy(std::vector<double>{}), EmptyDistribution);
}

TEST(TopMassTest, Examples) {
  EXPECT_EQ(Lemma1Mass(std::vector<double>{1.0}, 1), 1.0);
  EXPECT_NEAR(Lemma1Mass(std::vector<double>(5, 0.2), 5), 1.0, 1e-15);
  EXPECT_NEAR(Lemma1Mass(std::vector<double>{0.2, 0.5, 0.3}, 2), 0.8, 1e-15);
  EXPECT_EQ(Lemma1Mass(std::vector<double>{0.2, 0.8}, 0), 0.0);
  EXPECT_THROW(Lemma1Mass(std::vector<double>{1.0}, -1), InvalidInput);
}

TEST(TopMassTest, FuzzedMassBound) {
  SplitMix64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 60);
    // Exponent sharpens or flattens Dirichlet(1) draws.
    const double shape = 0.2 + 4.0 * rng.Uniform01();
    std::vector<double> probs(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& p : probs) {
      p = std::pow(-std::log1p(-rng.Uniform01()) + 1e-300, shape);
      total += p;
    }
    for (double& p : probs) p /= total;
    const double h = Entropy(probs);
    for (double gamma = 0.05; gamma < 1.0; gamma += 0.05) {
      const double zf = std::ceil(gamma * std::exp(h / (1.0 - gamma)));
      const long long z = zf > 1e15 ? n : static_cast<long long>(zf);
      EXPECT_GE(Lemma1Mass(probs, z), gamma - 1e-12)
          << "n=" << n << " gamma=" << gamma;
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000 * 19);
}

TEST(EntropyStrategyTest, BudgetCeiling) {
  EXPECT_EQ(Theorem1Budget(0.0, 0.5, 100), 1);
  EXPECT_EQ(Theorem1Budget(0.0, 0.999, 100), 1);
  EXPECT_EQ(Theorem1Budget(std::log(4.0), 0.5, 100),
            static_cast<long long>(std::ceil(0.5 * 16.0)));
  EXPECT_EQ(Theorem1Budget(50.0, 0.01, 7), 7);
}

TEST(EntropyStrategyTest, DeterministicLine) {
  // P1 a, P2 x, P1 c wins; pre follows that line.
  GameTree game;
  const NodeId a = game.AddChild(0, "a");
  const NodeId b = game.AddChild(0, "b");
  const NodeId ax = game.AddChild(a, "x");
  const NodeId ay = game.AddChild(a, "y");
  const NodeId bx = game.AddChild(b, "x");
  const NodeId axc = game.AddChild(ax, "c");
  const NodeId axd = game.AddChild(ax, "d");
  game.SetUtility(ay, 0.0);
  game.SetUtility(bx, 0.0);
  game.SetUtility(axc, 1.0);
  game.SetUtility(axd, 0.0);
  game = Sentinelize(game);
  auto base = std::make_shared<UniformPolicy>();
  auto pre = std::make_shared<TabularPolicy>();
  pre->Set(0, {1.0, 0.0});
  pre->Set(ax, {1.0, 0.0});
  TabularPolicy second;
  second.Set(a, {1.0, 0.0});
  for (double eps : {0.1, 0.5, 0.999}) {
    Theorem1Result r = Theorem1Strategy(game, base, second, pre, 1.0, eps);
    EXPECT_EQ(r.entropy, 0.0);
    EXPECT_EQ(r.z, 1);
    EXPECT_EQ(r.strategy.memo_set(), (std::vector<NodeId>{0, ax}));
    EXPECT_GE(r.value, (1.0 - eps) * 1.0 * r.distribution.p_norm);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
  }
}

TEST(EntropyStrategyTest, RandomGamesMeetBound) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomGameSpec spec{.depth = 6, .branching = 3, .full = seed % 2 == 0};
    GameTree game = GenerateRandomGame(seed, spec);
    auto base =
        std::make_shared<TabularPolicy>(GenerateRandomPolicy(game, seed + 1));
    auto pre = std::make_shared<TabularPolicy>(
        GenerateRandomPolicy(game, seed + 2, seed % 3 != 0));
    TabularPolicy second = GenerateRandomPolicy(game, seed + 3);
    for (double v : {0.3, 0.5, 0.7, 0.85}) {
      for (double eps : {0.1, 0.3, 0.6, 0.9}) {
        AdvantageDistribution d = ComputeAdvantageDistribution(
            game, Profile{*base, second}, *pre, v);
        if (d.empty()) continue;
        Theorem1Result r = Theorem1Strategy(game, base, second, pre, v, eps);
        r.strategy.Validate(game);
        EXPECT_GE(r.value, r.bound - 1e-12) << "seed " << seed;
        EXPECT_NEAR(r.bound, (1 - eps) * v * d.p_norm, 1e-15);
        EXPECT_LE(static_cast<long long>(r.strategy.size()),
                  static_cast<long long>(game.MaxLength()) * r.z);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(AdvantageBoundTest, Examples) {
  EXPECT_NEAR(Theorem2Bound(0.2, 0.5, 1e-5, 100),
              0.29 * (std::log(1000.0) - 5.0), 1e-12);
  EXPECT_NEAR(Theorem2Bound(0.2, 0.5, 1e-5, 100), 0.553268, 1e-4);
  EXPECT_EQ(Theorem2Bound(0.2, 0.5, std::exp(-5.0), 1), 0.0);
  EXPECT_EQ(Theorem2Bound(0.2, 0.5, 0.01, 10), 0.0);
  EXPECT_NEAR(Theorem2Bound(0.2, 0.21 + 1e-12, 1e-5, 100), 0.0, 1e-10);
  EXPECT_THROW(Theorem2Bound(0.2, 0.205, 1e-5, 100), InvalidInput);
  EXPECT_THROW(Theorem2Bound(0.2, 1.0, 1e-5, 100), InvalidInput);
  EXPECT_THROW(Theorem2Bound(0.2, 0.5, 0.0, 100), InvalidInput);
  EXPECT_THROW(Theorem2Bound(0.2, 0.5, 1e-5, 0), InvalidInput);
}

TEST(EntropyProfileTest, RowsFollowGrid) {
  G3 g = MakeG3(1, 0, 0.6, 0.4);
  auto base = std::make_shared<UniformPolicy>();
  auto pre = std::make_shared<TabularPolicy>();
  pre->Set(0, {1.0, 0.0});
  UniformPolicy second;
  const std::vector<double> grid = {0.0, 0.5, 1.0, 1.5};
  auto rows = EntropyProfile(g.game, base, second, pre, grid, 0.5);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].defined);
  EXPECT_DOUBLE_EQ(rows[0].p_norm, 1.0);
  EXPECT_TRUE(rows[2].defined);
  EXPECT_DOUBLE_EQ(rows[2].p_norm, 0.5);
  EXPECT_FALSE(rows[3].defined);
}

}  // namespace
}  // namespace metaprecomp
