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

#include "metaprecomp/entropy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include "metaprecomp/errors.h"

namespace metaprecomp {

std::vector<NodeId> FirstAdvantageSet(const Game& game, const Profile& profile,
                                      double v, std::size_t limit) {
  ExactValueCache values(game, profile, limit);
  std::vector<NodeId> out;
  if (v > 1.0) return out;
  std::vector<NodeId> stack = {game.Root()};
  while (!stack.empty()) {
    const NodeId h = stack.back();
    stack.pop_back();
    if (game.PlayerToMove(h) == Player::kFirst && values.Value(h) >= v) {
      out.push_back(h);
      continue;
    }
    for (int a = game.NumActions(h) - 1; a >= 0; --a) {
      stack.push_back(game.Child(h, a));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AdvantageDistribution ComputeAdvantageDistribution(const Game& game,
                                                   const Profile& profile,
                                                   const Policy& pre, double v,
                                                   std::size_t limit) {
  const std::vector<NodeId> set = FirstAdvantageSet(game, profile, v, limit);
  const Profile reach_profile{pre, profile.second};
  std::vector<std::pair<double, NodeId>> weighted;
  for (NodeId h : set) {
    const double r = ReachProbability(game, reach_profile, h);
    if (r > 0.0) weighted.emplace_back(r, h);
  }
  std::sort(weighted.begin(), weighted.end(), [](const auto& x, const auto& y) {
    return x.first > y.first || (x.first == y.first && x.second < y.second);
  });
  AdvantageDistribution d;
  d.v = v;
  for (const auto& [r, h] : weighted) d.p_norm += r;
  for (const auto& [r, h] : weighted) {
    d.support.push_back(h);
    d.probs.push_back(r / d.p_norm);
  }
  return d;
}

double Entropy(std::span<const double> probs) {
  if (probs.empty()) throw EmptyDistribution("entropy of an empty distribution");
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

double Entropy(const AdvantageDistribution& d) {
  if (d.empty()) {
    throw EmptyDistribution("no first-advantage history is reachable");
  }
  return Entropy(std::span<const double>(d.probs));
}

double Lemma1Mass(std::span<const double> probs, long long z) {
  if (z < 0) throw InvalidInput("z must be nonnegative");
  std::vector<double> sorted(probs.begin(), probs.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto take = static_cast<std::size_t>(
      std::min<long long>(z, static_cast<long long>(sorted.size())));
  return std::accumulate(sorted.begin(), sorted.begin() + take, 0.0);
}

long long Theorem1Budget(double entropy, double eps, long long cap) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("eps must lie in (0, 1)");
  const double exponent = entropy / eps;
  // Beyond this the count certainly exceeds any cap we accept.
  if (exponent > 700.0) return cap;
  const double z = std::ceil((1.0 - eps) * std::exp(exponent));
  return std::clamp<long long>(static_cast<long long>(std::min(z, 9e18)), 1,
                               cap);
}

Theorem1Result Theorem1Strategy(const Game& game,
                                std::shared_ptr<const Policy> base,
                                const Policy& second,
                                std::shared_ptr<const Policy> pre, double v,
                                double eps, std::size_t limit) {
  if (!base || !pre) throw InvalidInput("missing base or precompute policy");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("eps must lie in (0, 1)");
  AdvantageDistribution d = ComputeAdvantageDistribution(
      game, Profile{*base, second}, *pre, v, limit);
  const double h = Entropy(d);
  const long long z =
      Theorem1Budget(h, eps, static_cast<long long>(d.support.size()));

  std::vector<NodeId> memo;
  for (long long i = 0; i < z; ++i) {
    const NodeId target = d.support[static_cast<std::size_t>(i)];
    for (NodeId cur = game.Parent(target); cur != kNoNode;
         cur = game.Parent(cur)) {
      if (game.PlayerToMove(cur) == Player::kFirst) memo.push_back(cur);
    }
  }
  PrecompStrategy strategy(Player::kFirst, base, pre, std::move(memo));
  const PrecompPolicy play(strategy);
  const double value =
      ExpectedValue(game, Profile{play, second}, game.Root(), limit);
  const double bound = (1.0 - eps) * v * d.p_norm;
  return Theorem1Result{std::move(strategy), std::move(d), h, z, value, bound};
}

double Theorem2Bound(double v, double v_prime, double lambda1, int length) {
  if (!(v_prime > v + kTheorem2Slack) || !(v_prime < 1.0)) {
    throw InvalidInput("need v + 0.01 < v' < 1");
  }
  if (!(lambda1 > 0.0)) throw InvalidInput("lambda1 must be positive");
  if (length < 1) throw InvalidInput("L must be at least 1");
  const double gap = v_prime - v - kTheorem2Slack;
  const double log_term =
      std::log(1.0 / (lambda1 * static_cast<double>(length))) -
      kTheorem2LogOffset;
  return std::max(0.0, gap * log_term);
}

std::vector<EntropyProfileRow> EntropyProfile(
    const Game& game, std::shared_ptr<const Policy> base, const Policy& second,
    std::shared_ptr<const Policy> pre, std::span<const double> v_grid,
    double eps, std::size_t limit) {
  std::vector<EntropyProfileRow> rows;
  for (double v : v_grid) {
    EntropyProfileRow row;
    row.v = v;
    const AdvantageDistribution d = ComputeAdvantageDistribution(
        game, Profile{*base, second}, *pre, v, limit);
    row.p_norm = d.p_norm;
    if (!d.empty()) {
      const Theorem1Result r =
          Theorem1Strategy(game, base, second, pre, v, eps, limit);
      row.defined = true;
      row.entropy = r.entropy;
      row.z = r.z;
      row.memo_size = r.strategy.size();
      row.achieved_value = r.value;
      row.bound = r.bound;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace metaprecomp
