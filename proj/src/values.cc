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

#include "metaprecomp/values.h"

#include <string>
#include <vector>

#include "metaprecomp/errors.h"
#include "metaprecomp/rng.h"

namespace metaprecomp {

double ReachProbability(const Game& game, const Profile& profile, NodeId from,
                        NodeId to) {
  if (!game.Contains(from) || !game.Contains(to)) {
    throw InvalidInput("unknown history in reach query");
  }
  const int from_depth = game.Depth(from);
  double reach = 1.0;
  std::vector<double> probs;
  NodeId cur = to;
  while (game.Depth(cur) > from_depth) {
    const NodeId parent = game.Parent(cur);
    profile.For(game.PlayerToMove(parent)).Distribution(game, parent, probs);
    reach *= probs[game.ActionFromParent(cur)];
    cur = parent;
  }
  return cur == from ? reach : 0.0;
}

namespace {

struct Enumerator {
  const Game& game;
  const Profile& profile;
  std::size_t limit;
  std::size_t visited = 0;

  double Value(NodeId h) {
    if (++visited > limit) {
      throw EnumerationLimitExceeded(
          "exact evaluation exceeds " + std::to_string(limit) +
          " histories; use EstimateValue instead");
    }
    const int n = game.NumActions(h);
    if (n == 0) return game.Utility(h);
    const std::vector<double> probs =
        profile.For(game.PlayerToMove(h)).Distribution(game, h);
    double value = 0.0;
    for (int a = 0; a < n; ++a) {
      if (probs[a] > 0.0) value += probs[a] * Value(game.Child(h, a));
    }
    return value;
  }
};

}  // namespace

double ExpectedValue(const Game& game, const Profile& profile, NodeId h,
                     std::size_t limit) {
  if (!game.Contains(h)) throw InvalidInput("unknown history");
  Enumerator e{game, profile, limit};
  return e.Value(h);
}

ValueEstimate EstimateValue(const Game& game, const Profile& profile, NodeId h,
                            int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  if (!game.Contains(h)) throw InvalidInput("unknown history");
  std::vector<double> probs;
  double total = 0.0;
  for (int j = 0; j < samples; ++j) {
    SplitMix64 rng(DeriveSeed(seed, static_cast<std::uint64_t>(h),
                              static_cast<std::uint64_t>(j)));
    NodeId cur = h;
    while (true) {
      const int n = game.NumActions(cur);
      if (n == 0) break;
      profile.For(game.PlayerToMove(cur)).Distribution(game, cur, probs);
      const int a = n == 1 ? 0 : SampleIndex(probs, rng.Uniform01());
      cur = game.Child(cur, a);
    }
    total += game.Utility(cur);
  }
  return ValueEstimate{total / samples, samples, seed};
}

ExactValueCache::ExactValueCache(const Game& game, const Profile& profile,
                                 std::size_t limit)
    : game_(game), profile_(profile), limit_(limit) {}

double ExactValueCache::Value(NodeId h) {
  if (!game_.Contains(h)) throw InvalidInput("unknown history");
  return Compute(h);
}

double ExactValueCache::Compute(NodeId h) {
  if (auto it = values_.find(h); it != values_.end()) return it->second;
  if (++visited_ > limit_) {
    throw EnumerationLimitExceeded("exact evaluation exceeds " +
                                   std::to_string(limit_) + " histories");
  }
  const int n = game_.NumActions(h);
  double value = 0.0;
  if (n == 0) {
    value = game_.Utility(h);
  } else {
    profile_.For(game_.PlayerToMove(h)).Distribution(game_, h, buf_);
    const std::vector<double> probs = buf_;
    for (int a = 0; a < n; ++a) {
      if (probs[a] > 0.0) value += probs[a] * Compute(game_.Child(h, a));
    }
  }
  values_.emplace(h, value);
  return value;
}

}  // namespace metaprecomp
