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

#include "metaprecomp/random_game.h"

#include <cmath>
#include <string>
#include <vector>

#include "metaprecomp/errors.h"
#include "metaprecomp/rng.h"

namespace metaprecomp {

namespace {

double DrawUtility(SplitMix64& rng, UtilityLaw law) {
  const double u = rng.Uniform01();
  switch (law) {
    case UtilityLaw::kUniform:
      return u;
    case UtilityLaw::kBinary:
      return u < 0.5 ? 0.0 : 1.0;
    case UtilityLaw::kTernary:
      return u < 1.0 / 3 ? 0.0 : (u < 2.0 / 3 ? 0.5 : 1.0);
  }
  return u;
}

}  // namespace

GameTree GenerateRandomGame(std::uint64_t seed, const RandomGameSpec& spec) {
  if (spec.depth < 1 || spec.branching < 1) {
    throw InvalidInput("random game needs depth >= 1 and branching >= 1");
  }
  SplitMix64 rng(DeriveSeed(seed, 0x67616d65));
  GameTree game;
  std::vector<NodeId> frontier = {game.Root()};
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const NodeId h = frontier[i];
    const int d = game.Depth(h);
    bool leaf = d >= spec.depth;
    if (!leaf && !spec.full && d > 0) leaf = rng.Uniform01() < spec.early_stop;
    if (leaf) {
      game.SetUtility(h, DrawUtility(rng, spec.law));
      continue;
    }
    int actions = spec.branching;
    if (!spec.full) {
      actions = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                 spec.branching));
    }
    if (game.NumNodes() + actions > spec.max_histories) {
      throw InvalidInput("random game exceeds the history limit");
    }
    for (int a = 0; a < actions; ++a) {
      frontier.push_back(game.AddChild(h, "a" + std::to_string(a)));
    }
  }
  return Sentinelize(game);
}

TabularPolicy GenerateRandomPolicy(const GameTree& game, std::uint64_t seed,
                                   bool deterministic) {
  TabularPolicy policy;
  for (std::size_t i = 0; i < game.NumNodes(); ++i) {
    const NodeId h = static_cast<NodeId>(i);
    const int n = game.NumActions(h);
    if (n < 2) continue;
    SplitMix64 rng(DeriveSeed(seed, static_cast<std::uint64_t>(h)));
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    if (deterministic) {
      probs[rng() % static_cast<std::uint64_t>(n)] = 1.0;
    } else {
      // Normalized unit exponentials are Dirichlet(1, ..., 1).
      double total = 0.0;
      for (double& p : probs) {
        p = -std::log1p(-rng.Uniform01()) + 1e-12;
        total += p;
      }
      for (double& p : probs) p /= total;
    }
    policy.Set(h, std::move(probs));
  }
  return policy;
}

}  // namespace metaprecomp
