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

#ifndef METAPRECOMP_TESTS_TEST_UTIL_H_
#define METAPRECOMP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

#include "metaprecomp/game.h"
#include "metaprecomp/policy.h"
#include "metaprecomp/precompute.h"
#include "metaprecomp/values.h"

namespace metaprecomp::testing {

// Two-level test game: the first player picks a or b, the second x or y.
struct G3 {
  GameTree game;
  NodeId a, b, ax, ay, bx, by;
};

inline G3 MakeG3(double u_ax, double u_ay, double u_bx, double u_by) {
  G3 g;
  g.a = g.game.AddChild(0, "a");
  g.b = g.game.AddChild(0, "b");
  g.ax = g.game.AddChild(g.a, "x");
  g.ay = g.game.AddChild(g.a, "y");
  g.bx = g.game.AddChild(g.b, "x");
  g.by = g.game.AddChild(g.b, "y");
  g.game.SetUtility(g.ax, u_ax);
  g.game.SetUtility(g.ay, u_ay);
  g.game.SetUtility(g.bx, u_bx);
  g.game.SetUtility(g.by, u_by);
  return g;
}

// Same probability vector at every first-player (resp. second-player)
// history with two actions.
inline std::shared_ptr<TabularPolicy> ConstantPolicy(const GameTree& game,
                                                     std::vector<double> probs) {
  auto p = std::make_shared<TabularPolicy>();
  for (std::size_t i = 0; i < game.NumNodes(); ++i) {
    const NodeId h = static_cast<NodeId>(i);
    if (game.NumActions(h) == static_cast<int>(probs.size()) &&
        game.NumActions(h) > 1) {
      p->Set(h, probs);
    }
  }
  return p;
}

// Independent oracle: every non-terminal owner history of `game` whose reach
// under (pre for the owner, opponent) is at least `lambda`, computed
// directly with ReachProbability.
inline std::vector<NodeId> HighReachOwnerHistories(const GameTree& game,
                                                   Player owner,
                                                   const Policy& pre,
                                                   const Policy& opponent,
                                                   double lambda) {
  const Profile profile = owner == Player::kFirst ? Profile{pre, opponent}
                                                  : Profile{opponent, pre};
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < game.NumNodes(); ++i) {
    const NodeId h = static_cast<NodeId>(i);
    if (game.IsTerminal(h) || game.PlayerToMove(h) != owner) continue;
    if (ReachProbability(game, profile, h) >= lambda) out.push_back(h);
  }
  return out;
}

// Enumerates every memorization set drawn from `candidates` that is closed
// under owner prefixes (within the game). Calls `visit` for each; stops early
// once `limit` sets were produced and returns false in that case.
inline bool ForEachPrefixClosedSet(
    const GameTree& game, Player owner, const std::vector<NodeId>& candidates,
    const std::function<void(const std::vector<NodeId>&)>& visit,
    std::size_t limit = 1u << 20) {
  // Owner-parent of each candidate (nearest owner ancestor), or kNoNode.
  std::vector<NodeId> sorted = candidates;
  std::sort(sorted.begin(), sorted.end(), [&](NodeId x, NodeId y) {
    return game.Depth(x) < game.Depth(y) ||
           (game.Depth(x) == game.Depth(y) && x < y);
  });
  auto owner_parent = [&](NodeId h) {
    for (NodeId cur = game.Parent(h); cur != kNoNode; cur = game.Parent(cur)) {
      if (game.PlayerToMove(cur) == owner) return cur;
    }
    return kNoNode;
  };
  std::vector<NodeId> chosen;
  std::size_t produced = 0;
  bool complete = true;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (!complete) return;
    if (i == sorted.size()) {
      if (++produced > limit) {
        complete = false;
        return;
      }
      visit(chosen);
      return;
    }
    const NodeId h = sorted[i];
    rec(i + 1);
    const NodeId parent = owner_parent(h);
    const bool allowed =
        parent == kNoNode ||
        std::find(chosen.begin(), chosen.end(), parent) != chosen.end();
    if (allowed) {
      chosen.push_back(h);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return complete;
}

// Number of prefix-closed subsets of `candidates`, saturating at `cap`.
// A candidate whose nearest owner ancestor is not a candidate is a root.
inline double CountPrefixClosedSets(const GameTree& game, Player owner,
                                    const std::vector<NodeId>& candidates,
                                    double cap = 1e18) {
  auto owner_parent = [&](NodeId h) {
    for (NodeId cur = game.Parent(h); cur != kNoNode; cur = game.Parent(cur)) {
      if (game.PlayerToMove(cur) == owner) return cur;
    }
    return kNoNode;
  };
  auto is_candidate = [&](NodeId h) {
    return std::find(candidates.begin(), candidates.end(), h) !=
           candidates.end();
  };
  std::function<double(NodeId)> count = [&](NodeId h) -> double {
    double total = 1.0;
    for (NodeId c : candidates) {
      if (owner_parent(c) == h) total = std::min(cap, total * (1.0 + count(c)));
    }
    return total;
  };
  double total = 1.0;
  for (NodeId c : candidates) {
    const NodeId parent = owner_parent(c);
    if (parent == kNoNode || !is_candidate(parent)) {
      total = std::min(cap, total * (1.0 + count(c)));
    }
  }
  return total;
}

// Exhaustive optimum of the owner's meta value over every prefix-closed
// subset of the high-reach owner histories.
inline double BruteForceBestResponseValue(const GameTree& game, Player owner,
                                          std::shared_ptr<const Policy> base,
                                          const Policy& opponent,
                                          std::shared_ptr<const Policy> pre,
                                          double lambda) {
  const std::vector<NodeId> candidates =
      HighReachOwnerHistories(game, owner, *pre, opponent, lambda);
  double best = -1e300;
  ForEachPrefixClosedSet(game, owner, candidates,
                         [&](const std::vector<NodeId>& memo) {
                           PrecompStrategy s(owner, base, pre, memo);
                           best = std::max(best, ResponseValue(game, s,
                                                               opponent,
                                                               lambda));
                         });
  return best;
}

}  // namespace metaprecomp::testing

#endif  // METAPRECOMP_TESTS_TEST_UTIL_H_
